#include "tpm/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tpm/errors.hpp"

namespace tpm {

ObstacleShape ObstacleShape::none() {
    return {};
}

ObstacleShape ObstacleShape::disk(double cx, double cy, double r) {
    ObstacleShape s;
    s.kind = Kind::Disk;
    s.cx = cx;
    s.cy = cy;
    s.ax = r;
    return s;
}

ObstacleShape ObstacleShape::ellipse(double cx, double cy, double a, double b, double rotation) {
    ObstacleShape s;
    s.kind = Kind::Ellipse;
    s.cx = cx;
    s.cy = cy;
    s.ax = a;
    s.ay = b;
    s.rotation = rotation;
    return s;
}

ObstacleShape ObstacleShape::rectangle(double cx, double cy, double hx, double hy) {
    ObstacleShape s;
    s.kind = Kind::Rectangle;
    s.cx = cx;
    s.cy = cy;
    s.ax = hx;
    s.ay = hy;
    return s;
}

namespace {

// Signed "inside" measure: negative outside, positive inside, 0 on the boundary.
double inside_level(const ObstacleShape& s, double x, double y) {
    const double dx = x - s.cx;
    const double dy = y - s.cy;
    switch (s.kind) {
        case ObstacleShape::Kind::None:
            return -1.0;
        case ObstacleShape::Kind::Disk:
            return s.ax * s.ax - (dx * dx + dy * dy);
        case ObstacleShape::Kind::Ellipse: {
            const double c = std::cos(s.rotation), sn = std::sin(s.rotation);
            const double xi = c * dx + sn * dy;
            const double eta = -sn * dx + c * dy;
            return 1.0 - (xi / s.ax) * (xi / s.ax) - (eta / s.ay) * (eta / s.ay);
        }
        case ObstacleShape::Kind::Rectangle:
            return std::min(s.ax - std::abs(dx), s.ay - std::abs(dy));
    }
    return -1.0;
}

} // namespace

bool ObstacleShape::contains(double x, double y) const {
    return inside_level(*this, x, y) > 0.0;
}

bool ObstacleShape::contains_closed(double x, double y) const {
    if (kind == Kind::None) return false;
    return inside_level(*this, x, y) >= 0.0;
}

void ObstacleShape::bounding_half_widths(double& wx, double& wy) const {
    switch (kind) {
        case Kind::None:
            wx = wy = 0.0;
            return;
        case Kind::Disk:
            wx = wy = ax;
            return;
        case Kind::Ellipse: {
            const double c = std::cos(rotation), sn = std::sin(rotation);
            wx = std::sqrt(ax * ax * c * c + ay * ay * sn * sn);
            wy = std::sqrt(ax * ax * sn * sn + ay * ay * c * c);
            return;
        }
        case Kind::Rectangle:
            wx = ax;
            wy = ay;
            return;
    }
}

double ObstacleShape::area() const {
    switch (kind) {
        case Kind::None: return 0.0;
        case Kind::Disk: return std::numbers::pi * ax * ax;
        case Kind::Ellipse: return std::numbers::pi * ax * ay;
        case Kind::Rectangle: return 4.0 * ax * ay;
    }
    return 0.0;
}

std::string to_string(ObstacleShape::Kind k) {
    switch (k) {
        case ObstacleShape::Kind::None: return "none";
        case ObstacleShape::Kind::Disk: return "disk";
        case ObstacleShape::Kind::Ellipse: return "ellipse";
        case ObstacleShape::Kind::Rectangle: return "rectangle";
    }
    return "?";
}

SolidMask build_geometry(const CellGeometry& geom) {
    if (geom.n < 8) throw std::invalid_argument("build_geometry: n must be >= 8");
    if (geom.nz != 0 && geom.nz < 8)
        throw std::invalid_argument("build_geometry: nz must be >= 8 (or 0 for 2D-only)");

    const ObstacleShape& shape = geom.shape;
    const int n = geom.n;
    const double h = geom.h();

    if (shape.kind != ObstacleShape::Kind::None) {
        if (shape.ax <= 0.0 || (shape.kind != ObstacleShape::Kind::Disk && shape.ay <= 0.0))
            throw GeometryError("obstacle sizes must be positive");
        double wx = 0.0, wy = 0.0;
        shape.bounding_half_widths(wx, wy);
        const double slack_x = 0.5 - std::max(std::abs(shape.cx + wx), std::abs(shape.cx - wx));
        const double slack_y = 0.5 - std::max(std::abs(shape.cy + wy), std::abs(shape.cy - wy));
        if (std::min(slack_x, slack_y) < h)
            throw GeometryError("obstacle closure must stay at least one grid spacing inside the unit cell");
    }

    SolidMask mask;
    mask.n = n;
    mask.cell.assign(static_cast<size_t>(n) * n, 0);
    mask.uface.assign(static_cast<size_t>(n) * n, 0);
    mask.vface.assign(static_cast<size_t>(n) * n, 0);

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double xc = geom.center(i), yc = geom.center(j);
            mask.cell[mask.idx(i, j)] = shape.contains(xc, yc) ? 1 : 0;
            mask.uface[mask.idx(i, j)] = shape.contains_closed(geom.face(i), yc) ? 1 : 0;
            mask.vface[mask.idx(i, j)] = shape.contains_closed(xc, geom.face(j)) ? 1 : 0;
        }
    }

    // Mask consistency: a face with solid cells on both sides is solid.
    auto wrap = [n](int i) { return (i + n) % n; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (mask.cell_solid(wrap(i - 1), j) && mask.cell_solid(i, j))
                mask.uface[mask.idx(i, j)] = 1;
            if (mask.cell_solid(i, wrap(j - 1)) && mask.cell_solid(i, j))
                mask.vface[mask.idx(i, j)] = 1;
        }
    }

    mask.fluid_cells = 0;
    for (auto c : mask.cell)
        if (!c) ++mask.fluid_cells;
    mask.fluid_fraction = static_cast<double>(mask.fluid_cells) / (static_cast<double>(n) * n);
    if (mask.fluid_cells == 0) throw GeometryError("no fluid cells left at this resolution");

    // Periodic flood fill over fluid cells; adjacency only through fluid faces.
    std::vector<std::uint8_t> seen(static_cast<size_t>(n) * n, 0);
    int seed = -1;
    for (int c = 0; c < n * n; ++c) {
        if (!mask.cell[c]) {
            seed = c;
            break;
        }
    }
    std::vector<int> stack{seed};
    seen[seed] = 1;
    int reached = 0;
    while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        ++reached;
        const int i = c % n, j = c / n;
        struct Step { int ni, nj, fi, fj; bool ufc; };
        const Step steps[4] = {
            {wrap(i + 1), j, wrap(i + 1), j, true},  // right, through uface i+1
            {wrap(i - 1), j, i, j, true},            // left, through uface i
            {i, wrap(j + 1), i, wrap(j + 1), false}, // up, through vface j+1
            {i, wrap(j - 1), i, j, false},           // down, through vface j
        };
        for (const auto& s : steps) {
            const int nc = mask.idx(s.ni, s.nj);
            if (seen[nc] || mask.cell[nc]) continue;
            const bool face_solid = s.ufc ? mask.uface_solid(s.fi, s.fj) : mask.vface_solid(s.fi, s.fj);
            if (face_solid) continue;
            seen[nc] = 1;
            stack.push_back(nc);
        }
    }
    if (reached != mask.fluid_cells)
        throw GeometryError("fluid region is not a single connected component at this resolution");

    return mask;
}

} // namespace tpm
