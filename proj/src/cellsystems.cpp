#include <vector>

#include "tpm/cellproblems.hpp"

namespace tpm {

namespace {

int wrap(int i, int n) { return (i + n) % n; }

/// Compact numbering of unmasked DOFs; returns count.
int number_dofs(const std::vector<std::uint8_t>& solid, std::vector<int>& map) {
    map.assign(solid.size(), -1);
    int count = 0;
    for (size_t c = 0; c < solid.size(); ++c)
        if (!solid[c]) map[c] = count++;
    return count;
}

} // namespace

Stokes2DSystem assemble_stokes2d(const CellGeometry& geom, const SolidMask& mask) {
    Stokes2DSystem sys;
    sys.geom = geom;
    sys.mask = mask;
    const int n = geom.n;
    const double ih = n, ih2 = static_cast<double>(n) * n;

    sys.nu = number_dofs(mask.uface, sys.umap);
    sys.nv = number_dofs(mask.vface, sys.vmap);
    sys.np = number_dofs(mask.cell, sys.pmap);
    const int off_v = sys.nu, off_p = sys.nu + sys.nv;

    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(sys.dim()) * 7);

    auto idx = [n](int i, int j) { return wrap(j, n) * n + wrap(i, n); };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            // u momentum at x-face (i,j)
            if (const int r = sys.umap[idx(i, j)]; r >= 0) {
                t.push_back({r, r, 4.0 * ih2});
                const int nb[4] = {idx(i - 1, j), idx(i + 1, j), idx(i, j - 1), idx(i, j + 1)};
                for (int q = 0; q < 4; ++q)
                    if (const int c = sys.umap[nb[q]]; c >= 0) t.push_back({r, c, -ih2});
                if (const int c = sys.pmap[idx(i, j)]; c >= 0) t.push_back({r, off_p + c, ih});
                if (const int c = sys.pmap[idx(i - 1, j)]; c >= 0) t.push_back({r, off_p + c, -ih});
            }
            // v momentum at y-face (i,j)
            if (const int r = sys.vmap[idx(i, j)]; r >= 0) {
                t.push_back({off_v + r, off_v + r, 4.0 * ih2});
                const int nb[4] = {idx(i - 1, j), idx(i + 1, j), idx(i, j - 1), idx(i, j + 1)};
                for (int q = 0; q < 4; ++q)
                    if (const int c = sys.vmap[nb[q]]; c >= 0) t.push_back({off_v + r, off_v + c, -ih2});
                if (const int c = sys.pmap[idx(i, j)]; c >= 0) t.push_back({off_v + r, off_p + c, ih});
                if (const int c = sys.pmap[idx(i, j - 1)]; c >= 0) t.push_back({off_v + r, off_p + c, -ih});
            }
            // continuity at cell (i,j), written as -div u = 0
            if (const int r = sys.pmap[idx(i, j)]; r >= 0) {
                if (const int c = sys.umap[idx(i, j)]; c >= 0) t.push_back({off_p + r, c, ih});
                if (const int c = sys.umap[idx(i + 1, j)]; c >= 0) t.push_back({off_p + r, c, -ih});
                if (const int c = sys.vmap[idx(i, j)]; c >= 0) t.push_back({off_p + r, off_v + c, ih});
                if (const int c = sys.vmap[idx(i, j + 1)]; c >= 0) t.push_back({off_p + r, off_v + c, -ih});
            }
        }
    }
    sys.S = SparseMatrix::from_triplets(sys.dim(), std::move(t));
    return sys;
}

std::vector<double> Stokes2DSystem::rhs(int direction) const {
    std::vector<double> b(dim(), 0.0);
    if (direction == 0) {
        for (int c = 0; c < static_cast<int>(umap.size()); ++c)
            if (umap[c] >= 0) b[umap[c]] = 1.0;
    } else {
        for (int c = 0; c < static_cast<int>(vmap.size()); ++c)
            if (vmap[c] >= 0) b[nu + vmap[c]] = 1.0;
    }
    return b;
}

std::vector<double> Stokes2DSystem::pressure_nullvec() const {
    std::vector<double> z(dim(), 0.0);
    for (int c = nu + nv; c < dim(); ++c) z[c] = 1.0;
    return z;
}

Stokes3DSystem assemble_stokes3d(const CellGeometry& geom, const SolidMask& mask) {
    Stokes3DSystem sys;
    sys.geom = geom;
    sys.mask = mask;
    const int n = geom.n, nz = geom.nz;
    const double ih = n, ihz = nz;
    const double ih2 = ih * ih, ihz2 = ihz * ihz;

    // DOF layout: velocities on interior z-levels k = 1..nz-1, pressure on
    // slabs k = 0..nz-1. The horizontal masks are uniform in z (cylindrical
    // obstacle), so the maps store the in-plane compact index and the level
    // count stacks them.
    std::vector<int> umap2, vmap2, cmap2;
    const int nu2 = number_dofs(mask.uface, umap2);
    const int nv2 = number_dofs(mask.vface, vmap2);
    const int nc2 = number_dofs(mask.cell, cmap2);
    const int levels = nz - 1;

    sys.nu = nu2 * levels;
    sys.nv = nv2 * levels;
    sys.nw = nc2 * levels;
    sys.np = nc2 * nz;
    sys.umap = umap2;
    sys.vmap = vmap2;
    sys.wmap = cmap2;
    sys.pmap = cmap2;

    const int off_v = sys.nu, off_w = sys.nu + sys.nv, off_p = sys.nu + sys.nv + sys.nw;
    auto idx = [n](int i, int j) { return wrap(j, n) * n + wrap(i, n); };
    auto udof = [&](int c2, int k) { return umap2[c2] < 0 ? -1 : umap2[c2] * levels + (k - 1); };
    auto vdof = [&](int c2, int k) { return vmap2[c2] < 0 ? -1 : off_v + vmap2[c2] * levels + (k - 1); };
    auto wdof = [&](int c2, int k) { return cmap2[c2] < 0 ? -1 : off_w + cmap2[c2] * levels + (k - 1); };
    auto pdof = [&](int c2, int k) { return cmap2[c2] < 0 ? -1 : off_p + cmap2[c2] * nz + k; };

    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(sys.dim()) * 9);

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int c = idx(i, j);
            const int nbx[4] = {idx(i - 1, j), idx(i + 1, j), idx(i, j - 1), idx(i, j + 1)};

            for (int k = 1; k < nz; ++k) {
                // u momentum at x-face (i,j), z-level k
                if (const int r = udof(c, k); r >= 0) {
                    t.push_back({r, r, 4.0 * ih2 + 2.0 * ihz2});
                    for (int q = 0; q < 4; ++q)
                        if (const int d = udof(nbx[q], k); d >= 0) t.push_back({r, d, -ih2});
                    if (k > 1) t.push_back({r, udof(c, k - 1), -ihz2});
                    if (k < nz - 1) t.push_back({r, udof(c, k + 1), -ihz2});
                    // averaged in-plane pressure gradient over the two slabs
                    for (int s = k - 1; s <= k; ++s) {
                        if (const int d = pdof(c, s); d >= 0) t.push_back({r, d, 0.5 * ih});
                        if (const int d = pdof(idx(i - 1, j), s); d >= 0) t.push_back({r, d, -0.5 * ih});
                    }
                }
                // v momentum at y-face (i,j), z-level k
                if (const int r = vdof(c, k); r >= 0) {
                    t.push_back({r, r, 4.0 * ih2 + 2.0 * ihz2});
                    for (int q = 0; q < 4; ++q)
                        if (const int d = vdof(nbx[q], k); d >= 0) t.push_back({r, d, -ih2});
                    if (k > 1) t.push_back({r, vdof(c, k - 1), -ihz2});
                    if (k < nz - 1) t.push_back({r, vdof(c, k + 1), -ihz2});
                    for (int s = k - 1; s <= k; ++s) {
                        if (const int d = pdof(c, s); d >= 0) t.push_back({r, d, 0.5 * ih});
                        if (const int d = pdof(idx(i, j - 1), s); d >= 0) t.push_back({r, d, -0.5 * ih});
                    }
                }
                // w momentum at z-face (i,j,k)
                if (const int r = wdof(c, k); r >= 0) {
                    t.push_back({r, r, 4.0 * ih2 + 2.0 * ihz2});
                    for (int q = 0; q < 4; ++q)
                        if (const int d = wdof(nbx[q], k); d >= 0) t.push_back({r, d, -ih2});
                    if (k > 1) t.push_back({r, wdof(c, k - 1), -ihz2});
                    if (k < nz - 1) t.push_back({r, wdof(c, k + 1), -ihz2});
                    if (const int d = pdof(c, k); d >= 0) t.push_back({r, d, ihz});
                    if (const int d = pdof(c, k - 1); d >= 0) t.push_back({r, d, -ihz});
                }
            }

            // continuity at cell (i,j), slab k, written as -div u = 0
            if (cmap2[c] >= 0) {
                for (int k = 0; k < nz; ++k) {
                    const int r = pdof(c, k);
                    for (int lvl = k; lvl <= k + 1; ++lvl) {
                        if (lvl < 1 || lvl > nz - 1) continue; // wall levels carry zero velocity
                        if (const int d = udof(c, lvl); d >= 0) t.push_back({r, d, 0.5 * ih});
                        if (const int d = udof(idx(i + 1, j), lvl); d >= 0) t.push_back({r, d, -0.5 * ih});
                        if (const int d = vdof(c, lvl); d >= 0) t.push_back({r, d, 0.5 * ih});
                        if (const int d = vdof(idx(i, j + 1), lvl); d >= 0) t.push_back({r, d, -0.5 * ih});
                    }
                    if (k >= 1)
                        if (const int d = wdof(c, k); d >= 0) t.push_back({r, d, ihz});
                    if (k + 1 <= nz - 1)
                        if (const int d = wdof(c, k + 1); d >= 0) t.push_back({r, d, -ihz});
                }
            }
        }
    }
    sys.S = SparseMatrix::from_triplets(sys.dim(), std::move(t));
    return sys;
}

std::vector<double> Stokes3DSystem::rhs(int direction) const {
    std::vector<double> b(dim(), 0.0);
    if (direction == 2) return b; // third local problem: zero horizontal force
    const int levels = geom.nz - 1;
    if (direction == 0) {
        for (size_t c = 0; c < umap.size(); ++c)
            if (umap[c] >= 0)
                for (int k = 0; k < levels; ++k) b[umap[c] * levels + k] = 1.0;
    } else {
        for (size_t c = 0; c < vmap.size(); ++c)
            if (vmap[c] >= 0)
                for (int k = 0; k < levels; ++k) b[nu + vmap[c] * levels + k] = 1.0;
    }
    return b;
}

std::vector<double> Stokes3DSystem::pressure_nullvec() const {
    std::vector<double> z(dim(), 0.0);
    for (int c = nu + nv + nw; c < dim(); ++c) z[c] = 1.0;
    return z;
}

bool HeleShawSystem::xface_open(int i, int j) const {
    const int n = geom.n;
    return !mask.uface_solid(wrap(i, n), wrap(j, n)) &&
           !mask.cell_solid(wrap(i - 1, n), wrap(j, n)) && !mask.cell_solid(wrap(i, n), wrap(j, n));
}

bool HeleShawSystem::yface_open(int i, int j) const {
    const int n = geom.n;
    return !mask.vface_solid(wrap(i, n), wrap(j, n)) &&
           !mask.cell_solid(wrap(i, n), wrap(j - 1, n)) && !mask.cell_solid(wrap(i, n), wrap(j, n));
}

HeleShawSystem assemble_heleshaw(const CellGeometry& geom, const SolidMask& mask) {
    HeleShawSystem sys;
    sys.geom = geom;
    sys.mask = mask;
    const int n = geom.n;
    const double ih2 = static_cast<double>(n) * n;

    sys.np = number_dofs(mask.cell, sys.pmap);
    auto idx = [n](int i, int j) { return wrap(j, n) * n + wrap(i, n); };

    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(sys.np) * 5);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int r = sys.pmap[idx(i, j)];
            if (r < 0) continue;
            struct Face { bool open; int nb; };
            const Face faces[4] = {
                {sys.xface_open(i, j), sys.pmap[idx(i - 1, j)]},
                {sys.xface_open(i + 1, j), sys.pmap[idx(i + 1, j)]},
                {sys.yface_open(i, j), sys.pmap[idx(i, j - 1)]},
                {sys.yface_open(i, j + 1), sys.pmap[idx(i, j + 1)]},
            };
            for (const auto& f : faces) {
                if (!f.open) continue;
                t.push_back({r, r, ih2});
                t.push_back({r, f.nb, -ih2});
            }
        }
    }
    sys.A = SparseMatrix::from_triplets(sys.np, std::move(t));
    return sys;
}

std::vector<double> HeleShawSystem::rhs(int direction) const {
    // FV balance of (grad pi + e_i): the unit background flux enters through
    // open faces only, so cells next to the obstacle pick up a net source.
    const int n = geom.n;
    const double ih = n;
    std::vector<double> b(np, 0.0);
    auto idx = [n](int i, int j) { return wrap(j, n) * n + wrap(i, n); };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int r = pmap[idx(i, j)];
            if (r < 0) continue;
            if (direction == 0)
                b[r] = (xface_open(i + 1, j) ? ih : 0.0) + (xface_open(i, j) ? -ih : 0.0);
            else
                b[r] = (yface_open(i, j + 1) ? ih : 0.0) + (yface_open(i, j) ? -ih : 0.0);
        }
    }
    return b;
}

std::vector<double> HeleShawSystem::nullvec() const {
    return std::vector<double>(np, 1.0);
}

} // namespace tpm
