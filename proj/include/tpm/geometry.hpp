#ifndef TPM_GEOMETRY_HPP
#define TPM_GEOMETRY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tpm {

/// Parametric obstacle inside the periodic unit cell Z' = (-1/2,1/2)^2.
/// All lengths are in cell units. The closure of the obstacle must stay
/// strictly inside the cell.
struct ObstacleShape {
    enum class Kind { None, Disk, Ellipse, Rectangle };

    Kind kind = Kind::None;
    double cx = 0.0, cy = 0.0; ///< center
    double ax = 0.0, ay = 0.0; ///< radius (Disk: ax), semi-axes (Ellipse), half-widths (Rectangle)
    double rotation = 0.0;     ///< Ellipse only, radians

    static ObstacleShape none();
    static ObstacleShape disk(double cx, double cy, double r);
    static ObstacleShape ellipse(double cx, double cy, double a, double b, double rotation = 0.0);
    static ObstacleShape rectangle(double cx, double cy, double hx, double hy);

    /// Open-set membership (boundary excluded).
    bool contains(double x, double y) const;
    /// Closed-set membership (boundary included); used for face DOFs.
    bool contains_closed(double x, double y) const;
    /// Half-widths of the tightest axis-aligned bounding box around the
    /// obstacle, measured from its center. Exact for all supported shapes.
    void bounding_half_widths(double& wx, double& wy) const;
    /// Exact area of the obstacle.
    double area() const;
};

/// Periodic unit cell with an obstacle, n cells per in-plane side and
/// nz cells across the thickness for the 3D problems.
struct CellGeometry {
    ObstacleShape shape;
    int n = 0;
    int nz = 0;

    double h() const { return 1.0 / n; }
    double hz() const { return 1.0 / nz; }
    /// Coordinate of cell center i (same in both periodic directions).
    double center(int i) const { return -0.5 + (i + 0.5) * h(); }
    /// Coordinate of face i (left edge of cell i).
    double face(int i) const { return -0.5 + i * h(); }
};

/// Discrete obstacle masks on the staggered layout: true = solid.
/// Cell mask uses open membership at the cell center, face masks use closed
/// membership at the face DOF position; a face between two solid cells is
/// always solid.
struct SolidMask {
    int n = 0;
    std::vector<std::uint8_t> cell;  ///< n*n, pressure cells
    std::vector<std::uint8_t> uface; ///< n*n, x-normal faces
    std::vector<std::uint8_t> vface; ///< n*n, y-normal faces

    int idx(int i, int j) const { return j * n + i; }
    bool cell_solid(int i, int j) const { return cell[idx(i, j)] != 0; }
    bool uface_solid(int i, int j) const { return uface[idx(i, j)] != 0; }
    bool vface_solid(int i, int j) const { return vface[idx(i, j)] != 0; }

    int fluid_cells = 0;
    double fluid_fraction = 1.0; ///< fluid cells / n^2
};

/// Build and validate the discrete geometry. Checks that the obstacle stays
/// at least one grid spacing away from the cell boundary and that the fluid
/// cells form a single periodically connected component.
/// Throws GeometryError on violation, std::invalid_argument for bad n/nz.
SolidMask build_geometry(const CellGeometry& geom);

std::string to_string(ObstacleShape::Kind k);

} // namespace tpm

#endif
