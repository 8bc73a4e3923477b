#ifndef TPM_STAGGERED_HPP
#define TPM_STAGGERED_HPP

#include <string>
#include <vector>

#include "tpm/geometry.hpp"

namespace tpm {

/// MAC field on the periodic unit cell: u on x-normal faces, v on y-normal
/// faces, p on cell centers, all n*n with wrap-around in both directions.
struct StaggeredField2D {
    int n = 0;
    std::vector<double> u, v, p;

    explicit StaggeredField2D(int n_ = 0) { resize(n_); }
    void resize(int n_) {
        n = n_;
        const size_t m = static_cast<size_t>(n) * n;
        u.assign(m, 0.0);
        v.assign(m, 0.0);
        p.assign(m, 0.0);
    }
    double h() const { return 1.0 / n; }
    int idx(int i, int j) const { return ((j + n) % n) * n + ((i + n) % n); }
};

/// Staggered field on Z' x (0,1). Horizontally the layout is MAC (u on
/// x-faces, v on y-faces, w on cell centers); vertically the velocities sit
/// on the nz+1 z-levels k*hz with the wall levels k=0 and k=nz held at zero,
/// while p lives on the nz slab midpoints. Placing the tangential velocities
/// on z-levels makes the wall no-slip an exact Dirichlet condition.
struct StaggeredField3D {
    int n = 0, nz = 0;
    std::vector<double> u, v, w; ///< n*n*(nz+1), wall levels zero
    std::vector<double> p;       ///< n*n*nz

    StaggeredField3D(int n_ = 0, int nz_ = 0) { resize(n_, nz_); }
    void resize(int n_, int nz_) {
        n = n_;
        nz = nz_;
        const size_t plane = static_cast<size_t>(n) * n;
        u.assign(plane * (nz + 1), 0.0);
        v.assign(plane * (nz + 1), 0.0);
        w.assign(plane * (nz + 1), 0.0);
        p.assign(plane * nz, 0.0);
    }
    double h() const { return 1.0 / n; }
    double hz() const { return 1.0 / nz; }
    size_t vidx(int i, int j, int k) const {
        return static_cast<size_t>(k) * n * n + static_cast<size_t>((j + n) % n) * n + (i + n) % n;
    }
    size_t pidx(int i, int j, int k) const { return vidx(i, j, k); }
};

/// Conservative face-difference divergence, one value per pressure cell.
std::vector<double> divergence(const StaggeredField2D& f);
std::vector<double> divergence(const StaggeredField3D& f);

/// Discrete pressure gradient on the velocity layout (exact negative
/// transpose of the divergence). Returns a field with only u/v (and w)
/// populated.
StaggeredField2D gradient(const std::vector<double>& p, int n);
StaggeredField3D gradient(const std::vector<double>& p, int n, int nz);

/// Five/seven-point Laplacian of each velocity component, periodic in-plane;
/// the 3D version applies exact Dirichlet walls at the z-levels 0 and nz.
StaggeredField2D laplacian(const StaggeredField2D& f);
StaggeredField3D laplacian(const StaggeredField3D& f);

/// Cell-centered scalar Laplacian assembled as div(grad p) on the fully
/// periodic cell; used for operator-identity checks.
std::vector<double> scalar_laplacian(const std::vector<double>& p, int n);

/// Zero all velocity DOFs flagged solid (and, in 3D, the wall levels).
void apply_mask(StaggeredField2D& f, const SolidMask& mask);
void apply_mask(StaggeredField3D& f, const SolidMask& mask);

/// Write one component ("u","v","w","p") as CSV with header
/// i,j[,k],x,y[,z],value.
void dump_csv(const StaggeredField2D& f, const std::string& component, const std::string& path);
void dump_csv(const StaggeredField3D& f, const std::string& component, const std::string& path);

} // namespace tpm

#endif
