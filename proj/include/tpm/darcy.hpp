#ifndef TPM_DARCY_HPP
#define TPM_DARCY_HPP

#include <vector>

#include "tpm/cellproblems.hpp"
#include "tpm/linsolve.hpp"
#include "tpm/regimes.hpp"

namespace tpm {

/// Rectangular macroscale domain (0,Lx)x(0,Ly) with m x my pressure cells,
/// a cell-centered body force density and the fluid viscosity.
struct MacroDomain {
    double lx = 1.0, ly = 1.0;
    int m = 0, my = 0;
    double eta = 1.0;
    std::vector<double> fx, fy; ///< m*my, cell-centered

    double hx() const { return lx / m; }
    double hy() const { return ly / my; }
    int idx(int i, int j) const { return j * m + i; }
    double xc(int i) const { return (i + 0.5) * hx(); }
    double yc(int j) const { return (j + 0.5) * hy(); }

    static MacroDomain uniform_force(double lx, double ly, int m, int my, double eta,
                                     double fx, double fy);
    void validate() const;
};

/// Macroscale pressure (zero mean) and face-centered averaged velocity.
/// Boundary faces carry no velocity DOF: V.n = 0 on the boundary holds by
/// construction, and there is no vertical component at the macro scale.
struct DarcySolution {
    int m = 0, my = 0;
    double hx = 0.0, hy = 0.0;
    std::vector<double> p;  ///< m*my cell centers, zero mean
    std::vector<double> vx; ///< (m+1)*my x-faces, first/last column zero
    std::vector<double> vy; ///< m*(my+1) y-faces, first/last row zero
    SolveStats stats;
    double div_inf = 0.0;       ///< max |div V| over cells
    double boundary_flux = 0.0; ///< total boundary flux (identically zero)
    double prefactor = 1.0;     ///< 1/eta, or 1/(12 eta) in the very-thin regime

    int vx_idx(int i, int j) const { return j * (m + 1) + i; }
    int vy_idx(int i, int j) const { return j * m + i; }
};

/// Fields after restoring the physical velocity scale eps^vel_scale_exp.
struct ScaledApproximation {
    double epsilon = 1.0;
    double factor = 1.0;
    DarcySolution fields; ///< P unchanged, V multiplied by the factor
};

/// Solve div( c K (f - grad P) ) = 0 with no-flux boundary (c = 1/eta, or
/// 1/(12 eta) when K comes from the very-thin regime), then reconstruct the
/// face velocity from the same fluxes. Throws std::invalid_argument for a
/// non-SPD tensor; solver failures propagate.
DarcySolution solve_darcy(const MacroDomain& domain, const PermeabilityTensor& K,
                          const SolverConfig& cfg = {});

/// Apply the regime velocity scaling. Refuses (ValidityError) when the
/// report says the Darcy model is invalid at this Reynolds exponent.
ScaledApproximation scale_back(const DarcySolution& sol, const ExponentReport& report, double epsilon);

} // namespace tpm

#endif
