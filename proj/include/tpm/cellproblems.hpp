#ifndef TPM_CELLPROBLEMS_HPP
#define TPM_CELLPROBLEMS_HPP

#include <array>
#include <vector>

#include "tpm/geometry.hpp"
#include "tpm/linsolve.hpp"
#include "tpm/regimes.hpp"
#include "tpm/staggered.hpp"

namespace tpm {

/// Effective 2x2 permeability tensor of the unit cell, tagged with the
/// regime whose local problem produced it. Symmetric positive definite;
/// the pre-symmetrization asymmetry is kept as a quality metric.
struct PermeabilityTensor {
    Regime regime = Regime::HTPM;
    double k[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    int n = 0;
    int nz = 0;
    std::array<SolveStats, 2> column_stats{};
    double asymmetry = 0.0; ///< |k12 - k21| / max|k| before symmetrization
    double fluid_fraction = 1.0;

    double min_eigenvalue() const;
    double max_abs() const;
};

/// Discrete cell-problem solutions per force direction. The velocity fields
/// are populated for the Stokes problems; the Hele-Shaw problem stores only
/// the cell pressure (in the 2D field's p array). Pressures have zero mean
/// over the fluid cells.
struct CellSolution {
    Regime regime = Regime::HTPM;
    int n = 0, nz = 0;
    std::array<StaggeredField2D, 2> field2d;
    std::array<StaggeredField3D, 2> field3d;
    std::array<double, 2> div_inf{}; ///< max |div w^i| over fluid cells
};

struct CellProblemResult {
    PermeabilityTensor tensor;
    CellSolution solution;
};

// --- assembled systems (exposed so tests can run dense oracles and custom
// --- right-hand sides against the exact same matrices) ---

/// Periodic 2D Stokes saddle system on the fluid DOFs:
///   [ A   G ] [u]   [e_i]        A = -Laplacian, G = gradient = -D^T,
///   [ G^T 0 ] [p] = [ 0 ],       D = divergence rows (G^T u = -div u).
struct Stokes2DSystem {
    CellGeometry geom;
    SolidMask mask;
    int nu = 0, nv = 0, np = 0;
    std::vector<int> umap, vmap, pmap; ///< full index -> compact DOF (-1 = solid)
    SparseMatrix S;

    int dim() const { return nu + nv + np; }
    /// Unit force e_{direction} (0 = x, 1 = y) on the fluid faces.
    std::vector<double> rhs(int direction) const;
    /// Constant-pressure nullspace vector over the fluid cells.
    std::vector<double> pressure_nullvec() const;
};

/// 3D Stokes saddle system on Z' x (0,1). Horizontal MAC staggering; the
/// velocities live on the interior z-levels k*hz (k = 1..nz-1) so the wall
/// no-slip is an exact Dirichlet condition, and the pressure lives on the nz
/// slab midpoints. The in-plane divergence averages the two bounding levels
/// of each slab, which keeps the gradient the exact negative transpose.
struct Stokes3DSystem {
    CellGeometry geom;
    SolidMask mask;
    int nu = 0, nv = 0, nw = 0, np = 0;
    std::vector<int> umap, vmap, wmap, pmap;
    SparseMatrix S;

    int dim() const { return nu + nv + nw + np; }
    /// Unit horizontal force (0 = x, 1 = y); 2 gives the zero vertical force
    /// of the third local problem.
    std::vector<double> rhs(int direction) const;
    std::vector<double> pressure_nullvec() const;
};

/// Finite-volume Laplace-Neumann system for the Hele-Shaw cell problem:
/// -Lap pi = 0 on fluid cells, (grad pi + e_i) . n = 0 on the obstacle,
/// periodic. Conductive faces are faces between two fluid cells that are not
/// themselves masked.
struct HeleShawSystem {
    CellGeometry geom;
    SolidMask mask;
    int np = 0;
    std::vector<int> pmap;
    SparseMatrix A;

    std::vector<double> rhs(int direction) const;
    std::vector<double> nullvec() const;
    bool xface_open(int i, int j) const;
    bool yface_open(int i, int j) const;
};

Stokes2DSystem assemble_stokes2d(const CellGeometry& geom, const SolidMask& mask);
Stokes3DSystem assemble_stokes3d(const CellGeometry& geom, const SolidMask& mask);
HeleShawSystem assemble_heleshaw(const CellGeometry& geom, const SolidMask& mask);

// --- cell problem solvers ---

/// Local 2D Stokes problem (-Lap w + grad pi = e_i, div w = 0, no-slip on
/// the obstacle, periodic). Requires a nonempty obstacle: with no solid
/// DOFs the periodic momentum balance cannot absorb the unit force.
/// K entries are face-midpoint sums of w over the fluid faces.
CellProblemResult solve_stokes2d_cell(const CellGeometry& geom, const SolverConfig& cfg);

/// Local 3D Stokes problem with no-slip walls at z = 0,1. The obstacle may
/// be empty (the walls absorb the momentum). Only the two horizontal force
/// directions are solved; the vertical problem has zero force and vanishes.
CellProblemResult solve_stokes3d_cell(const CellGeometry& geom, const SolverConfig& cfg);

/// Local Hele-Shaw problem; K entries are face-midpoint sums of
/// (grad pi + e_i) over conductive faces.
CellProblemResult solve_heleshaw_cell(const CellGeometry& geom, const SolverConfig& cfg);

/// Vertical lubrication reduction cross-check. Reconstructs the parabolic
/// vertical profile w = 0.5*(z3^2 - z3)*(grad pi + e_i) from the Hele-Shaw
/// pressure, averages it analytically across the thickness, and compares
/// -12 times that average (matrix A) against the Hele-Shaw tensor (B).
struct CrosscheckResult {
    double reconstructed[2][2]; ///< A
    double heleshaw[2][2];      ///< B = K_V
    double rel_diff;            ///< ||A-B|| / ||B||
};
CrosscheckResult reduced3d_crosscheck(const CellGeometry& geom, const SolverConfig& cfg);

/// Integral of the vertical profile 0.5*(z3^2 - z3) over (0,1): exactly
/// -1/12 in closed form; the midpoint variant converges at second order.
double vertical_profile_integral();
double vertical_profile_integral_midpoint(int nz);

/// Regime dispatch: HTPM -> 2D Stokes, PTPM -> 3D Stokes, VTPM -> Hele-Shaw.
/// The returned tensor is symmetrized, with the pre-symmetrization asymmetry
/// recorded, and validated (symmetry tolerance, positive definiteness,
/// trace bounds).
CellProblemResult permeability(Regime regime, const CellGeometry& geom, const SolverConfig& cfg);

/// Worker cap for the per-direction solves: min(2, hardware), further capped
/// by the TPM_THREADS environment variable.
int worker_cap();

} // namespace tpm

#endif
