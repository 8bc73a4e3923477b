#ifndef TPM_LINSOLVE_HPP
#define TPM_LINSOLVE_HPP

#include <vector>

namespace tpm {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Row-compressed sparse matrix. Assembly accumulates duplicate entries and
/// drops exact zeros. For the symmetric operators used in this project the
/// assembly check verifies A = A^T to 1e-13 relative.
struct SparseMatrix {
    int dim = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    static SparseMatrix from_triplets(int dim, std::vector<Triplet> entries,
                                      bool check_symmetric = true);

    void matvec(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;
    /// max |A_ij - A_ji| over max |A_ij|.
    double asymmetry() const;
    size_t nnz() const { return val.size(); }
};

struct SolverConfig {
    double rel_tol = 1e-10;
    /// 0 = automatic: max(10000, 50*sqrt(dim)).
    int max_iter = 0;
    /// Vectors spanning the known nullspace (orthonormalized internally);
    /// projected out of the right-hand side, the iterates and the solution.
    std::vector<std::vector<double>> nullspace;
    /// Optional diagonal (Jacobi) preconditioning; zero diagonals fall back
    /// to unit weight. Off by default.
    bool jacobi = false;
    /// Starting iterate; empty means zero.
    std::vector<double> initial_guess;
};

struct SolveStats {
    int iterations = 0;
    double rel_residual = 0.0; ///< ||Ax-b|| / ||b|| with b already projected
    bool converged = false;
    bool rhs_projected = false; ///< the supplied b had a nullspace component
};

struct SolveResult {
    std::vector<double> x;
    SolveStats stats;
};

/// Conjugate gradients for symmetric positive (semi)definite systems.
/// Deterministic; throws SolverError carrying the final residual when the
/// iteration limit is reached.
SolveResult cg_solve(const SparseMatrix& A, const std::vector<double>& b, const SolverConfig& cfg);

/// MINRES for symmetric (possibly indefinite or singular-consistent)
/// systems. Same contract as cg_solve.
SolveResult minres_solve(const SparseMatrix& A, const std::vector<double>& b, const SolverConfig& cfg);

/// Partial-pivoting dense solve, used as an oracle for small systems
/// (dimension guard 20000). With nullspace vectors the system is solved in
/// bordered form, which returns the representative orthogonal to the
/// declared nullspace. Throws on (numerically) singular systems without a
/// declared nullspace.
std::vector<double> dense_solve(std::vector<double> a_rowmajor, int dim, std::vector<double> b,
                                const std::vector<std::vector<double>>& nullspace = {});

/// In-place orthogonal projection of x against an orthonormal basis.
void project_out(std::vector<double>& x, const std::vector<std::vector<double>>& basis);
/// Gram-Schmidt orthonormalization (drops near-dependent vectors).
std::vector<std::vector<double>> orthonormalize(const std::vector<std::vector<double>>& vecs);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

} // namespace tpm

#endif
