// Test-only helpers: dense renderings of the sparse operators, reference
// solves and deterministic random fields. These stay independent of the
// iterative solution paths they are used to check.
#ifndef TPM_TESTS_ORACLES_HPP
#define TPM_TESTS_ORACLES_HPP

#include <cmath>
#include <random>
#include <vector>

#include "tpm/linsolve.hpp"

namespace tpm::testing {

inline std::vector<double> dense_from_sparse(const SparseMatrix& a) {
    std::vector<double> d(static_cast<size_t>(a.dim) * a.dim, 0.0);
    for (int r = 0; r < a.dim; ++r)
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            d[static_cast<size_t>(r) * a.dim + a.col[k]] = a.val[k];
    return d;
}

/// Reference solve of the same linear system by dense partial-pivot LU
/// (bordered when a nullspace is declared).
inline std::vector<double> dense_reference_solve(const SparseMatrix& a, const std::vector<double>& b,
                                                 const std::vector<std::vector<double>>& nullspace = {}) {
    return dense_solve(dense_from_sparse(a), a.dim, b, nullspace);
}

inline std::vector<double> random_vector(size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

} // namespace tpm::testing

#endif
