#include "tpm/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tpm/errors.hpp"

namespace tpm {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) {
    return std::sqrt(dot(a, a));
}

SparseMatrix SparseMatrix::from_triplets(int dim, std::vector<Triplet> entries, bool check_symmetric) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.dim = dim;
    m.row_ptr.assign(dim + 1, 0);
    m.col.reserve(entries.size());
    m.val.reserve(entries.size());
    size_t k = 0;
    while (k < entries.size()) {
        const int r = entries[k].row, c = entries[k].col;
        double v = 0.0;
        while (k < entries.size() && entries[k].row == r && entries[k].col == c) v += entries[k++].value;
        if (v != 0.0) {
            m.col.push_back(c);
            m.val.push_back(v);
            ++m.row_ptr[r + 1];
        }
    }
    for (int r = 0; r < dim; ++r) m.row_ptr[r + 1] += m.row_ptr[r];

    if (check_symmetric) {
        const double rel = m.asymmetry();
        if (rel > 1e-13)
            throw std::invalid_argument("SparseMatrix::from_triplets: matrix is not symmetric (rel " +
                                        std::to_string(rel) + ")");
    }
    return m;
}

double SparseMatrix::asymmetry() const {
    double max_abs = 0.0;
    for (double v : val) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0.0) return 0.0;

    auto entry = [&](int r, int c) {
        const int lo = row_ptr[r], hi = row_ptr[r + 1];
        const auto it = std::lower_bound(col.begin() + lo, col.begin() + hi, c);
        if (it != col.begin() + hi && *it == c) return val[it - col.begin()];
        return 0.0;
    };
    double worst = 0.0;
    for (int r = 0; r < dim; ++r)
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            if (col[k] >= r) worst = std::max(worst, std::abs(val[k] - entry(col[k], r)));
    return worst / max_abs;
}

void SparseMatrix::matvec(const double* x, double* y) const {
    for (int r = 0; r < dim; ++r) {
        double s = 0.0;
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
        y[r] = s;
    }
}

std::vector<double> SparseMatrix::apply(const std::vector<double>& x) const {
    std::vector<double> y(dim, 0.0);
    matvec(x.data(), y.data());
    return y;
}

std::vector<std::vector<double>> orthonormalize(const std::vector<std::vector<double>>& vecs) {
    std::vector<std::vector<double>> basis;
    for (const auto& v : vecs) {
        std::vector<double> w = v;
        for (const auto& b : basis) {
            const double c = dot(w, b);
            for (size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
        }
        const double nrm = norm2(w);
        if (nrm > 1e-14 * std::max(1.0, norm2(v))) {
            for (double& x : w) x /= nrm;
            basis.push_back(std::move(w));
        }
    }
    return basis;
}

void project_out(std::vector<double>& x, const std::vector<std::vector<double>>& basis) {
    for (const auto& b : basis) {
        const double c = dot(x, b);
        for (size_t i = 0; i < x.size(); ++i) x[i] -= c * b[i];
    }
}

namespace {

struct IterSetup {
    std::vector<std::vector<double>> basis;
    std::vector<double> b;  // projected rhs
    std::vector<double> x0; // starting iterate (projected)
    std::vector<double> r0; // b - A x0
    std::vector<double> inv_diag; // empty unless Jacobi
    double bnorm = 0.0;
    int max_iter = 0;
    bool rhs_projected = false;
};

IterSetup prepare(const SparseMatrix& A, const std::vector<double>& b_in, const SolverConfig& cfg) {
    if (static_cast<int>(b_in.size()) != A.dim)
        throw std::invalid_argument("solver: rhs size does not match matrix dimension");
    if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0))
        throw std::invalid_argument("solver: rel_tol must lie in (0,1)");
    if (!cfg.initial_guess.empty() && static_cast<int>(cfg.initial_guess.size()) != A.dim)
        throw std::invalid_argument("solver: initial guess size does not match matrix dimension");

    IterSetup s;
    s.basis = orthonormalize(cfg.nullspace);
    s.b = b_in;
    if (!s.basis.empty()) {
        const double before = norm2(s.b);
        project_out(s.b, s.basis);
        const double after = norm2(s.b);
        if (after < before * (1.0 - 1e-14)) s.rhs_projected = true;
        if (after <= 1e-14 * before) {
            // rhs lies in the declared nullspace up to roundoff
            s.b.assign(s.b.size(), 0.0);
        }
    }
    s.bnorm = norm2(s.b);
    if (cfg.initial_guess.empty()) {
        s.x0.assign(A.dim, 0.0);
        s.r0 = s.b;
    } else {
        s.x0 = cfg.initial_guess;
        project_out(s.x0, s.basis);
        s.r0 = A.apply(s.x0);
        for (int i = 0; i < A.dim; ++i) s.r0[i] = s.b[i] - s.r0[i];
        project_out(s.r0, s.basis);
    }
    s.max_iter = cfg.max_iter > 0
                     ? cfg.max_iter
                     : std::max(10000, static_cast<int>(50.0 * std::sqrt(static_cast<double>(A.dim))));
    if (cfg.jacobi) {
        s.inv_diag.assign(A.dim, 1.0);
        for (int r = 0; r < A.dim; ++r)
            for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
                if (A.col[k] == r && A.val[k] != 0.0) s.inv_diag[r] = 1.0 / std::abs(A.val[k]);
    }
    return s;
}

double true_rel_residual(const SparseMatrix& A, const std::vector<double>& x,
                         const std::vector<double>& b, double bnorm,
                         const std::vector<std::vector<double>>& basis) {
    std::vector<double> r = A.apply(x);
    for (size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    project_out(r, basis);
    return norm2(r) / bnorm;
}

} // namespace

SolveResult cg_solve(const SparseMatrix& A, const std::vector<double>& b_in, const SolverConfig& cfg) {
    IterSetup s = prepare(A, b_in, cfg);
    const int n = A.dim;
    SolveResult out;
    out.x = s.x0;
    out.stats.rhs_projected = s.rhs_projected;
    if (s.bnorm == 0.0 && cfg.initial_guess.empty()) {
        out.stats.converged = true;
        return out;
    }
    const double rscale = s.bnorm > 0.0 ? s.bnorm : std::max(norm2(s.r0), 1e-300);
    if (norm2(s.r0) <= cfg.rel_tol * rscale) {
        out.stats.converged = true;
        out.stats.rel_residual = norm2(s.r0) / rscale;
        return out;
    }

    std::vector<double> r = s.r0, z(n), p(n), Ap(n);
    auto precond = [&](const std::vector<double>& rr, std::vector<double>& zz) {
        if (s.inv_diag.empty())
            zz = rr;
        else
            for (int i = 0; i < n; ++i) zz[i] = s.inv_diag[i] * rr[i];
        project_out(zz, s.basis);
    };
    precond(r, z);
    p = z;
    double rz = dot(r, z);

    for (int it = 1; it <= s.max_iter; ++it) {
        A.matvec(p.data(), Ap.data());
        project_out(Ap, s.basis);
        const double pAp = dot(p, Ap);
        if (pAp <= 0.0)
            throw SolverError("cg_solve: operator is not positive definite on the working subspace",
                              norm2(r) / rscale, it);
        const double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) out.x[i] += alpha * p[i];
        for (int i = 0; i < n; ++i) r[i] -= alpha * Ap[i];

        if (norm2(r) <= cfg.rel_tol * rscale) {
            const double tr = true_rel_residual(A, out.x, s.b, rscale, s.basis);
            if (tr <= cfg.rel_tol) {
                project_out(out.x, s.basis);
                out.stats.iterations = it;
                out.stats.rel_residual = tr;
                out.stats.converged = true;
                return out;
            }
        }
        precond(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("cg_solve: no convergence within iteration limit",
                      true_rel_residual(A, out.x, s.b, rscale, s.basis), s.max_iter);
}

SolveResult minres_solve(const SparseMatrix& A, const std::vector<double>& b_in, const SolverConfig& cfg) {
    IterSetup s = prepare(A, b_in, cfg);
    const int n = A.dim;
    SolveResult out;
    out.x = s.x0;
    out.stats.rhs_projected = s.rhs_projected;
    if (s.bnorm == 0.0 && cfg.initial_guess.empty()) {
        out.stats.converged = true;
        return out;
    }
    const double rscale = s.bnorm > 0.0 ? s.bnorm : std::max(norm2(s.r0), 1e-300);

    auto msolve = [&](const std::vector<double>& rr) {
        std::vector<double> y = rr;
        if (!s.inv_diag.empty())
            for (int i = 0; i < n; ++i) y[i] *= s.inv_diag[i];
        project_out(y, s.basis);
        return y;
    };

    // Lanczos-based MINRES with Givens QR on the tridiagonal (Paige-Saunders).
    std::vector<double> r1 = s.r0, r2 = s.r0;
    std::vector<double> y = msolve(r1);
    double beta1 = dot(r1, y);
    if (beta1 <= 0.0 || norm2(s.r0) <= cfg.rel_tol * rscale) {
        out.stats.converged = true; // starting iterate already solves the system
        out.stats.rel_residual = norm2(s.r0) / rscale;
        return out;
    }
    beta1 = std::sqrt(beta1);

    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
    double cs = -1.0, sn = 0.0;
    std::vector<double> w(n, 0.0), w1(n, 0.0), w2(n, 0.0), v(n);

    for (int it = 1; it <= s.max_iter; ++it) {
        const double inv_beta = 1.0 / beta;
        for (int i = 0; i < n; ++i) v[i] = y[i] * inv_beta;
        std::vector<double> av(n);
        A.matvec(v.data(), av.data());
        project_out(av, s.basis);
        if (it >= 2)
            for (int i = 0; i < n; ++i) av[i] -= (beta / oldb) * r1[i];
        const double alfa = dot(v, av);
        for (int i = 0; i < n; ++i) av[i] -= (alfa / beta) * r2[i];
        r1 = r2;
        r2 = av;
        y = msolve(r2);
        oldb = beta;
        const double beta2 = dot(r2, y);
        beta = beta2 > 0.0 ? std::sqrt(beta2) : 0.0;

        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        double gamma = std::sqrt(gbar * gbar + beta * beta);
        gamma = std::max(gamma, 1e-300);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        w1 = w2;
        w2 = w;
        for (int i = 0; i < n; ++i) w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
        for (int i = 0; i < n; ++i) out.x[i] += phi * w[i];

        if (phibar <= cfg.rel_tol * rscale || beta == 0.0) {
            const double tr = true_rel_residual(A, out.x, s.b, rscale, s.basis);
            if (tr <= cfg.rel_tol) {
                project_out(out.x, s.basis);
                out.stats.iterations = it;
                out.stats.rel_residual = tr;
                out.stats.converged = true;
                return out;
            }
            if (beta == 0.0)
                throw SolverError("minres_solve: Lanczos breakdown before convergence", tr, it);
        }
    }
    throw SolverError("minres_solve: no convergence within iteration limit",
                      true_rel_residual(A, out.x, s.b, rscale, s.basis), s.max_iter);
}

std::vector<double> dense_solve(std::vector<double> a, int dim, std::vector<double> b,
                                const std::vector<std::vector<double>>& nullspace) {
    if (dim > 20000) throw std::invalid_argument("dense_solve: dimension guard exceeded (20000)");
    if (static_cast<int>(a.size()) != dim * dim || static_cast<int>(b.size()) != dim)
        throw std::invalid_argument("dense_solve: shape mismatch");

    const auto basis = orthonormalize(nullspace);
    const int m = static_cast<int>(basis.size());
    const int nd = dim + m;

    // Bordered system [[A, N],[N^T, 0]]: unique, and returns the solution
    // component orthogonal to the declared nullspace.
    std::vector<double> lu(static_cast<size_t>(nd) * nd, 0.0);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) lu[static_cast<size_t>(r) * nd + c] = a[static_cast<size_t>(r) * dim + c];
    for (int j = 0; j < m; ++j)
        for (int r = 0; r < dim; ++r) {
            lu[static_cast<size_t>(r) * nd + dim + j] = basis[j][r];
            lu[static_cast<size_t>(dim + j) * nd + r] = basis[j][r];
        }
    std::vector<double> rhs(nd, 0.0);
    std::copy(b.begin(), b.end(), rhs.begin());

    double scale = 0.0;
    for (double v : lu) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;

    std::vector<int> piv(nd);
    for (int k = 0; k < nd; ++k) {
        int pr = k;
        double pmax = std::abs(lu[static_cast<size_t>(k) * nd + k]);
        for (int r = k + 1; r < nd; ++r) {
            const double v = std::abs(lu[static_cast<size_t>(r) * nd + k]);
            if (v > pmax) {
                pmax = v;
                pr = r;
            }
        }
        if (pmax < 1e-13 * scale)
            throw std::runtime_error("dense_solve: matrix is numerically singular (declare the nullspace)");
        piv[k] = pr;
        if (pr != k) {
            for (int c = 0; c < nd; ++c)
                std::swap(lu[static_cast<size_t>(k) * nd + c], lu[static_cast<size_t>(pr) * nd + c]);
            std::swap(rhs[k], rhs[pr]);
        }
        const double inv_p = 1.0 / lu[static_cast<size_t>(k) * nd + k];
        for (int r = k + 1; r < nd; ++r) {
            const double f = lu[static_cast<size_t>(r) * nd + k] * inv_p;
            if (f == 0.0) continue;
            lu[static_cast<size_t>(r) * nd + k] = 0.0;
            for (int c = k + 1; c < nd; ++c)
                lu[static_cast<size_t>(r) * nd + c] -= f * lu[static_cast<size_t>(k) * nd + c];
            rhs[r] -= f * rhs[k];
        }
    }
    for (int r = nd - 1; r >= 0; --r) {
        double sum = rhs[r];
        for (int c = r + 1; c < nd; ++c) sum -= lu[static_cast<size_t>(r) * nd + c] * rhs[c];
        rhs[r] = sum / lu[static_cast<size_t>(r) * nd + r];
    }
    rhs.resize(dim);
    return rhs;
}

} // namespace tpm
