#include "tpm/darcy.hpp"

#include <cmath>
#include <stdexcept>

#include "tpm/errors.hpp"

namespace tpm {

MacroDomain MacroDomain::uniform_force(double lx, double ly, int m, int my, double eta,
                                       double fx_, double fy_) {
    MacroDomain d;
    d.lx = lx;
    d.ly = ly;
    d.m = m;
    d.my = my;
    d.eta = eta;
    d.fx.assign(static_cast<size_t>(m) * my, fx_);
    d.fy.assign(static_cast<size_t>(m) * my, fy_);
    return d;
}

void MacroDomain::validate() const {
    if (!(lx > 0.0 && ly > 0.0)) throw std::invalid_argument("macro domain: Lx, Ly must be positive");
    if (m < 2 || my < 2) throw std::invalid_argument("macro domain: need at least 2x2 cells");
    if (!(eta > 0.0)) throw std::invalid_argument("macro domain: viscosity must be positive");
    if (fx.size() != static_cast<size_t>(m) * my || fy.size() != fx.size())
        throw std::invalid_argument("macro domain: force arrays must be m*my cell-centered");
    for (size_t c = 0; c < fx.size(); ++c)
        if (!std::isfinite(fx[c]) || !std::isfinite(fy[c]))
            throw std::invalid_argument("macro domain: force must be finite");
}

namespace {

/// Gradient/averaging geometry for the cell-centered scheme. Interior
/// x-faces are (i,j), i = 1..m-1; interior y-faces (i,j), j = 1..my-1.
/// The cross-gradient at a face is the quarter-weighted average of the up
/// to four neighboring interior faces of the other direction (terms past
/// the boundary are dropped, consistent with the no-flux condition).
struct FaceOps {
    const MacroDomain& d;
    int nxf, nyf;

    explicit FaceOps(const MacroDomain& dom)
        : d(dom), nxf((dom.m - 1) * dom.my), nyf(dom.m * (dom.my - 1)) {}

    int xf(int i, int j) const { return j * (d.m - 1) + (i - 1); } // i in 1..m-1
    int yf(int i, int j) const { return (j - 1) * d.m + i; }       // j in 1..my-1

    std::vector<double> grad_x(const std::vector<double>& p) const {
        std::vector<double> g(nxf, 0.0);
        const double ihx = 1.0 / d.hx();
        for (int j = 0; j < d.my; ++j)
            for (int i = 1; i < d.m; ++i) g[xf(i, j)] = (p[d.idx(i, j)] - p[d.idx(i - 1, j)]) * ihx;
        return g;
    }
    std::vector<double> grad_y(const std::vector<double>& p) const {
        std::vector<double> g(nyf, 0.0);
        const double ihy = 1.0 / d.hy();
        for (int j = 1; j < d.my; ++j)
            for (int i = 0; i < d.m; ++i) g[yf(i, j)] = (p[d.idx(i, j)] - p[d.idx(i, j - 1)]) * ihy;
        return g;
    }
    std::vector<double> avg_x(const std::vector<double>& f) const { // cell values -> x-faces
        std::vector<double> g(nxf, 0.0);
        for (int j = 0; j < d.my; ++j)
            for (int i = 1; i < d.m; ++i) g[xf(i, j)] = 0.5 * (f[d.idx(i, j)] + f[d.idx(i - 1, j)]);
        return g;
    }
    std::vector<double> avg_y(const std::vector<double>& f) const {
        std::vector<double> g(nyf, 0.0);
        for (int j = 1; j < d.my; ++j)
            for (int i = 0; i < d.m; ++i) g[yf(i, j)] = 0.5 * (f[d.idx(i, j)] + f[d.idx(i, j - 1)]);
        return g;
    }
    /// y-face values averaged onto x-faces.
    std::vector<double> ytox(const std::vector<double>& gy) const {
        std::vector<double> out(nxf, 0.0);
        for (int j = 0; j < d.my; ++j)
            for (int i = 1; i < d.m; ++i) {
                double s = 0.0;
                for (int ic : {i - 1, i})
                    for (int jc : {j, j + 1})
                        if (jc >= 1 && jc <= d.my - 1) s += 0.25 * gy[yf(ic, jc)];
                out[xf(i, j)] = s;
            }
        return out;
    }
    /// Transpose of ytox: x-face values spread onto y-faces.
    std::vector<double> xtoy(const std::vector<double>& gx) const {
        std::vector<double> out(nyf, 0.0);
        for (int j = 0; j < d.my; ++j)
            for (int i = 1; i < d.m; ++i)
                for (int ic : {i - 1, i})
                    for (int jc : {j, j + 1})
                        if (jc >= 1 && jc <= d.my - 1) out[yf(ic, jc)] += 0.25 * gx[xf(i, j)];
        return out;
    }
};

} // namespace

DarcySolution solve_darcy(const MacroDomain& domain, const PermeabilityTensor& K,
                          const SolverConfig& cfg) {
    domain.validate();
    if (!(K.min_eigenvalue() > 0.0) || std::abs(K.k[0][1] - K.k[1][0]) > 1e-12 * std::max(K.max_abs(), 1e-300))
        throw std::invalid_argument("solve_darcy: permeability tensor must be symmetric positive definite");

    const int m = domain.m, my = domain.my;
    const int ncell = m * my;
    const double hx = domain.hx(), hy = domain.hy();
    const double area = hx * hy;
    const double k11 = K.k[0][0], k12 = K.k[0][1], k22 = K.k[1][1];
    const FaceOps ops(domain);

    // A = G^T M G with M = [[k11, k12*T],[k12*T^T, k22]], assembled per
    // quadrature face; symmetric by construction.
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(ncell) * 16);
    const double ihx = 1.0 / hx, ihy = 1.0 / hy;

    auto emit_pair = [&t](int ca, double wa, int cb, double wb, double coef) {
        t.push_back({ca, cb, coef * wa * wb});
    };

    for (int j = 0; j < my; ++j) {
        for (int i = 1; i < m; ++i) {
            const int cl = domain.idx(i - 1, j), cr = domain.idx(i, j);
            // k11 gx gx
            for (auto [c1, w1] : {std::pair{cr, ihx}, std::pair{cl, -ihx}})
                for (auto [c2, w2] : {std::pair{cr, ihx}, std::pair{cl, -ihx}})
                    emit_pair(c1, w1, c2, w2, k11 * area);
            if (k12 != 0.0) {
                // k12 [ gx (T gy) + (T gy) gx ] — both orders emitted
                for (int ic : {i - 1, i})
                    for (int jc : {j, j + 1}) {
                        if (jc < 1 || jc > my - 1) continue;
                        const int ct = domain.idx(ic, jc), cb = domain.idx(ic, jc - 1);
                        for (auto [c1, w1] : {std::pair{cr, ihx}, std::pair{cl, -ihx}})
                            for (auto [c2, w2] : {std::pair{ct, 0.25 * ihy}, std::pair{cb, -0.25 * ihy}}) {
                                emit_pair(c1, w1, c2, w2, k12 * area);
                                emit_pair(c2, w2, c1, w1, k12 * area);
                            }
                    }
            }
        }
    }
    for (int j = 1; j < my; ++j)
        for (int i = 0; i < m; ++i) {
            const int cb = domain.idx(i, j - 1), ct = domain.idx(i, j);
            for (auto [c1, w1] : {std::pair{ct, ihy}, std::pair{cb, -ihy}})
                for (auto [c2, w2] : {std::pair{ct, ihy}, std::pair{cb, -ihy}})
                    emit_pair(c1, w1, c2, w2, k22 * area);
        }
    const SparseMatrix A = SparseMatrix::from_triplets(ncell, std::move(t));

    // rhs b = G^T M F with the force averaged onto faces
    const std::vector<double> fxf = ops.avg_x(domain.fx);
    const std::vector<double> fyf = ops.avg_y(domain.fy);
    const std::vector<double> fy_on_x = ops.ytox(fyf);
    const std::vector<double> fx_on_y = ops.xtoy(fxf);
    std::vector<double> b(ncell, 0.0);
    for (int j = 0; j < my; ++j)
        for (int i = 1; i < m; ++i) {
            const double flux = (k11 * fxf[ops.xf(i, j)] + k12 * fy_on_x[ops.xf(i, j)]) * area;
            b[domain.idx(i, j)] += flux * ihx;
            b[domain.idx(i - 1, j)] -= flux * ihx;
        }
    for (int j = 1; j < my; ++j)
        for (int i = 0; i < m; ++i) {
            const double flux = (k12 * fx_on_y[ops.yf(i, j)] + k22 * fyf[ops.yf(i, j)]) * area;
            b[domain.idx(i, j)] += flux * ihy;
            b[domain.idx(i, j - 1)] -= flux * ihy;
        }

    SolverConfig scfg = cfg;
    scfg.nullspace.push_back(std::vector<double>(ncell, 1.0));
    const SolveResult res = cg_solve(A, b, scfg);

    DarcySolution sol;
    sol.m = m;
    sol.my = my;
    sol.hx = hx;
    sol.hy = hy;
    sol.p = res.x;
    sol.stats = res.stats;
    sol.prefactor = (K.regime == Regime::VTPM) ? 1.0 / (12.0 * domain.eta) : 1.0 / domain.eta;

    // zero mean exactly
    double mean = 0.0;
    for (double v : sol.p) mean += v;
    mean /= ncell;
    for (double& v : sol.p) v -= mean;

    // face velocities from the same flux expressions; boundary faces stay 0
    const std::vector<double> gx = ops.grad_x(sol.p);
    const std::vector<double> gy = ops.grad_y(sol.p);
    std::vector<double> dxv(ops.nxf), dyv(ops.nyf);
    for (int f = 0; f < ops.nxf; ++f) dxv[f] = fxf[f] - gx[f];
    for (int f = 0; f < ops.nyf; ++f) dyv[f] = fyf[f] - gy[f];
    const std::vector<double> dy_on_x = ops.ytox(dyv);
    const std::vector<double> dx_on_y = ops.xtoy(dxv);

    sol.vx.assign(static_cast<size_t>(m + 1) * my, 0.0);
    sol.vy.assign(static_cast<size_t>(m) * (my + 1), 0.0);
    for (int j = 0; j < my; ++j)
        for (int i = 1; i < m; ++i)
            sol.vx[sol.vx_idx(i, j)] = sol.prefactor * (k11 * dxv[ops.xf(i, j)] + k12 * dy_on_x[ops.xf(i, j)]);
    for (int j = 1; j < my; ++j)
        for (int i = 0; i < m; ++i)
            sol.vy[sol.vy_idx(i, j)] = sol.prefactor * (k12 * dx_on_y[ops.yf(i, j)] + k22 * dyv[ops.yf(i, j)]);

    sol.div_inf = 0.0;
    double total_div = 0.0;
    for (int j = 0; j < my; ++j)
        for (int i = 0; i < m; ++i) {
            const double div = (sol.vx[sol.vx_idx(i + 1, j)] - sol.vx[sol.vx_idx(i, j)]) / hx +
                               (sol.vy[sol.vy_idx(i, j + 1)] - sol.vy[sol.vy_idx(i, j)]) / hy;
            sol.div_inf = std::max(sol.div_inf, std::abs(div));
            total_div += div * area;
        }
    sol.boundary_flux = total_div; // no-flux walls: equals the net boundary in-flux
    return sol;
}

ScaledApproximation scale_back(const DarcySolution& sol, const ExponentReport& report, double epsilon) {
    if (!report.darcy_valid)
        throw ValidityError("scale_back: gamma exceeds the critical Reynolds exponent; the Darcy "
                            "reconstruction is not valid (inertia is not negligible)");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("scale_back: epsilon must lie in (0,1]");

    ScaledApproximation out;
    out.epsilon = epsilon;
    out.factor = std::pow(epsilon, report.vel_scale_exp);
    out.fields = sol;
    for (double& v : out.fields.vx) v *= out.factor;
    for (double& v : out.fields.vy) v *= out.factor;
    return out;
}

} // namespace tpm
