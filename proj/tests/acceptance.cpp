// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are fixed here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tpm/cellproblems.hpp"
#include "tpm/config.hpp"
#include "tpm/darcy.hpp"
#include "tpm/errors.hpp"
#include "tpm/regimes.hpp"

using namespace tpm;
using namespace tpm::testing;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail, double seconds) {
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %2d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", criterion, detail.c_str(),
                seconds);
    std::fflush(stdout);
}

template <typename F>
void run(int criterion, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        pass = false;
        detail += std::string(" unexpected error: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(criterion, pass, detail, dt);
}

SolverConfig accept_cfg(double tol = 1e-10) {
    SolverConfig c;
    c.rel_tol = tol;
    c.jacobi = true;
    c.max_iter = 200000;
    return c;
}

CellGeometry make_geom(const ObstacleShape& s, int n, int nz = 0) {
    CellGeometry g;
    g.shape = s;
    g.n = n;
    g.nz = nz;
    return g;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// ---------------------------------------------------------------------------

bool crit1_exponents(std::string& detail) {
    double worst = 0.0;
    auto track = [&](double got, double expect) { worst = std::max(worst, std::abs(got - expect)); };

    track(critical_gamma(Regime::HTPM, 2.0), 2.0);
    track(critical_gamma(Regime::HTPM, 3.7), 3.7);
    track(critical_gamma(Regime::PTPM, 1.0), 1.0);
    track(critical_gamma(Regime::VTPM, 0.3), 1.0);

    track(c_exponent(2.0, 1.0), 2.0);
    track(c_exponent(2.0, 1.8), 5.0 / 3.0);
    track(c_exponent(1.0, 0.75), 2.0);
    track(c_exponent(1.0, 1.0), 1.5);

    for (double delta : {1.5, 2.0, 3.0})
        for (double gamma : {0.0, 0.5, 1.0, delta}) {
            const ExponentReport r = exponent_report({0.1, delta, gamma});
            track(r.alpha_inertial, 3.0 * delta - 2.0 * gamma);
            track(r.vel_l2_exp, 2.0 * delta - gamma);
            track(r.vel_grad_exp, delta - gamma);
        }
    for (double delta : {0.3, 0.8, 1.0})
        for (double gamma : {0.0, 0.5, 1.0}) {
            const ExponentReport r = exponent_report({0.1, delta, gamma});
            track(r.alpha_inertial, 3.0 - 2.0 * gamma);
            track(r.vel_l2_exp, 2.0 - gamma);
            track(r.vel_grad_exp, 1.0 - gamma);
        }
    detail = "exponent arithmetic worst deviation " + fmt(worst) + " (tol 1e-14)";
    return worst <= 1e-14;
}

bool crit2_poiseuille(std::string& detail) {
    const double target = 1.0 / 12.0;
    double err[3];
    const int nzs[3] = {16, 32, 64};
    for (int s = 0; s < 3; ++s) {
        const CellProblemResult r =
            solve_stokes3d_cell(make_geom(ObstacleShape::none(), 8, nzs[s]), accept_cfg());
        err[s] = std::max(std::abs(r.tensor.k[0][0] - target), std::abs(r.tensor.k[1][1] - target));
    }
    const double rate1 = std::log2(err[0] / err[1]);
    const double rate2 = std::log2(err[1] / err[2]);
    detail = "channel |k11-1/12| at nz=32: " + fmt(err[1]) + " (tol 1e-4), refinement orders " +
             fmt(rate1) + ", " + fmt(rate2) + " (need >= 2)";
    return err[1] <= 1e-4 && rate1 >= 1.95 && rate2 >= 1.95;
}

bool crit3_heleshaw_identity(std::string& detail) {
    const CellProblemResult r = solve_heleshaw_cell(make_geom(ObstacleShape::none(), 64), accept_cfg());
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(r.tensor.k[i][j] - (i == j ? 1.0 : 0.0)));
    detail = "empty-cell K_V deviation from identity " + fmt(worst) + " (tol 1e-10)";
    return worst <= 1e-10;
}

bool crit4_reduction(std::string& detail) {
    const double profile_err = std::abs(vertical_profile_integral() + 1.0 / 12.0);
    const CrosscheckResult empty = reduced3d_crosscheck(make_geom(ObstacleShape::none(), 32), accept_cfg());
    const CrosscheckResult disk =
        reduced3d_crosscheck(make_geom(ObstacleShape::disk(0, 0, 0.25), 64), accept_cfg());
    detail = "profile integral error " + fmt(profile_err) + " (tol 1e-12), crosscheck empty " +
             fmt(empty.rel_diff) + ", disk " + fmt(disk.rel_diff) + " (tol 1e-10)";
    return profile_err <= 1e-12 && empty.rel_diff <= 1e-10 && disk.rel_diff <= 1e-10;
}

struct SuiteEntry {
    std::string name;
    bool fourfold;
    PermeabilityTensor k[3]; // HTPM, PTPM, VTPM
};

std::vector<SuiteEntry> g_suite;

bool crit5_spd_suite(std::string& detail) {
    struct GeomSpec {
        std::string name;
        ObstacleShape shape;
        bool fourfold;
    };
    const GeomSpec specs[6] = {
        {"disk r=0.15", ObstacleShape::disk(0, 0, 0.15), true},
        {"disk r=0.25", ObstacleShape::disk(0, 0, 0.25), true},
        {"disk r=0.35", ObstacleShape::disk(0, 0, 0.35), true},
        {"rectangle", ObstacleShape::rectangle(0, 0, 0.3, 0.1), false},
        {"ellipse", ObstacleShape::ellipse(0, 0, 0.3, 0.15, 0.0), false},
        {"rotated ellipse", ObstacleShape::ellipse(0, 0, 0.3, 0.15, 0.5), false},
    };
    const Regime regimes[3] = {Regime::HTPM, Regime::PTPM, Regime::VTPM};

    g_suite.clear();
    double worst_asym = 0.0, worst_eig = 1e300;
    for (const auto& spec : specs) {
        SuiteEntry entry;
        entry.name = spec.name;
        entry.fourfold = spec.fourfold;
        for (int r = 0; r < 3; ++r) {
            const CellGeometry g = make_geom(spec.shape, 64, 16);
            const CellProblemResult res = permeability(regimes[r], g, accept_cfg());
            entry.k[r] = res.tensor;
            worst_asym = std::max(worst_asym, res.tensor.asymmetry);
            worst_eig = std::min(worst_eig, res.tensor.min_eigenvalue());
        }
        g_suite.push_back(entry);
    }
    detail = "18 tensors: worst pre-symmetrization asymmetry " + fmt(worst_asym) +
             " (tol 1e-6), min eigenvalue " + fmt(worst_eig) + " (need > 0)";
    return worst_asym <= 1e-6 && worst_eig > 0.0;
}

bool crit6_isotropy(std::string& detail) {
    if (g_suite.empty()) {
        detail = "suite tensors unavailable (criterion 5 failed to run)";
        return false;
    }
    double worst = 0.0;
    for (const auto& entry : g_suite) {
        if (!entry.fourfold) continue;
        for (int r = 0; r < 3; ++r) {
            const auto& k = entry.k[r].k;
            const double scale = entry.k[r].max_abs();
            worst = std::max(worst, std::abs(k[0][0] - k[1][1]) / scale);
            worst = std::max(worst, std::abs(k[0][1]) / scale);
        }
    }
    detail = "four-fold symmetric obstacles: worst anisotropy " + fmt(worst) + " (tol 1e-5)";
    return worst <= 1e-5;
}

bool crit7_oracle_equivalence(std::string& detail) {
    double worst = 0.0;
    {
        const CellGeometry g = make_geom(ObstacleShape::disk(0, 0, 0.25), 12);
        const SolidMask mask = build_geometry(g);
        const Stokes2DSystem sys = assemble_stokes2d(g, mask);
        const std::vector<std::vector<double>> ns = {sys.pressure_nullvec()};
        for (int d = 0; d < 2; ++d) {
            SolverConfig cfg = accept_cfg(1e-12);
            cfg.nullspace = ns;
            const SolveResult it = minres_solve(sys.S, sys.rhs(d), cfg);
            const std::vector<double> ref = dense_reference_solve(sys.S, sys.rhs(d), ns);
            worst = std::max(worst, max_abs_diff(it.x, ref) / max_abs(ref));
        }
    }
    {
        const CellGeometry g = make_geom(ObstacleShape::disk(0, 0, 0.25), 12);
        const SolidMask mask = build_geometry(g);
        const HeleShawSystem sys = assemble_heleshaw(g, mask);
        const std::vector<std::vector<double>> ns = {sys.nullvec()};
        for (int d = 0; d < 2; ++d) {
            SolverConfig cfg = accept_cfg(1e-12);
            cfg.nullspace = ns;
            const SolveResult it = cg_solve(sys.A, sys.rhs(d), cfg);
            const std::vector<double> ref = dense_reference_solve(sys.A, sys.rhs(d), ns);
            worst = std::max(worst, max_abs_diff(it.x, ref) / max_abs(ref));
        }
    }
    {
        const CellGeometry g = make_geom(ObstacleShape::disk(0, 0, 0.25), 8, 8);
        const SolidMask mask = build_geometry(g);
        const Stokes3DSystem sys = assemble_stokes3d(g, mask);
        const std::vector<std::vector<double>> ns = {sys.pressure_nullvec()};
        for (int d = 0; d < 2; ++d) {
            SolverConfig cfg = accept_cfg(1e-12);
            cfg.nullspace = ns;
            const SolveResult it = minres_solve(sys.S, sys.rhs(d), cfg);
            const std::vector<double> ref = dense_reference_solve(sys.S, sys.rhs(d), ns);
            worst = std::max(worst, max_abs_diff(it.x, ref) / max_abs(ref));
        }
    }
    detail = "iterative vs dense solutions, worst relative deviation " + fmt(worst) + " (tol 1e-8)";
    return worst <= 1e-8;
}

bool crit8_darcy_manufactured(std::string& detail) {
    PermeabilityTensor kI;
    kI.regime = Regime::HTPM;
    kI.k[0][0] = kI.k[1][1] = 1.0;

    double perr[3];
    const int ms[3] = {32, 64, 128};
    for (int s = 0; s < 3; ++s) {
        const int m = ms[s];
        MacroDomain d = MacroDomain::uniform_force(1.0, 1.0, m, m, 1.0, 0.0, 0.0);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i)
                manufactured_force(d.xc(i), d.yc(j), d.fx[d.idx(i, j)], d.fy[d.idx(i, j)]);
        // 1e-10 keeps the solver noise far below the h^2 discretization error;
        // tighter tolerances are unreachable at m=128 (kappa * roundoff)
        const DarcySolution sol = solve_darcy(d, kI, accept_cfg(1e-10));
        double pmean = 0.0;
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) pmean += manufactured_pressure(d.xc(i), d.yc(j));
        pmean /= m * m;
        double e2 = 0.0;
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                const double e =
                    sol.p[d.idx(i, j)] - (manufactured_pressure(d.xc(i), d.yc(j)) - pmean);
                e2 += e * e;
            }
        perr[s] = std::sqrt(e2 / (m * m));
    }
    const double ratio1 = perr[0] / perr[1];
    const double ratio2 = perr[1] / perr[2];

    const MacroDomain box = MacroDomain::uniform_force(1.0, 1.0, 32, 32, 1.0, 1.0, 0.0);
    const DarcySolution bsol = solve_darcy(box, kI, accept_cfg(1e-12));
    double vmax = std::max(max_abs(bsol.vx), max_abs(bsol.vy));
    double pdev = 0.0;
    for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i)
            pdev = std::max(pdev, std::abs(bsol.p[box.idx(i, j)] - (box.xc(i) - 0.5)));

    detail = "pressure error ratios " + fmt(ratio1) + ", " + fmt(ratio2) +
             " (need [3.5,4.5]); closed box |V| " + fmt(vmax) + ", |P-(x-1/2)| " + fmt(pdev) +
             " (tol 1e-10)";
    return ratio1 >= 3.5 && ratio1 <= 4.5 && ratio2 >= 3.5 && ratio2 <= 4.5 && vmax <= 1e-10 &&
           pdev <= 1e-10;
}

bool crit9_validity_gate(std::string& detail) {
    const std::string dir = "acceptance_tmp";
    if (std::system(("mkdir -p " + dir).c_str()) != 0) std::abort();
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir + "/" + name, std::ios::binary);
        out << text;
    };
    auto exit_code = [&](const std::string& args) {
        const std::string cmd = std::string(TPM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    const std::string base = "geometry.shape = disk\ngeometry.r = 0.25\ngeometry.n = 16\n"
                             "macro.m = 8\nmacro.my = 8\nmacro.fx = 1\n";
    write("over.conf", "regime.delta = 0.5\nregime.gamma = 1.2\n" + base);
    write("at.conf", "regime.delta = 0.5\nregime.gamma = 1.0\n" + base);
    const int over = exit_code("pipeline --config " + dir + "/over.conf");
    const int at = exit_code("pipeline --config " + dir + "/at.conf");
    detail = "pipeline exit codes: gamma > gamma_c -> " + std::to_string(over) +
             " (want 2), gamma = gamma_c -> " + std::to_string(at) + " (want 0)";
    return over == 2 && at == 0;
}

bool crit10_regression(std::string& detail) {
    const double frozen_star = 0.020247759073740518; // disk r=0.25, Richardson from n=32,64,128
    double k[3];
    const int ns[3] = {32, 64, 128};
    for (int s = 0; s < 3; ++s) {
        const CellProblemResult r =
            solve_stokes2d_cell(make_geom(ObstacleShape::disk(0, 0, 0.25), ns[s]), accept_cfg());
        k[s] = 0.5 * (r.tensor.k[0][0] + r.tensor.k[1][1]);
    }
    const double d1 = k[0] - k[1], d2 = k[1] - k[2];
    const double order = std::log2(std::abs(d1 / d2));
    const double kstar = k[2] - d2 * d2 / (d1 - d2); // k2 + (k2-k1)/(2^p - 1)
    const double drift = std::abs(kstar - frozen_star) / frozen_star;
    detail = "k(32..128) = " + fmt(k[0]) + ", " + fmt(k[1]) + ", " + fmt(k[2]) + "; order " +
             fmt(order) + " (need >= 1); Richardson drift vs baseline " + fmt(drift) + " (tol 1%)";
    return order >= 1.0 && drift <= 0.01;
}

} // namespace

int main() {
    std::printf("thin-porous-media toolkit acceptance suite\n");
    run(1, crit1_exponents);
    run(2, crit2_poiseuille);
    run(3, crit3_heleshaw_identity);
    run(4, crit4_reduction);
    run(5, crit5_spd_suite);
    run(6, crit6_isotropy);
    run(7, crit7_oracle_equivalence);
    run(8, crit8_darcy_manufactured);
    run(9, crit9_validity_gate);
    run(10, crit10_regression);
    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
