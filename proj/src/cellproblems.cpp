#include "tpm/cellproblems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>

#include "tpm/errors.hpp"

namespace tpm {

double PermeabilityTensor::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(k[i][j]));
    return m;
}

double PermeabilityTensor::min_eigenvalue() const {
    const double tr = k[0][0] + k[1][1];
    const double gap = std::sqrt((k[0][0] - k[1][1]) * (k[0][0] - k[1][1]) + 4.0 * k[0][1] * k[1][0]);
    return 0.5 * (tr - gap);
}

int worker_cap() {
    int cap = std::min(2u, std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("TPM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) cap = std::min<long>(cap, v);
    }
    return cap;
}

namespace {

/// Run the two direction solves, concurrently when the worker cap allows.
/// Results are merged in direction order, so the output is deterministic
/// either way.
void run_directions(const std::function<void(int)>& solve_dir) {
    if (worker_cap() >= 2) {
        std::exception_ptr errs[2] = {nullptr, nullptr};
        auto guarded = [&](int d) {
            try {
                solve_dir(d);
            } catch (...) {
                errs[d] = std::current_exception();
            }
        };
        std::thread t0(guarded, 0), t1(guarded, 1);
        t0.join();
        t1.join();
        for (int d = 0; d < 2; ++d)
            if (errs[d]) std::rethrow_exception(errs[d]);
    } else {
        solve_dir(0);
        solve_dir(1);
    }
}

void remove_fluid_mean(std::vector<double>& p, const SolidMask& mask) {
    double mean = 0.0;
    int count = 0;
    for (size_t c = 0; c < p.size() && c < mask.cell.size(); ++c)
        if (!mask.cell[c]) {
            mean += p[c];
            ++count;
        }
    if (count == 0) return;
    mean /= count;
    for (size_t c = 0; c < p.size() && c < mask.cell.size(); ++c)
        if (!mask.cell[c]) p[c] -= mean;
}

double max_abs_div_fluid(const std::vector<double>& div, const SolidMask& mask) {
    double m = 0.0;
    const size_t plane = mask.cell.size();
    for (size_t c = 0; c < div.size(); ++c)
        if (!mask.cell[c % plane]) m = std::max(m, std::abs(div[c]));
    return m;
}

} // namespace

CellProblemResult solve_stokes2d_cell(const CellGeometry& geom, const SolverConfig& cfg) {
    const SolidMask mask = build_geometry(geom);
    const int n = geom.n;
    bool any_solid = false;
    for (size_t c = 0; c < mask.uface.size(); ++c)
        if (mask.uface[c] || mask.vface[c]) {
            any_solid = true;
            break;
        }
    if (!any_solid)
        throw IncompatibleGeometryError(
            "2D Stokes cell problem needs a nonempty obstacle: the periodic momentum "
            "balance cannot absorb a net unit force");

    const Stokes2DSystem sys = assemble_stokes2d(geom, mask);
    SolverConfig scfg = cfg;
    scfg.nullspace.push_back(sys.pressure_nullvec());

    CellProblemResult out;
    out.solution.regime = Regime::HTPM;
    out.solution.n = n;
    out.tensor.regime = Regime::HTPM;
    out.tensor.n = n;
    out.tensor.nz = 0;
    out.tensor.fluid_fraction = mask.fluid_fraction;

    const double cell_area = geom.h() * geom.h();
    run_directions([&](int d) {
        const SolveResult res = minres_solve(sys.S, sys.rhs(d), scfg);
        StaggeredField2D f(n);
        for (int c = 0; c < n * n; ++c) {
            if (sys.umap[c] >= 0) f.u[c] = res.x[sys.umap[c]];
            if (sys.vmap[c] >= 0) f.v[c] = res.x[sys.nu + sys.vmap[c]];
            if (sys.pmap[c] >= 0) f.p[c] = res.x[sys.nu + sys.nv + sys.pmap[c]];
        }
        remove_fluid_mean(f.p, mask);
        out.solution.div_inf[d] = max_abs_div_fluid(divergence(f), mask);
        for (int c = 0; c < n * n; ++c) {
            out.tensor.k[d][0] += f.u[c] * cell_area;
            out.tensor.k[d][1] += f.v[c] * cell_area;
        }
        out.tensor.column_stats[d] = res.stats;
        out.solution.field2d[d] = std::move(f);
    });
    return out;
}

CellProblemResult solve_stokes3d_cell(const CellGeometry& geom, const SolverConfig& cfg) {
    if (geom.nz < 8) throw std::invalid_argument("solve_stokes3d_cell: nz must be >= 8");
    const SolidMask mask = build_geometry(geom);
    const int n = geom.n, nz = geom.nz;
    const Stokes3DSystem sys = assemble_stokes3d(geom, mask);
    SolverConfig scfg = cfg;
    scfg.nullspace.push_back(sys.pressure_nullvec());

    CellProblemResult out;
    out.solution.regime = Regime::PTPM;
    out.solution.n = n;
    out.solution.nz = nz;
    out.tensor.regime = Regime::PTPM;
    out.tensor.n = n;
    out.tensor.nz = nz;
    out.tensor.fluid_fraction = mask.fluid_fraction;

    const int levels = nz - 1;
    const double vol = geom.h() * geom.h() * geom.hz();
    run_directions([&](int d) {
        const SolveResult res = minres_solve(sys.S, sys.rhs(d), scfg);
        StaggeredField3D f(n, nz);
        const int off_v = sys.nu, off_w = sys.nu + sys.nv, off_p = sys.nu + sys.nv + sys.nw;
        for (int c = 0; c < n * n; ++c) {
            for (int k = 1; k < nz; ++k) {
                if (sys.umap[c] >= 0) f.u[f.vidx(c % n, c / n, k)] = res.x[sys.umap[c] * levels + k - 1];
                if (sys.vmap[c] >= 0)
                    f.v[f.vidx(c % n, c / n, k)] = res.x[off_v + sys.vmap[c] * levels + k - 1];
                if (sys.wmap[c] >= 0)
                    f.w[f.vidx(c % n, c / n, k)] = res.x[off_w + sys.wmap[c] * levels + k - 1];
            }
            for (int k = 0; k < nz; ++k)
                if (sys.pmap[c] >= 0) f.p[f.pidx(c % n, c / n, k)] = res.x[off_p + sys.pmap[c] * nz + k];
        }
        // zero mean over fluid cells (all slabs of fluid columns)
        double mean = 0.0;
        int count = 0;
        for (int c = 0; c < n * n; ++c)
            if (!mask.cell[c])
                for (int k = 0; k < nz; ++k) {
                    mean += f.p[f.pidx(c % n, c / n, k)];
                    ++count;
                }
        mean /= std::max(count, 1);
        for (int c = 0; c < n * n; ++c)
            if (!mask.cell[c])
                for (int k = 0; k < nz; ++k) f.p[f.pidx(c % n, c / n, k)] -= mean;

        out.solution.div_inf[d] = max_abs_div_fluid(divergence(f), mask);
        for (int c = 0; c < n * n; ++c)
            for (int k = 1; k < nz; ++k) {
                out.tensor.k[d][0] += f.u[f.vidx(c % n, c / n, k)] * vol;
                out.tensor.k[d][1] += f.v[f.vidx(c % n, c / n, k)] * vol;
            }
        out.tensor.column_stats[d] = res.stats;
        out.solution.field3d[d] = std::move(f);
    });
    return out;
}

CellProblemResult solve_heleshaw_cell(const CellGeometry& geom, const SolverConfig& cfg) {
    const SolidMask mask = build_geometry(geom);
    const int n = geom.n;
    const HeleShawSystem sys = assemble_heleshaw(geom, mask);
    SolverConfig scfg = cfg;
    scfg.nullspace.push_back(sys.nullvec());

    CellProblemResult out;
    out.solution.regime = Regime::VTPM;
    out.solution.n = n;
    out.tensor.regime = Regime::VTPM;
    out.tensor.n = n;
    out.tensor.nz = 0;
    out.tensor.fluid_fraction = mask.fluid_fraction;

    const double cell_area = geom.h() * geom.h();
    const double ih = n;
    for (int d = 0; d < 2; ++d) {
        const SolveResult res = cg_solve(sys.A, sys.rhs(d), scfg);
        StaggeredField2D f(n);
        for (int c = 0; c < n * n; ++c)
            if (sys.pmap[c] >= 0) f.p[c] = res.x[sys.pmap[c]];
        remove_fluid_mean(f.p, mask);

        // K entries: midpoint face sums of (grad pi + e_d) over open faces.
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (sys.xface_open(i, j)) {
                    const double gx = (f.p[f.idx(i, j)] - f.p[f.idx(i - 1, j)]) * ih + (d == 0 ? 1.0 : 0.0);
                    out.tensor.k[d][0] += gx * cell_area;
                }
                if (sys.yface_open(i, j)) {
                    const double gy = (f.p[f.idx(i, j)] - f.p[f.idx(i, j - 1)]) * ih + (d == 1 ? 1.0 : 0.0);
                    out.tensor.k[d][1] += gy * cell_area;
                }
            }
        }
        out.tensor.column_stats[d] = res.stats;
        out.solution.div_inf[d] = 0.0;
        out.solution.field2d[d] = std::move(f);
    }
    return out;
}

double vertical_profile_integral() {
    // closed form of the parabolic profile average: 0.5*(1/3 - 1/2)
    return 0.5 * (1.0 / 3.0 - 1.0 / 2.0);
}

double vertical_profile_integral_midpoint(int nz) {
    const double hz = 1.0 / nz;
    double s = 0.0;
    for (int k = 0; k < nz; ++k) {
        const double z = (k + 0.5) * hz;
        s += 0.5 * (z * z - z) * hz;
    }
    return s;
}

CrosscheckResult reduced3d_crosscheck(const CellGeometry& geom, const SolverConfig& cfg) {
    const CellProblemResult hs = solve_heleshaw_cell(geom, cfg);
    const SolidMask mask = build_geometry(geom);
    const HeleShawSystem sys = assemble_heleshaw(geom, mask);
    const int n = geom.n;
    const double cell_area = geom.h() * geom.h();
    const double ih = n;
    const double profile = vertical_profile_integral();

    CrosscheckResult cr{};
    for (int d = 0; d < 2; ++d) {
        const StaggeredField2D& f = hs.solution.field2d[d];
        double avg[2] = {0.0, 0.0}; // thickness-averaged reconstructed velocity, integrated over the cell
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (sys.xface_open(i, j)) {
                    const double gx = (f.p[f.idx(i, j)] - f.p[f.idx(i - 1, j)]) * ih + (d == 0 ? 1.0 : 0.0);
                    avg[0] += profile * gx * cell_area;
                }
                if (sys.yface_open(i, j)) {
                    const double gy = (f.p[f.idx(i, j)] - f.p[f.idx(i, j - 1)]) * ih + (d == 1 ? 1.0 : 0.0);
                    avg[1] += profile * gy * cell_area;
                }
            }
        }
        cr.reconstructed[d][0] = -12.0 * avg[0];
        cr.reconstructed[d][1] = -12.0 * avg[1];
        cr.heleshaw[d][0] = hs.tensor.k[d][0];
        cr.heleshaw[d][1] = hs.tensor.k[d][1];
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            num = std::max(num, std::abs(cr.reconstructed[i][j] - cr.heleshaw[i][j]));
            den = std::max(den, std::abs(cr.heleshaw[i][j]));
        }
    cr.rel_diff = den > 0.0 ? num / den : num;
    return cr;
}

CellProblemResult permeability(Regime regime, const CellGeometry& geom, const SolverConfig& cfg) {
    CellProblemResult res;
    switch (regime) {
        case Regime::HTPM: res = solve_stokes2d_cell(geom, cfg); break;
        case Regime::PTPM: res = solve_stokes3d_cell(geom, cfg); break;
        case Regime::VTPM: res = solve_heleshaw_cell(geom, cfg); break;
    }
    PermeabilityTensor& t = res.tensor;

    const double scale = std::max(t.max_abs(), 1e-300);
    t.asymmetry = std::abs(t.k[0][1] - t.k[1][0]) / scale;
    if (t.asymmetry > 1e-8)
        throw SolverError("permeability: tensor asymmetry exceeds 1e-8 relative; solver quality insufficient",
                          t.asymmetry, 0);
    const double sym = 0.5 * (t.k[0][1] + t.k[1][0]);
    t.k[0][1] = t.k[1][0] = sym;

    if (!(t.min_eigenvalue() > 0.0))
        throw SolverError("permeability: tensor is not positive definite", t.min_eigenvalue(), 0);
    const double bound = t.fluid_fraction + 1e-8;
    for (int i = 0; i < 2; ++i)
        if (!(t.k[i][i] > 0.0 && t.k[i][i] <= bound))
            throw SolverError("permeability: diagonal entry outside (0, fluid fraction]", t.k[i][i], 0);
    return res;
}

} // namespace tpm
