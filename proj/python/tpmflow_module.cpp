#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tpm/cellproblems.hpp"
#include "tpm/config.hpp"
#include "tpm/darcy.hpp"
#include "tpm/errors.hpp"
#include "tpm/regimes.hpp"

namespace py = pybind11;
using namespace tpm;

namespace {

ObstacleShape shape_from_kwargs(const std::string& kind, double cx, double cy, double r, double a,
                                double b, double rotation, double hx, double hy) {
    if (kind == "none") return ObstacleShape::none();
    if (kind == "disk") return ObstacleShape::disk(cx, cy, r);
    if (kind == "ellipse") return ObstacleShape::ellipse(cx, cy, a, b, rotation);
    if (kind == "rectangle") return ObstacleShape::rectangle(cx, cy, hx, hy);
    throw std::invalid_argument("shape must be none|disk|ellipse|rectangle");
}

py::dict report_dict(const RegimeParams& params, const ExponentReport& rep) {
    py::dict d;
    d["regime"] = to_string(rep.regime);
    d["epsilon"] = params.epsilon;
    d["delta"] = params.delta;
    d["gamma"] = params.gamma;
    d["gamma_c"] = rep.gamma_c;
    d["darcy_valid"] = rep.darcy_valid;
    d["c_delta"] = rep.c_delta ? py::cast(*rep.c_delta) : py::none();
    d["r_conjugate"] = rep.r_conjugate ? py::cast(*rep.r_conjugate) : py::none();
    d["alpha_inertial"] = rep.alpha_inertial;
    d["vel_l2_exp"] = rep.vel_l2_exp;
    d["vel_grad_exp"] = rep.vel_grad_exp;
    d["vel_scale_exp"] = rep.vel_scale_exp;
    return d;
}

py::array_t<double> matrix2(const double k[2][2]) {
    py::array_t<double> a({2, 2});
    auto r = a.mutable_unchecked<2>();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = k[i][j];
    return a;
}

py::dict tensor_dict(const PermeabilityTensor& t) {
    py::dict d;
    d["regime"] = to_string(t.regime);
    d["k"] = matrix2(t.k);
    d["n"] = t.n;
    d["nz"] = t.nz;
    d["asymmetry"] = t.asymmetry;
    d["residuals"] =
        py::make_tuple(t.column_stats[0].rel_residual, t.column_stats[1].rel_residual);
    d["fluid_fraction"] = t.fluid_fraction;
    return d;
}

} // namespace

PYBIND11_MODULE(tpmflow, m) {
    m.doc() = "Upscaling toolkit for thin periodic porous layers: regime classification, "
              "cell-problem permeability tensors and the macroscale Darcy solve.";

    py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
    py::register_exception<IncompatibleGeometryError>(m, "IncompatibleGeometryError", PyExc_ValueError);
    py::register_exception<ValidityError>(m, "ValidityError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverException", PyExc_RuntimeError);

    m.def(
        "classify", [](double delta) { return to_string(classify_delta(delta)); }, py::arg("delta"),
        "Regime tag (HTPM/PTPM/VTPM) from the perforation exponent.");

    m.def(
        "critical_gamma",
        [](double delta) { return critical_gamma(classify_delta(delta), delta); }, py::arg("delta"),
        "Critical Reynolds exponent gamma_c for this delta.");

    m.def("c_exponent", &c_exponent, py::arg("delta_eff"), py::arg("gamma"),
          "Sharp pressure integrability exponent C on its validity range.");

    m.def(
        "exponent_report",
        [](double delta, double gamma, double epsilon) {
            RegimeParams p{epsilon, delta, gamma};
            return report_dict(p, exponent_report(p));
        },
        py::arg("delta"), py::arg("gamma"), py::arg("epsilon") = 0.1,
        "Full exponent table for a parameter triple.");

    m.def(
        "permeability",
        [](double delta, const std::string& shape, int n, int nz, double cx, double cy, double r,
           double a, double b, double rotation, double hx, double hy, double rel_tol, bool jacobi) {
            CellGeometry g;
            g.shape = shape_from_kwargs(shape, cx, cy, r, a, b, rotation, hx, hy);
            g.n = n;
            g.nz = nz;
            SolverConfig cfg;
            cfg.rel_tol = rel_tol;
            cfg.jacobi = jacobi;
            cfg.max_iter = 200000;
            const CellProblemResult res = permeability(classify_delta(delta), g, cfg);
            return tensor_dict(res.tensor);
        },
        py::arg("delta"), py::arg("shape") = "none", py::arg("n") = 32, py::arg("nz") = 16,
        py::arg("cx") = 0.0, py::arg("cy") = 0.0, py::arg("r") = 0.0, py::arg("a") = 0.0,
        py::arg("b") = 0.0, py::arg("rotation") = 0.0, py::arg("hx") = 0.0, py::arg("hy") = 0.0,
        py::arg("rel_tol") = 1e-10, py::arg("jacobi") = true,
        "Solve the regime's local cell problem and return the permeability tensor.");

    m.def(
        "darcy_solve",
        [](py::array_t<double> k, const std::string& regime, double lx, double ly, int m_, int my,
           double eta, double fx, double fy, double rel_tol) {
            PermeabilityTensor t;
            t.regime = regime_from_string(regime);
            auto kr = k.unchecked<2>();
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) t.k[i][j] = kr(i, j);
            const MacroDomain d = MacroDomain::uniform_force(lx, ly, m_, my, eta, fx, fy);
            SolverConfig cfg;
            cfg.rel_tol = rel_tol;
            cfg.max_iter = 200000;
            const DarcySolution sol = solve_darcy(d, t, cfg);
            py::dict out;
            py::array_t<double> p({my, m_});
            auto pr = p.mutable_unchecked<2>();
            for (int j = 0; j < my; ++j)
                for (int i = 0; i < m_; ++i) pr(j, i) = sol.p[d.idx(i, j)];
            py::array_t<double> vx({my, m_ + 1});
            auto vxr = vx.mutable_unchecked<2>();
            for (int j = 0; j < my; ++j)
                for (int i = 0; i <= m_; ++i) vxr(j, i) = sol.vx[sol.vx_idx(i, j)];
            py::array_t<double> vy({my + 1, m_});
            auto vyr = vy.mutable_unchecked<2>();
            for (int j = 0; j <= my; ++j)
                for (int i = 0; i < m_; ++i) vyr(j, i) = sol.vy[sol.vy_idx(i, j)];
            out["p"] = p;
            out["vx"] = vx;
            out["vy"] = vy;
            out["div_inf"] = sol.div_inf;
            out["prefactor"] = sol.prefactor;
            out["iterations"] = sol.stats.iterations;
            return out;
        },
        py::arg("k"), py::arg("regime"), py::arg("lx") = 1.0, py::arg("ly") = 1.0, py::arg("m") = 32,
        py::arg("my") = 32, py::arg("eta") = 1.0, py::arg("fx") = 0.0, py::arg("fy") = 0.0,
        py::arg("rel_tol") = 1e-10,
        "Solve the no-flux Darcy problem for a constant force and return P and the face velocities.");

    m.def(
        "scale_factor",
        [](double delta, double gamma, double epsilon) {
            const ExponentReport rep = exponent_report({epsilon, delta, gamma});
            if (!rep.darcy_valid)
                throw ValidityError("gamma exceeds the critical Reynolds exponent");
            return std::pow(epsilon, rep.vel_scale_exp);
        },
        py::arg("delta"), py::arg("gamma"), py::arg("epsilon"),
        "Velocity scale factor eps^vel_scale_exp; raises when the Darcy model is invalid.");

    m.def("vertical_profile_integral", &vertical_profile_integral,
          "Closed-form thickness average of the parabolic profile (equals -1/12).");
}
