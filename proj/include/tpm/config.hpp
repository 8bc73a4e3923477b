#ifndef TPM_CONFIG_HPP
#define TPM_CONFIG_HPP

#include <map>
#include <string>

#include "tpm/darcy.hpp"
#include "tpm/geometry.hpp"
#include "tpm/linsolve.hpp"
#include "tpm/regimes.hpp"

namespace tpm {

/// Parsed run configuration. The file syntax is flat `section.key = value`
/// lines, UTF-8, with `#` comments. Every key is validated against the
/// schema; unknown keys are rejected.
///
/// Sections and keys (defaults in parentheses):
///   regime.epsilon (0.1), regime.delta (1), regime.gamma (0)
///   geometry.shape (none) = none|disk|ellipse|rectangle
///   geometry.cx (0), geometry.cy (0)
///   geometry.r            — disk radius
///   geometry.a, geometry.b, geometry.rotation (0) — ellipse
///   geometry.hx, geometry.hy — rectangle half-widths
///   geometry.n (64), geometry.nz (16)
///   solver.rel_tol (1e-10), solver.max_iter (0 = auto), solver.jacobi (false)
///   macro.lx (1), macro.ly (1), macro.m (32), macro.my (32), macro.eta (1)
///   macro.fx (0), macro.fy (0), macro.force (constant) = constant|manufactured
///   darcy.kfile — permeability JSON produced by the cell command
///   darcy.k11, darcy.k12, darcy.k22, darcy.regime — inline tensor
///   output.dir (.), output.fields (false)
struct RunConfig {
    RegimeParams regime;
    ObstacleShape shape;
    int n = 64;
    int nz = 16;
    SolverConfig solver;

    double lx = 1.0, ly = 1.0;
    int m = 32, my = 32;
    double eta = 1.0;
    double fx = 0.0, fy = 0.0;
    std::string force = "constant";

    std::string kfile;
    bool inline_k = false;
    double k11 = 0.0, k12 = 0.0, k22 = 0.0;
    std::string k_regime;

    std::string output_dir = ".";
    bool dump_fields = false;

    CellGeometry cell_geometry() const;
    /// Macro domain with the configured force ("constant" fills the arrays
    /// with fx/fy; "manufactured" installs the validation profile
    /// f = grad(cos(pi x)cos(pi y)) + rot(sin^2(pi x)sin^2(pi y))).
    MacroDomain macro_domain() const;
};

/// Parse and validate; throws ConfigError with a line reference on syntax
/// errors, unknown keys or malformed values.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

/// Manufactured validation fields on the unit square.
double manufactured_pressure(double x, double y);
void manufactured_force(double x, double y, double& fx, double& fy);
void manufactured_velocity(double x, double y, double eta, double& vx, double& vy);

} // namespace tpm

#endif
