#include "tpm/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "tpm/errors.hpp"

namespace tpm {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "': expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "': expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: key '" + key + "': expected a boolean, got '" + v + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::string shape_kind = "none";
    double g_cx = 0.0, g_cy = 0.0, g_r = -1.0, g_a = -1.0, g_b = -1.0, g_rot = 0.0;
    double g_hx = -1.0, g_hy = -1.0;
    bool have_k11 = false, have_k12 = false, have_k22 = false;

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> schema = {
        {"regime.epsilon", [&](const std::string& k, const std::string& v) { cfg.regime.epsilon = parse_double(k, v); }},
        {"regime.delta", [&](const std::string& k, const std::string& v) { cfg.regime.delta = parse_double(k, v); }},
        {"regime.gamma", [&](const std::string& k, const std::string& v) { cfg.regime.gamma = parse_double(k, v); }},
        {"geometry.shape", [&](const std::string&, const std::string& v) { shape_kind = v; }},
        {"geometry.cx", [&](const std::string& k, const std::string& v) { g_cx = parse_double(k, v); }},
        {"geometry.cy", [&](const std::string& k, const std::string& v) { g_cy = parse_double(k, v); }},
        {"geometry.r", [&](const std::string& k, const std::string& v) { g_r = parse_double(k, v); }},
        {"geometry.a", [&](const std::string& k, const std::string& v) { g_a = parse_double(k, v); }},
        {"geometry.b", [&](const std::string& k, const std::string& v) { g_b = parse_double(k, v); }},
        {"geometry.rotation", [&](const std::string& k, const std::string& v) { g_rot = parse_double(k, v); }},
        {"geometry.hx", [&](const std::string& k, const std::string& v) { g_hx = parse_double(k, v); }},
        {"geometry.hy", [&](const std::string& k, const std::string& v) { g_hy = parse_double(k, v); }},
        {"geometry.n", [&](const std::string& k, const std::string& v) { cfg.n = parse_int(k, v); }},
        {"geometry.nz", [&](const std::string& k, const std::string& v) { cfg.nz = parse_int(k, v); }},
        {"solver.rel_tol", [&](const std::string& k, const std::string& v) { cfg.solver.rel_tol = parse_double(k, v); }},
        {"solver.max_iter", [&](const std::string& k, const std::string& v) { cfg.solver.max_iter = parse_int(k, v); }},
        {"solver.jacobi", [&](const std::string& k, const std::string& v) { cfg.solver.jacobi = parse_bool(k, v); }},
        {"macro.lx", [&](const std::string& k, const std::string& v) { cfg.lx = parse_double(k, v); }},
        {"macro.ly", [&](const std::string& k, const std::string& v) { cfg.ly = parse_double(k, v); }},
        {"macro.m", [&](const std::string& k, const std::string& v) { cfg.m = parse_int(k, v); }},
        {"macro.my", [&](const std::string& k, const std::string& v) { cfg.my = parse_int(k, v); }},
        {"macro.eta", [&](const std::string& k, const std::string& v) { cfg.eta = parse_double(k, v); }},
        {"macro.fx", [&](const std::string& k, const std::string& v) { cfg.fx = parse_double(k, v); }},
        {"macro.fy", [&](const std::string& k, const std::string& v) { cfg.fy = parse_double(k, v); }},
        {"macro.force", [&](const std::string&, const std::string& v) { cfg.force = v; }},
        {"darcy.kfile", [&](const std::string&, const std::string& v) { cfg.kfile = v; }},
        {"darcy.k11", [&](const std::string& k, const std::string& v) { cfg.k11 = parse_double(k, v); have_k11 = true; }},
        {"darcy.k12", [&](const std::string& k, const std::string& v) { cfg.k12 = parse_double(k, v); have_k12 = true; }},
        {"darcy.k22", [&](const std::string& k, const std::string& v) { cfg.k22 = parse_double(k, v); have_k22 = true; }},
        {"darcy.regime", [&](const std::string&, const std::string& v) { cfg.k_regime = v; }},
        {"output.dir", [&](const std::string&, const std::string& v) { cfg.output_dir = v; }},
        {"output.fields", [&](const std::string& k, const std::string& v) { cfg.dump_fields = parse_bool(k, v); }},
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = schema.find(key);
        if (it == schema.end())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty value for '" + key + "'");
        it->second(key, value);
    }

    if (shape_kind == "none") {
        cfg.shape = ObstacleShape::none();
    } else if (shape_kind == "disk") {
        if (g_r <= 0.0) throw ConfigError("config: disk shape needs geometry.r > 0");
        cfg.shape = ObstacleShape::disk(g_cx, g_cy, g_r);
    } else if (shape_kind == "ellipse") {
        if (g_a <= 0.0 || g_b <= 0.0) throw ConfigError("config: ellipse shape needs geometry.a and geometry.b > 0");
        cfg.shape = ObstacleShape::ellipse(g_cx, g_cy, g_a, g_b, g_rot);
    } else if (shape_kind == "rectangle") {
        if (g_hx <= 0.0 || g_hy <= 0.0)
            throw ConfigError("config: rectangle shape needs geometry.hx and geometry.hy > 0");
        cfg.shape = ObstacleShape::rectangle(g_cx, g_cy, g_hx, g_hy);
    } else {
        throw ConfigError("config: geometry.shape must be none|disk|ellipse|rectangle, got '" + shape_kind + "'");
    }

    if (cfg.force != "constant" && cfg.force != "manufactured")
        throw ConfigError("config: macro.force must be constant|manufactured");
    if (have_k11 || have_k12 || have_k22) {
        if (!(have_k11 && have_k22))
            throw ConfigError("config: inline permeability needs darcy.k11 and darcy.k22");
        if (cfg.k_regime.empty())
            throw ConfigError("config: inline permeability needs darcy.regime for the prefactor");
        cfg.inline_k = true;
    }
    if (cfg.inline_k && !cfg.kfile.empty())
        throw ConfigError("config: give either darcy.kfile or inline darcy.k11/k12/k22, not both");
    if (!(cfg.regime.epsilon > 0.0 && cfg.regime.epsilon < 1.0))
        throw ConfigError("config: regime.epsilon must lie in (0,1)");
    if (!(cfg.regime.delta > 0.0)) throw ConfigError("config: regime.delta must be > 0");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

CellGeometry RunConfig::cell_geometry() const {
    CellGeometry g;
    g.shape = shape;
    g.n = n;
    g.nz = nz;
    return g;
}

double manufactured_pressure(double x, double y) {
    return std::cos(std::numbers::pi * x) * std::cos(std::numbers::pi * y);
}

void manufactured_force(double x, double y, double& fx, double& fy) {
    const double pi = std::numbers::pi;
    const double sx = std::sin(pi * x), cx = std::cos(pi * x);
    const double sy = std::sin(pi * y), cy = std::cos(pi * y);
    // grad of the pressure plus the divergence-free rotation of
    // psi = sin^2(pi x) sin^2(pi y)
    fx = -pi * sx * cy + pi * sx * sx * 2.0 * sy * cy;
    fy = -pi * cx * sy - pi * 2.0 * sx * cx * sy * sy;
}

void manufactured_velocity(double x, double y, double eta, double& vx, double& vy) {
    const double pi = std::numbers::pi;
    const double sx = std::sin(pi * x), cx = std::cos(pi * x);
    const double sy = std::sin(pi * y), cy = std::cos(pi * y);
    vx = pi * sx * sx * 2.0 * sy * cy / eta;
    vy = -pi * 2.0 * sx * cx * sy * sy / eta;
}

MacroDomain RunConfig::macro_domain() const {
    MacroDomain d = MacroDomain::uniform_force(lx, ly, m, my, eta, fx, fy);
    if (force == "manufactured") {
        if (std::abs(lx - 1.0) > 1e-15 || std::abs(ly - 1.0) > 1e-15)
            throw ConfigError("config: the manufactured force profile is defined on the unit square");
        for (int j = 0; j < my; ++j)
            for (int i = 0; i < m; ++i)
                manufactured_force(d.xc(i), d.yc(j), d.fx[d.idx(i, j)], d.fy[d.idx(i, j)]);
    }
    return d;
}

} // namespace tpm
