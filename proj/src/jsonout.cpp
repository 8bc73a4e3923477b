#include "tpm/jsonout.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tpm/errors.hpp"

namespace tpm {

Json Json::number(double v) {
    Json j;
    j.kind_ = Kind::Number;
    j.num_ = v;
    return j;
}
Json Json::integer(long long v) {
    Json j;
    j.kind_ = Kind::Integer;
    j.int_ = v;
    return j;
}
Json Json::boolean(bool v) {
    Json j;
    j.kind_ = Kind::Bool;
    j.bool_ = v;
    return j;
}
Json Json::string(std::string v) {
    Json j;
    j.kind_ = Kind::String;
    j.str_ = std::move(v);
    return j;
}
Json Json::null() {
    return {};
}
Json Json::array() {
    Json j;
    j.kind_ = Kind::Array;
    return j;
}
Json Json::object() {
    Json j;
    j.kind_ = Kind::Object;
    return j;
}

Json& Json::push(Json v) {
    arr_.push_back(std::move(v));
    return *this;
}

Json& Json::set(const std::string& key, Json v) {
    obj_.emplace_back(key, std::move(v));
    return *this;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void append_number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

void Json::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
    const std::string pad_close(static_cast<size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::Null: out += "null"; break;
        case Kind::Number: append_number(out, num_); break;
        case Kind::Integer: out += std::to_string(int_); break;
        case Kind::Bool: out += bool_ ? "true" : "false"; break;
        case Kind::String: append_escaped(out, str_); break;
        case Kind::Array: {
            if (arr_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (size_t i = 0; i < arr_.size(); ++i) {
                out += pad;
                arr_[i].write(out, indent, depth + 1);
                if (i + 1 < arr_.size()) out += ',';
                out += '\n';
            }
            out += pad_close + "]";
            break;
        }
        case Kind::Object: {
            if (obj_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (size_t i = 0; i < obj_.size(); ++i) {
                out += pad;
                append_escaped(out, obj_[i].first);
                out += ": ";
                obj_[i].second.write(out, indent, depth + 1);
                if (i + 1 < obj_.size()) out += ',';
                out += '\n';
            }
            out += pad_close + "}";
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

Json exponent_report_json(const RegimeParams& params, const ExponentReport& rep) {
    Json j = Json::object();
    j.set("regime", Json::string(to_string(rep.regime)));
    j.set("epsilon", Json::number(params.epsilon));
    j.set("delta", Json::number(params.delta));
    j.set("gamma", Json::number(params.gamma));
    j.set("gamma_c", Json::number(rep.gamma_c));
    j.set("darcy_valid", Json::boolean(rep.darcy_valid));
    j.set("c_delta", rep.c_delta ? Json::number(*rep.c_delta) : Json::null());
    j.set("r_conjugate", rep.r_conjugate ? Json::number(*rep.r_conjugate) : Json::null());
    j.set("alpha_inertial", Json::number(rep.alpha_inertial));
    j.set("vel_l2_exp", Json::number(rep.vel_l2_exp));
    j.set("vel_grad_exp", Json::number(rep.vel_grad_exp));
    j.set("vel_scale_exp", Json::number(rep.vel_scale_exp));
    return j;
}

Json permeability_json(const PermeabilityTensor& k) {
    Json row0 = Json::array();
    row0.push(Json::number(k.k[0][0])).push(Json::number(k.k[0][1]));
    Json row1 = Json::array();
    row1.push(Json::number(k.k[1][0])).push(Json::number(k.k[1][1]));
    Json kk = Json::array();
    kk.push(std::move(row0)).push(std::move(row1));

    Json res = Json::array();
    res.push(Json::number(k.column_stats[0].rel_residual));
    res.push(Json::number(k.column_stats[1].rel_residual));

    Json j = Json::object();
    j.set("regime", Json::string(to_string(k.regime)));
    j.set("k", std::move(kk));
    j.set("n", Json::integer(k.n));
    j.set("nz", Json::integer(k.nz));
    j.set("residuals", std::move(res));
    j.set("asymmetry", Json::number(k.asymmetry));
    return j;
}

Json darcy_summary_json(const DarcySolution& sol, const PermeabilityTensor& k, double eta) {
    Json j = Json::object();
    j.set("regime", Json::string(to_string(k.regime)));
    j.set("eta", Json::number(eta));
    j.set("prefactor", Json::number(sol.prefactor));
    j.set("m", Json::integer(sol.m));
    j.set("my", Json::integer(sol.my));
    j.set("div_inf", Json::number(sol.div_inf));
    j.set("boundary_flux", Json::number(sol.boundary_flux));
    Json solver = Json::object();
    solver.set("iterations", Json::integer(sol.stats.iterations));
    solver.set("residual", Json::number(sol.stats.rel_residual));
    j.set("solver", std::move(solver));
    return j;
}

PermeabilityTensor permeability_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("permeability JSON: parse error: ") + e.what());
    }
    PermeabilityTensor k;
    try {
        k.regime = regime_from_string(j.at("regime").get<std::string>());
        for (int i = 0; i < 2; ++i)
            for (int c = 0; c < 2; ++c) k.k[i][c] = j.at("k").at(i).at(c).get<double>();
        k.n = j.at("n").get<int>();
        k.nz = j.at("nz").get<int>();
        if (j.contains("residuals"))
            for (int i = 0; i < 2; ++i) k.column_stats[i].rel_residual = j.at("residuals").at(i).get<double>();
        if (j.contains("asymmetry")) k.asymmetry = j.at("asymmetry").get<double>();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("permeability JSON: bad schema: ") + e.what());
    }
    return k;
}

PermeabilityTensor permeability_from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("permeability JSON: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return permeability_from_json_text(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

} // namespace tpm
