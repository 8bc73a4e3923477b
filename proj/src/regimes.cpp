#include "tpm/regimes.hpp"

#include <stdexcept>

#include "tpm/errors.hpp"

namespace tpm {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::HTPM: return "HTPM";
        case Regime::PTPM: return "PTPM";
        case Regime::VTPM: return "VTPM";
    }
    return "?";
}

Regime regime_from_string(const std::string& s) {
    if (s == "HTPM") return Regime::HTPM;
    if (s == "PTPM") return Regime::PTPM;
    if (s == "VTPM") return Regime::VTPM;
    throw std::invalid_argument("unknown regime tag: " + s);
}

Regime classify_delta(double delta) {
    if (!(delta > 0.0)) throw std::domain_error("classify: delta must be > 0");
    if (delta > 1.0) return Regime::HTPM;
    if (delta == 1.0) return Regime::PTPM;
    return Regime::VTPM;
}

Regime classify(const RegimeParams& params) {
    return classify_delta(params.delta);
}

double critical_gamma(Regime regime, double delta) {
    return regime == Regime::HTPM ? delta : 1.0;
}

double c_exponent(double delta_eff, double gamma) {
    if (!(delta_eff > 0.0)) throw std::domain_error("c_exponent: delta_eff must be > 0");
    if (gamma > delta_eff)
        throw ValidityError("c_exponent: gamma exceeds the critical value delta_eff");
    if (gamma <= 0.75 * delta_eff) return 2.0;
    return 1.5 * delta_eff / gamma;
}

ExponentReport exponent_report(const RegimeParams& params) {
    ExponentReport rep;
    rep.regime = classify(params);
    rep.gamma_c = critical_gamma(rep.regime, params.delta);
    rep.darcy_valid = params.gamma <= rep.gamma_c;

    // delta enters the velocity/inertia exponents only in the HTPM regime;
    // PTPM and VTPM share the delta_eff = 1 table.
    const double g = params.gamma;
    if (rep.regime == Regime::HTPM) {
        const double d = params.delta;
        rep.vel_l2_exp = 2.0 * d - g;
        rep.vel_grad_exp = d - g;
        rep.alpha_inertial = 3.0 * d - 2.0 * g;
        rep.vel_scale_exp = 2.0 * d - g;
    } else {
        rep.vel_l2_exp = 2.0 - g;
        rep.vel_grad_exp = 1.0 - g;
        rep.alpha_inertial = 3.0 - 2.0 * g;
        rep.vel_scale_exp = 2.0 - g;
    }

    if (rep.darcy_valid) {
        const double delta_eff = rep.regime == Regime::HTPM ? params.delta : 1.0;
        const double c = c_exponent(delta_eff, g);
        rep.c_delta = c;
        rep.r_conjugate = c / (c - 1.0);
    }
    return rep;
}

} // namespace tpm
