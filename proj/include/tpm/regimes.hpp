#ifndef TPM_REGIMES_HPP
#define TPM_REGIMES_HPP

#include <optional>
#include <string>

namespace tpm {

/// The three asymptotic regimes of a thin porous layer, set by how the
/// in-plane period eps^delta compares with the layer thickness eps.
enum class Regime {
    HTPM, ///< homogeneously thin: delta > 1 (cylinders much finer than the gap)
    PTPM, ///< proportionally thin: delta = 1
    VTPM, ///< very thin: 0 < delta < 1 (gap much smaller than the period)
};

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

/// Scaling parameters of a thin porous layer: thickness eps, perforation
/// exponent delta (period and cylinder size scale as eps^delta) and the
/// Reynolds exponent gamma (Re = eps^-gamma).
struct RegimeParams {
    double epsilon = 0.1;
    double delta = 1.0;
    double gamma = 0.0;
};

/// All exponents the asymptotic theory attaches to a parameter triple.
/// Exponents are kept symbolic (as reals); nothing is evaluated at a
/// concrete eps here.
struct ExponentReport {
    Regime regime = Regime::PTPM;
    double gamma_c = 1.0;          ///< critical Reynolds exponent
    bool darcy_valid = false;      ///< gamma <= gamma_c
    std::optional<double> c_delta; ///< pressure integrability exponent, in (1,2]; set when valid
    std::optional<double> r_conjugate; ///< Hoelder conjugate of c_delta, >= 2
    double alpha_inertial = 0.0;   ///< decay exponent of the inertial term
    double vel_l2_exp = 0.0;       ///< ||v|| <= C eps^vel_l2_exp
    double vel_grad_exp = 0.0;     ///< ||Dv|| <= C eps^vel_grad_exp
    double vel_scale_exp = 0.0;    ///< V_eps ~ eps^vel_scale_exp * V
};

/// Regime tag from delta alone. Exact comparison with 1; callers wanting an
/// "approximately proportional" classification must round delta themselves.
/// Throws std::domain_error for delta <= 0.
Regime classify(const RegimeParams& params);
Regime classify_delta(double delta);

/// Critical Reynolds exponent: delta for HTPM, 1 for PTPM and VTPM.
double critical_gamma(Regime regime, double delta);

/// Pressure integrability exponent C: piecewise 2 for gamma <= 3*delta_eff/4,
/// 3*delta_eff/(2*gamma) up to gamma = delta_eff. Throws ValidityError past
/// the cap (the exponent is only defined up to the critical value).
double c_exponent(double delta_eff, double gamma);

/// Full exponent table for a parameter triple. Never throws: gamma past the
/// critical value is reported as darcy_valid = false with c_delta absent.
ExponentReport exponent_report(const RegimeParams& params);

} // namespace tpm

#endif
