#ifndef TPM_JSONOUT_HPP
#define TPM_JSONOUT_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tpm/cellproblems.hpp"
#include "tpm/darcy.hpp"
#include "tpm/regimes.hpp"

namespace tpm {

/// Minimal ordered JSON document. Output floats are printed with 17
/// significant digits so every double round-trips losslessly through the
/// emitted text.
class Json {
public:
    static Json number(double v);
    static Json integer(long long v);
    static Json boolean(bool v);
    static Json string(std::string v);
    static Json null();
    static Json array();
    static Json object();

    Json& push(Json v);                      ///< array append
    Json& set(const std::string& key, Json v); ///< object insert (ordered)

    std::string dump(int indent = 2) const;

private:
    enum class Kind { Null, Number, Integer, Bool, String, Array, Object };
    Kind kind_ = Kind::Null;
    double num_ = 0.0;
    long long int_ = 0;
    bool bool_ = false;
    std::string str_;
    std::vector<Json> arr_;
    std::vector<std::pair<std::string, Json>> obj_;

    void write(std::string& out, int indent, int depth) const;
};

Json exponent_report_json(const RegimeParams& params, const ExponentReport& rep);
Json permeability_json(const PermeabilityTensor& k);
Json darcy_summary_json(const DarcySolution& sol, const PermeabilityTensor& k, double eta);

/// Parse a permeability JSON file (as emitted by permeability_json).
PermeabilityTensor permeability_from_json_file(const std::string& path);
PermeabilityTensor permeability_from_json_text(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);

} // namespace tpm

#endif
