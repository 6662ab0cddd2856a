#include "kzc/scaling/model.hpp"

#include <cmath>
#include <stdexcept>

namespace kzc::scaling {

namespace {

// Defaults for the amplitude keys the evaluators read. f_inf must sit above
// f_plus (it is a saturation value) and C above C_s (the growth law
// C x - C_s x_s must increase past the stop), so their defaults differ from 1.
constexpr struct {
    const char* key;
    double value;
} kAmplitudeDefaults[] = {
    {"f_minus", 1.0}, {"f_plus", 1.0}, {"f_inf", 2.0},  {"C", 1.0},
    {"C_s", 0.5},     {"xstar", 1.0},  {"h_minus", 1.0}, {"h_crit", 1.0},
};

} // namespace

double ScalingModel::amp(std::string_view key) const {
    if (auto it = amplitudes.find(std::string(key)); it != amplitudes.end()) return it->second;
    for (const auto& def : kAmplitudeDefaults)
        if (key == def.key) return def.value;
    throw std::out_of_range("scaling model: unknown amplitude key '" + std::string(key) + "'");
}

void ScalingModel::validate() const {
    exponents.validate();
    for (const auto& [key, value] : amplitudes) {
        if (!(std::isfinite(value) && value > 0.0))
            throw std::invalid_argument("scaling model: amplitude '" + key +
                                        "' must be positive and finite");
    }
    if (!(amp("C") > amp("C_s")))
        throw std::invalid_argument("scaling model: C must exceed C_s");
    if (!(amp("f_inf") > amp("f_plus")))
        throw std::invalid_argument("scaling model: f_inf must exceed f_plus");
    if (x_c && !(std::isfinite(*x_c) && *x_c > 0.0))
        throw std::invalid_argument("scaling model: x_c must be positive and finite");
    if (y_c && !(std::isfinite(*y_c) && *y_c > 0.0))
        throw std::invalid_argument("scaling model: y_c must be positive and finite");
}

} // namespace kzc::scaling
