#include "kzc/scaling/exponents.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kzc::scaling {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void CriticalExponents::validate() const {
    require(positive_finite(nu), "exponents: nu must be positive and finite");
    require(positive_finite(z), "exponents: z must be positive and finite");
    require(positive_finite(nu_bar), "exponents: nu_bar must be positive and finite");
    require(positive_finite(z_bar), "exponents: z_bar must be positive and finite");
    require(positive_finite(z_d), "exponents: z_d must be positive and finite");
    require(d >= 1, "exponents: d must be >= 1");
}

void MicroScales::validate() const {
    require(positive_finite(l0), "micro scales: l0 must be positive and finite");
    require(positive_finite(t0), "micro scales: t0 must be positive and finite");
}

const std::map<std::string, CriticalExponents>& builtin_exponents() {
    static const std::map<std::string, CriticalExponents> table = {
        {"ising-2+1d", CriticalExponents{0.629, 1.0, 1.0, 2.17, 2.0, 2}},
        {"ising-2d-classical", CriticalExponents{1.0, 2.17, 1.0, 2.17, 2.0, 2}},
    };
    return table;
}

std::map<std::string, CriticalExponents> load_exponent_registry(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open exponent registry " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("exponent registry " + path.string() + ": " + e.what());
    }
    if (!j.is_object())
        throw std::runtime_error("exponent registry " + path.string() +
                                 ": top level must be an object");

    std::map<std::string, CriticalExponents> out;
    for (const auto& [name, entry] : j.items()) {
        if (!entry.is_object())
            throw std::runtime_error("exponent registry entry '" + name + "' must be an object");
        CriticalExponents ex;
        try {
            ex.nu = entry.at("nu").get<double>();
            ex.z = entry.at("z").get<double>();
            ex.nu_bar = entry.at("nu_bar").get<double>();
            ex.z_bar = entry.at("z_bar").get<double>();
            ex.z_d = entry.at("z_d").get<double>();
            ex.d = entry.at("d").get<int>();
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("exponent registry entry '" + name + "': " + e.what());
        }
        try {
            ex.validate();
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("exponent registry entry '" + name + "': " + e.what());
        }
        out.emplace(name, ex);
    }
    return out;
}

CriticalExponents exponents_by_name(const std::string& name,
                                    const std::filesystem::path* registry_file) {
    if (registry_file != nullptr) {
        auto registry = load_exponent_registry(*registry_file);
        if (auto it = registry.find(name); it != registry.end()) return it->second;
    }
    const auto& builtins = builtin_exponents();
    if (auto it = builtins.find(name); it != builtins.end()) return it->second;

    std::ostringstream msg;
    msg << "unknown universality class '" << name << "'; known:";
    for (const auto& [known, _] : builtins) msg << ' ' << known;
    throw std::out_of_range(msg.str());
}

} // namespace kzc::scaling
