#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace kzc::scaling {

/// Critical exponents of one universality class together with the dynamic
/// exponents of the three length-growth channels that the crossover analysis
/// distinguishes:
///   z     — critical dynamics at the quantum transition,
///   z_bar — critical coarsening when the system is pinned near the classical
///           critical line,
///   z_d   — noncritical domain growth deep in the ordered phase.
/// nu_bar is the correlation-length exponent of the classical critical line.
struct CriticalExponents {
    double nu = 0.0;
    double z = 0.0;
    double nu_bar = 0.0;
    double z_bar = 0.0;
    double z_d = 0.0;
    int d = 0;

    /// Throws std::invalid_argument unless all exponents are positive, finite,
    /// and d >= 1.
    void validate() const;
};

/// Microscopic length and time units that convert scaling relations into
/// dimensionful predictions. Defaults are the natural lattice units.
struct MicroScales {
    double l0 = 1.0;
    double t0 = 1.0;

    void validate() const;
};

/// Built-in universality classes:
///  - "ising-2+1d":         the quantum transition driven through at the end
///                          of the ramp (nu = 0.629, z = 1) with diffusive
///                          domain growth (z_d = 2) and critical coarsening
///                          z_bar = 2.17 on the classical line (nu_bar = 1);
///  - "ising-2d-classical": thermal ramps of the two-dimensional lattice
///                          model, where the ramp-crossing exponents are the
///                          classical ones (nu = 1, z = 2.17).
const std::map<std::string, CriticalExponents>& builtin_exponents();

/// Loads a registry file mapping class names to exponent objects with keys
/// nu, z, nu_bar, z_bar, z_d, d. Entries are validated; errors carry the
/// offending class name.
std::map<std::string, CriticalExponents> load_exponent_registry(const std::filesystem::path& path);

/// Looks up `name` in the built-in table, or in `registry_file` first when
/// one is given. Throws std::out_of_range with the list of known names.
CriticalExponents exponents_by_name(const std::string& name,
                                    const std::filesystem::path* registry_file = nullptr);

} // namespace kzc::scaling
