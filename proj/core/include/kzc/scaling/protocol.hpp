#pragma once

#include <optional>

namespace kzc::scaling {

/// Drive protocol g(t) = sign(t) * |t / tau|^p for the tuning parameter g,
/// which crosses the transition at t = 0 (g < 0 is the disordered side,
/// g > 0 the ordered side). The ramp may stop at g_s and optionally hold
/// there for t_hold; absent g_s means the ramp continues indefinitely.
struct RampProtocol {
    double tau = 1.0;
    double p = 1.0;
    std::optional<double> g_s;
    std::optional<double> t_hold;

    /// Throws std::invalid_argument unless tau > 0, p >= 1, and
    /// t_hold (when present) >= 0. A hold without a stop is rejected.
    void validate() const;

    /// Instantaneous tuning parameter at time t (stop/hold not applied).
    double g_of_t(double t) const;

    /// Time at which the ramp reaches g_s; empty for indefinite ramps.
    std::optional<double> stop_time() const;
};

} // namespace kzc::scaling
