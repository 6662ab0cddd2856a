#pragma once

#include "kzc/scaling/exponents.hpp"
#include "kzc/scaling/protocol.hpp"

namespace kzc::scaling {

/// Freeze-out scales of a ramp: the time window around the transition inside
/// which the system falls out of equilibrium, the correlation length frozen
/// in at that moment, and the matching tuning-parameter and energy scales.
struct KzScales {
    double t_kz = 0.0;  ///< freeze-out time
    double xi_kz = 0.0; ///< frozen correlation length
    double g_kz = 0.0;  ///< tuning-parameter scale, g_kz = (xi_kz/l0)^(-1/nu)
    double eps_kz = 0.0; ///< energy scale of the frozen state, (xi_kz/l0)^(-z)/t0
};

/// Freeze-out scales for a power-p ramp:
///   t_kz  = t0 * (tau/t0)^(p nu z / (p nu z + 1))
///   xi_kz = l0 * (tau/t0)^(p nu   / (p nu z + 1))
/// Requires tau >= t0 (slower than microscopic); throws otherwise.
KzScales kz_scales(const CriticalExponents& ex, const MicroScales& micro,
                   const RampProtocol& protocol);

/// How the ordered-side length responds after the freeze-out window when the
/// ramp keeps going: exponent of l(t) ~ t^kappa in units of the freeze-out
/// scales, with kappa = -p nu + (p nu z + 1) / z_d.
enum class GrowthRegime { growing, logarithmic, bounded };

struct GrowthLaw {
    double kappa = 0.0;
    GrowthRegime regime = GrowthRegime::growing;
};

/// Computes kappa and classifies its sign (zero -> logarithmic growth,
/// negative -> coarsening length bounded by a multiple of xi_kz).
GrowthLaw growth_exponent(const CriticalExponents& ex, double p);

/// Scaling prediction for the excess energy density frozen in by the ramp:
/// eps ~ xi_kz^-(d+z) in microscopic units (amplitude set to one).
double excess_energy_scale(const CriticalExponents& ex, const MicroScales& micro,
                           const RampProtocol& protocol);

} // namespace kzc::scaling
