#pragma once

#include "kzc/scaling/model.hpp"

#include <optional>

namespace kzc::scaling {

/// Universal coarsening-length function for an uninterrupted power-p ramp,
/// l(t) = xi_kz * f(t / t_kz) with x = t / t_kz:
///   x <= -1 : adiabatic branch  f_minus * |x|^(-nu)
///   |x| < 1 : frozen plateau, geometric interpolation between f(-1) and f(+1)
///   x >= +1 : late-ramp branch set by kappa = -p nu + (p nu z + 1)/z_d:
///             kappa > 0 -> f_plus * x^kappa
///             kappa = 0 -> f_plus * (1 + ln x)
///             kappa < 0 -> f_inf - (f_inf - f_plus) * x^kappa
/// Branch boundaries belong to the left branch. Throws on non-finite x or
/// p < 1; the model is validated on entry.
double eval_f(const ScalingModel& m, double x, double p = 1.0);

/// Crossover scale separating critical from noncritical coarsening after a
/// stop at scaled position x_s: x*(x_s) = xstar * |x_s - x_c|^(-nu_bar z_bar),
/// infinite exactly at x_s = x_c. Requires the model to carry x_c.
double crossover_xstar(const ScalingModel& m, double x_s);

/// Universal length function for a linear ramp stopped at x_s and held,
/// l(t) = xi_kz * F(t / t_kz, t_s / t_kz). For x <= x_s this is identically
/// eval_f(m, x) (same branch arithmetic bit for bit). After the stop:
///   - stop before the freeze-out window (x_s <= -1): length stays frozen at
///     f(x_s) (adiabatic-side hold);
///   - stop past the window continues through the anchor x_a = max(x_s, 1):
///     * near the classical critical line (x_c needed): critical coarsening
///       f(x_a) * (x / x_a)^(1/z_bar) up to x*(x_s), then noncritical
///       growth ~ (x / x*)^(1/z_d) on the ordered side (plateau at the
///       crossover value on the disordered side);
///     * exactly at x_s = x_c: critical coarsening indefinitely;
///     * ordered-side stop with no critical window (x* <= x_a): offset
///       noncritical growth B * (C x - C_s x_a)^(1/z_d), amplitude-matched
///       so F is continuous at x_a;
///     * disordered-side stop with no window: frozen plateau at f(x_a).
/// x_s = +infinity means "never stopped" and reduces to eval_f. Fan stops
/// (|x_s| <= 1 and stops needing a side decision) require x_c.
double eval_F(const ScalingModel& m, double x, double x_s);

/// Thermal length at fixed scaled temperature-like coordinate y = g / g_kz,
/// xi_T = xi_kz * h(y): finite everywhere except the classical critical
/// point y_c, where the function diverges and an empty optional is returned.
///   y <= -1:            h_minus * |y|^(-nu)
///   near y_c (|y-y_c| < w, w = min(y_c/2, 1)): h_crit * |y - y_c|^(-nu_bar)
///   y >= y_c + w:       amplitude-matched far branch ~ y^(-nu)
///   in between:         geometric interpolation (continuous at both ends)
/// Requires the model to carry y_c.
std::optional<double> eval_h(const ScalingModel& m, double y);

} // namespace kzc::scaling
