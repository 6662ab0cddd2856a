#include "kzc/scaling/functions.hpp"

#include "kzc/scaling/kz.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kzc::scaling {

namespace {

void require_finite(double v, const char* what) {
    if (std::isnan(v)) throw std::invalid_argument(std::string(what) + " must not be NaN");
}

/// Geometric interpolation exp((1-t) ln a + t ln b), t in [0, 1]; used to
/// bridge plateau regions so every branch stays positive and continuous.
double geometric(double a, double b, double t) {
    return std::exp((1.0 - t) * std::log(a) + t * std::log(b));
}

/// Noncritical growth after a deep ordered-side stop at anchor x_a,
/// amplitude-matched so the branch equals f_a at x = x_a:
///   F = B (C x - C_s x_a)^(1/z_d),  B = f_a / ((C - C_s) x_a)^(1/z_d).
double offset_growth(const ScalingModel& m, double x, double x_a, double f_a) {
    const double c = m.amp("C");
    const double c_s = m.amp("C_s");
    const double inv_zd = 1.0 / m.exponents.z_d;
    const double b = f_a / std::pow((c - c_s) * x_a, inv_zd);
    return b * std::pow(c * x - c_s * x_a, inv_zd);
}

} // namespace

double eval_f(const ScalingModel& m, double x, double p) {
    m.validate();
    require_finite(x, "eval_f: x");
    if (!std::isfinite(x)) throw std::invalid_argument("eval_f: x must be finite");

    const double nu = m.exponents.nu;
    if (x <= -1.0) return m.amp("f_minus") * std::pow(-x, -nu);

    const double f_minus = m.amp("f_minus");
    const double f_plus = m.amp("f_plus");
    if (x <= 1.0) return geometric(f_minus, f_plus, (x + 1.0) / 2.0);

    const GrowthLaw law = growth_exponent(m.exponents, p);
    switch (law.regime) {
    case GrowthRegime::growing:
        return f_plus * std::pow(x, law.kappa);
    case GrowthRegime::logarithmic:
        return f_plus * (1.0 + std::log(x));
    case GrowthRegime::bounded: {
        const double f_inf = m.amp("f_inf");
        return f_inf - (f_inf - f_plus) * std::pow(x, law.kappa);
    }
    }
    throw std::logic_error("eval_f: unreachable");
}

double crossover_xstar(const ScalingModel& m, double x_s) {
    m.validate();
    require_finite(x_s, "crossover_xstar: x_s");
    if (!std::isfinite(x_s)) throw std::invalid_argument("crossover_xstar: x_s must be finite");
    if (!m.x_c) throw std::invalid_argument("crossover_xstar: model carries no x_c");

    const double dist = std::abs(x_s - *m.x_c);
    if (dist == 0.0) return std::numeric_limits<double>::infinity();
    return m.amp("xstar") * std::pow(dist, -m.exponents.nu_bar * m.exponents.z_bar);
}

double eval_F(const ScalingModel& m, double x, double x_s) {
    m.validate();
    require_finite(x, "eval_F: x");
    require_finite(x_s, "eval_F: x_s");
    if (!std::isfinite(x)) throw std::invalid_argument("eval_F: x must be finite");
    if (x_s == -std::numeric_limits<double>::infinity())
        throw std::invalid_argument("eval_F: x_s must be finite or +infinity");

    // No stop, or still on the ramp: identical to the uninterrupted function.
    if (!std::isfinite(x_s) || x <= x_s) return eval_f(m, x, 1.0);

    // Stop on the adiabatic side: the equilibrium length at the stop is kept.
    if (x_s <= -1.0) return eval_f(m, x_s, 1.0);

    // Inside the fan nothing depends on the stop until the freeze-out window
    // closes; the post-stop branches anchor at x_a.
    const double x_a = std::max(x_s, 1.0);
    if (x <= x_a) return eval_f(m, x, 1.0);
    const double f_a = eval_f(m, x_a, 1.0);

    const double inv_zbar = 1.0 / m.exponents.z_bar;
    const double inv_zd = 1.0 / m.exponents.z_d;

    if (!m.x_c) {
        // Without a critical-line location only unambiguous deep stops can be
        // evaluated; fan stops need x_c to pick a side.
        if (x_s > 1.0) return offset_growth(m, x, x_a, f_a);
        throw std::invalid_argument("eval_F: stop inside the fan requires x_c");
    }

    if (x_s == *m.x_c) {
        // On the critical line: critical coarsening never crosses over.
        return f_a * std::pow(x / x_a, inv_zbar);
    }

    const double x_star = crossover_xstar(m, x_s);
    const bool has_critical_window = x_star > x_a;

    if (x_s > *m.x_c) { // ordered side
        if (!has_critical_window) return offset_growth(m, x, x_a, f_a);
        if (x <= x_star) return f_a * std::pow(x / x_a, inv_zbar);
        const double f_star = f_a * std::pow(x_star / x_a, inv_zbar);
        return f_star * std::pow(x / x_star, inv_zd);
    }

    // Disordered side: coarsening (if any) stops at the crossover scale.
    if (!has_critical_window) return f_a;
    if (x <= x_star) return f_a * std::pow(x / x_a, inv_zbar);
    return f_a * std::pow(x_star / x_a, inv_zbar);
}

std::optional<double> eval_h(const ScalingModel& m, double y) {
    m.validate();
    require_finite(y, "eval_h: y");
    if (!std::isfinite(y)) throw std::invalid_argument("eval_h: y must be finite");
    if (!m.y_c) throw std::invalid_argument("eval_h: model carries no y_c");

    const double y_c = *m.y_c;
    if (y == y_c) return std::nullopt; // genuine divergence, and only here

    const double nu = m.exponents.nu;
    const double nu_bar = m.exponents.nu_bar;
    const double h_minus = m.amp("h_minus");
    const double h_crit = m.amp("h_crit");
    const double w = std::min(y_c / 2.0, 1.0); // half-width of the critical window

    if (y <= -1.0) return h_minus * std::pow(-y, -nu);

    const double lo = y_c - w; // window edge; always > 0 > -1
    if (y <= lo) {
        const double h_lo = h_crit * std::pow(w, -nu_bar);
        return geometric(h_minus, h_lo, (y + 1.0) / (lo + 1.0));
    }
    if (y < y_c + w) return h_crit * std::pow(std::abs(y - y_c), -nu_bar);

    // Far side of the critical line: the equilibrium decay resumes with the
    // amplitude fixed by continuity at y_c + w.
    const double h_far = h_crit * std::pow(w, -nu_bar) * std::pow(y_c + w, nu);
    return h_far * std::pow(y, -nu);
}

} // namespace kzc::scaling
