#include "kzc/est/fit.hpp"

#include "kzc/common/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kzc::est {

namespace {

struct LogPoint {
    double x, y, w;
};

/// Weighted straight-line fit y = a + b x; returns {a, b} and the weighted R2.
struct LineFit {
    double a = 0.0, b = 0.0, r_squared = 0.0;
    bool ok = false;
};

LineFit fit_line(const std::vector<LogPoint>& pts) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        sw += p.w;
        sx += p.w * p.x;
        sy += p.w * p.y;
        sxx += p.w * p.x * p.x;
        sxy += p.w * p.x * p.y;
    }
    const double det = sw * sxx - sx * sx;
    LineFit fit;
    if (!(det > 0.0) || !std::isfinite(det)) return fit; // degenerate abscissas
    fit.b = (sw * sxy - sx * sy) / det;
    fit.a = (sy - fit.b * sx) / sw;

    const double mean_y = sy / sw;
    double ss_res = 0, ss_tot = 0;
    for (const auto& p : pts) {
        const double fit_y = fit.a + fit.b * p.x;
        ss_res += p.w * (p.y - fit_y) * (p.y - fit_y);
        ss_tot += p.w * (p.y - mean_y) * (p.y - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.ok = true;
    return fit;
}

} // namespace

FitResult fit_power_law(std::span<const SeriesPoint> series, FitWindow window,
                        int bootstrap_resamples, std::uint64_t seed) {
    if (!(window.t_min > 0.0) || !(window.t_max > window.t_min))
        throw std::invalid_argument("fit_power_law: window must satisfy 0 < t_min < t_max");
    if (window.t_max / window.t_min < 10.0)
        throw std::invalid_argument("fit_power_law: window must span at least a decade");

    std::vector<LogPoint> pts;
    for (const auto& p : series) {
        if (p.t < window.t_min || p.t > window.t_max) continue;
        if (!(p.t > 0.0) || !(p.y > 0.0))
            throw std::invalid_argument(
                "fit_power_law: points in the window must have positive t and y");
        LogPoint lp;
        lp.x = std::log(p.t);
        lp.y = std::log(p.y);
        // Error propagation into log space: sigma_ln(y) = err / y.
        lp.w = p.err > 0.0 ? (p.y * p.y) / (p.err * p.err) : 1.0;
        pts.push_back(lp);
    }
    if (pts.size() < 6)
        throw std::invalid_argument("fit_power_law: need at least 6 points inside the window");

    const LineFit main_fit = fit_line(pts);
    if (!main_fit.ok)
        throw std::invalid_argument("fit_power_law: degenerate abscissas inside the window");

    FitResult res;
    res.exponent = main_fit.b;
    res.amplitude = std::exp(main_fit.a);
    res.r_squared = main_fit.r_squared;
    res.window = window;
    res.n_points = static_cast<int>(pts.size());

    if (bootstrap_resamples > 1) {
        Rng rng(seed);
        std::vector<LogPoint> sample(pts.size());
        double sum_b = 0, sum_bb = 0, sum_a = 0, sum_aa = 0;
        int accepted = 0;
        for (int k = 0; k < bootstrap_resamples; ++k) {
            for (auto& s : sample) s = pts[rng.below(pts.size())];
            const LineFit f = fit_line(sample);
            if (!f.ok) continue; // resample collapsed onto one abscissa
            sum_b += f.b;
            sum_bb += f.b * f.b;
            sum_a += f.a;
            sum_aa += f.a * f.a;
            ++accepted;
        }
        if (accepted > 1) {
            const double n = accepted;
            const double var_b = std::max(0.0, (sum_bb - sum_b * sum_b / n) / (n - 1.0));
            const double var_a = std::max(0.0, (sum_aa - sum_a * sum_a / n) / (n - 1.0));
            res.exponent_err = std::sqrt(var_b);
            // d(amplitude)/d(a) = amplitude, to leading order.
            res.amplitude_err = res.amplitude * std::sqrt(var_a);
        }
    }
    return res;
}

} // namespace kzc::est
