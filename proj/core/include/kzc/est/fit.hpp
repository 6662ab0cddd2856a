#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kzc::est {

/// One point of a positive series y(t), optionally with a 1-sigma error bar
/// (err <= 0 means "no error bar"; the fit is then unweighted).
struct SeriesPoint {
    double t = 0.0;
    double y = 0.0;
    double err = 0.0;
};

/// Half-open-in-nothing fit window [t_min, t_max]; both ends inclusive.
/// Windows are explicit everywhere — silent auto-windowing hides crossovers,
/// which are exactly what this toolkit is meant to resolve.
struct FitWindow {
    double t_min = 0.0;
    double t_max = 0.0;
};

/// Power-law fit y = amplitude * t^exponent via weighted least squares in
/// log-log space. Errors are bootstrap standard deviations over resampled
/// point sets (seeded, hence reproducible).
struct FitResult {
    double exponent = 0.0;
    double amplitude = 0.0;
    double exponent_err = 0.0;
    double amplitude_err = 0.0;
    double r_squared = 0.0;
    FitWindow window;
    int n_points = 0;
};

/// Preconditions (std::invalid_argument otherwise): at least 6 points fall
/// inside the window, the window spans at least one decade in t, and every
/// point inside the window has t > 0 and y > 0.
FitResult fit_power_law(std::span<const SeriesPoint> series, FitWindow window,
                        int bootstrap_resamples = 200, std::uint64_t seed = 0x6b7a9d3c5e1f2804ULL);

} // namespace kzc::est
