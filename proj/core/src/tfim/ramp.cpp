#include "kzc/tfim/ramp.hpp"

#include "kzc/common/parallel.hpp"
#include "kzc/tfim/mode_evolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kzc::tfim {

RampResult ramp_simulate(const ChainSpec& spec, int threads, int n_trace) {
    spec.validate();

    // Freeze-out scale of the tuning parameter for a power-p ramp with
    // nu = z = 1: g_kz = tau^(-p/(p+1)) in microscopic units.
    const double g_kz = std::pow(spec.tau, -spec.p / (spec.p + 1.0));
    RampResult result;
    result.spec = spec;
    if (std::abs(spec.g_start) < 2.0 * g_kz)
        throw std::invalid_argument(
            "ramp_simulate: |g_start| < 2 g_kz — the ramp would start inside the "
            "freeze-out window instead of in equilibrium");
    if (std::abs(spec.g_start) < 5.0 * g_kz)
        result.warnings.push_back("g_start is less than 5 g_kz deep; initial-state "
                                  "equilibration is marginal");
    if (std::abs(spec.g_end) < g_kz)
        result.warnings.push_back("g_end is inside the freeze-out window; mode occupations "
                                  "may not have frozen");

    const int n_modes = spec.L / 2;
    result.k.resize(static_cast<std::size_t>(n_modes));
    result.p_k.assign(static_cast<std::size_t>(n_modes), 0.0);
    for (int m = 0; m < n_modes; ++m)
        result.k[static_cast<std::size_t>(m)] =
            (2.0 * m + 1.0) * std::numbers::pi / static_cast<double>(spec.L);

    parallel_for(static_cast<std::size_t>(n_modes), threads, [&](std::size_t m) {
        result.p_k[m] = mode_excitation(spec, result.k[m]);
    });

    // Fixed-order sum: byte-identical results for any thread count.
    double sum = 0.0;
    for (double p : result.p_k) sum += p;
    result.n_defects = 2.0 * sum / static_cast<double>(spec.L);
    result.length = result.n_defects > 0.0 ? 1.0 / result.n_defects
                                           : std::numeric_limits<double>::infinity();

    if (n_trace > 0) {
        const double t_start = -spec.tau * std::pow(-spec.g_start, 1.0 / spec.p);
        const double t_end = spec.tau * std::pow(spec.g_end, 1.0 / spec.p);
        result.trace.reserve(static_cast<std::size_t>(n_trace));
        for (int i = 0; i < n_trace; ++i) {
            const double t =
                t_start + (t_end - t_start) * static_cast<double>(i) /
                              static_cast<double>(std::max(1, n_trace - 1));
            const double g =
                (t < 0.0 ? -1.0 : 1.0) * std::pow(std::abs(t) / spec.tau, spec.p);
            result.trace.emplace_back(t, g);
        }
    }
    return result;
}

} // namespace kzc::tfim
