#pragma once

#include "kzc/tfim/chain.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kzc::tfim {

/// Outcome of one chain ramp: per-mode excitation probabilities plus the
/// derived defect density n = (2/L) sum_{k>0} p_k and defect spacing 1/n.
struct RampResult {
    ChainSpec spec;
    std::vector<double> k;   ///< momenta (2m+1) pi / L, ascending
    std::vector<double> p_k; ///< excitation probability per mode
    double n_defects = 0.0;  ///< kinks per site at the end of the ramp
    double length = 0.0;     ///< 1 / n_defects
    std::vector<std::pair<double, double>> trace; ///< (t, g) ramp samples
    std::vector<std::string> warnings;
};

/// Integrates every mode of the chain across the ramp. Modes are independent,
/// so they parallelize trivially; the defect sum is accumulated in fixed
/// momentum order regardless of thread count. Throws std::invalid_argument
/// when |g_start| < 2 g_kz (the ramp would start inside the freeze-out
/// window) and records a warning when |g_start| < 5 g_kz or |g_end| < g_kz.
/// n_trace > 0 adds that many (t, g) protocol samples to the result.
RampResult ramp_simulate(const ChainSpec& spec, int threads = 1, int n_trace = 0);

} // namespace kzc::tfim
