#pragma once

#include "kzc/scaling/exponents.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace kzc::scaling {

/// A universality class plus the nonuniversal data needed to evaluate the
/// scaling functions: O(1) amplitudes and the locations of the classical
/// critical line in scaled stop coordinates (x_c) and scaled tuning
/// coordinates (y_c). x_c and y_c are fit parameters of a concrete system —
/// they are deliberately not defaulted and never hard-coded by evaluators.
///
/// Amplitude keys read by the evaluators (all default to 1.0 except f_inf
/// and C_s; unknown keys are allowed and simply carried along):
///   f_minus — adiabatic-branch amplitude of f at x <= -1
///   f_plus  — frozen-branch amplitude of f at x >= +1
///   f_inf   — saturation value of f in the bounded regime (default 2.0,
///             must exceed f_plus)
///   C, C_s  — drive and offset constants of the noncritical growth law
///             after a deep stop (C > C_s required; C_s defaults to 0.5)
///   xstar   — amplitude of the critical-coarsening crossover scale
///   h_minus — adiabatic-branch amplitude of the thermal-length function
///   h_crit  — amplitude of the classical-critical divergence of h
struct ScalingModel {
    CriticalExponents exponents;
    std::map<std::string, double> amplitudes;
    std::optional<double> x_c;
    std::optional<double> y_c;

    /// Amplitude lookup with the documented defaults.
    double amp(std::string_view key) const;

    /// Throws std::invalid_argument on nonpositive amplitudes, C <= C_s,
    /// f_inf <= f_plus, nonpositive x_c/y_c, or invalid exponents.
    void validate() const;
};

} // namespace kzc::scaling
