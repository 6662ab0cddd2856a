#pragma once

#include "kzc/tfim/chain.hpp"

#include <complex>

namespace kzc::tfim {

/// Two-level mode state (amplitudes on the even-parity basis {vacuum,
/// pair at +-k}).
struct ModeState {
    std::complex<double> a; ///< vacuum amplitude
    std::complex<double> b; ///< pair amplitude

    double norm2() const { return std::norm(a) + std::norm(b); }
};

/// Mode Hamiltonian coefficients at field h: H_k = eps_z tau^z + eps_x tau^x
/// with eps_z = 2 (h - cos k), eps_x = 2 sin k.
struct ModeCoeffs {
    double eps_z;
    double eps_x;
};
ModeCoeffs mode_coeffs(double h, double k);

/// Ground state of H_k(h) (lower eigenvalue branch).
ModeState mode_ground_state(double h, double k);

/// Overlap-squared of `state` with the excited eigenstate of H_k(h).
double excitation_probability(const ModeState& state, double h, double k);

/// Integrates i d/dt psi = H_k(h(t)) psi across the ramp of `spec` with an
/// adaptive embedded Runge-Kutta 5(4) pair at the spec's tolerance. The state
/// is renormalized after every accepted step (the exact flow is unitary, so
/// this only removes integrator drift). Throws std::runtime_error on
/// step-size underflow, i.e. when the tolerance is unreachable.
double mode_excitation(const ChainSpec& spec, double k);

} // namespace kzc::tfim
