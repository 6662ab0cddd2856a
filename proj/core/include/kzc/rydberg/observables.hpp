#pragma once

#include "kzc/rydberg/hamiltonian.hpp"

namespace kzc::rydberg {

/// Per-site Rydberg densities <n_i>.
std::vector<double> site_densities(const StateVector& psi);

/// Mean fraction of sites deviating from a reference occupation pattern:
/// (1/N) sum_i [ref_i ? 1 - <n_i> : <n_i>]. Against the ideal ordered
/// background this is the excess-density diagnostic whose relaxation tracks
/// how fast a prepared domain heals.
double excess_density(const StateVector& psi, std::span<const std::uint8_t> reference);

/// Staggered magnetization m_s = (2/N) sum_i eps_i (n_i - 1/2) with
/// eps_i = +1 on the (row+col)-even sublattice. Returns <m_s>.
double staggered_magnetization(const StateVector& psi, const ArrayGeometry& geometry);

/// Second moment <m_s^2>; the order-parameter signal that survives when
/// symmetric superpositions drive <m_s> to zero.
double staggered_m2(const StateVector& psi, const ArrayGeometry& geometry);

/// Energy expectation value <psi|H(omega, delta)|psi>.
double energy_expectation(const RydbergHamiltonian& hamiltonian, const StateVector& psi,
                          double omega, double delta, int threads = 1);

} // namespace kzc::rydberg
