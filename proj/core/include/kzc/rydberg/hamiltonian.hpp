#pragma once

#include "kzc/rydberg/geometry.hpp"

#include <complex>
#include <span>
#include <vector>

namespace kzc::rydberg {

/// Pure state of the atom array in the occupation basis: bit i of the basis
/// index is the occupation of site i (row-major site order).
struct StateVector {
    int n_sites = 0;
    double time = 0.0;
    std::vector<std::complex<double>> amp;

    std::size_t dim() const { return std::size_t{1} << n_sites; }
    double norm() const;
    void normalize();
};

/// Product state with the given occupations (occ[i] != 0 means site i starts
/// in the Rydberg state).
StateVector product_state(const ArrayGeometry& geometry, std::span<const std::uint8_t> occ);

/// Checkerboard occupations; even_occupied selects which sublattice holds the
/// Rydberg atoms ((row + col) even when true).
std::vector<std::uint8_t> checkerboard_pattern(const ArrayGeometry& geometry,
                                               bool even_occupied = true);

/// Checkerboard with the mask region's registration inverted: an ordered
/// background containing a prepared domain of the opposite order.
StateVector prepare_domain_wall(const ArrayGeometry& geometry, const DetuningMask& mask);

/// Matrix-free H = (Omega/2) sum_i sigma^x_i - Delta sum_i n_i
///                 + sum_(i<j) V_ij n_i n_j.
/// The two-body part is precomputed per basis state at construction; Omega
/// and Delta stay free apply-time parameters so schedules need no rebuild.
class RydbergHamiltonian {
  public:
    RydbergHamiltonian(const ArrayGeometry& geometry, const RydbergParams& params);

    int n_sites() const { return n_; }
    std::size_t dim() const { return std::size_t{1} << n_; }
    std::span<const PairCoupling> pairs() const { return pairs_; }

    /// y = H(omega, delta) x. Deterministic under threading: every output
    /// amplitude is computed independently, so the chunk split never changes
    /// a value.
    void apply(std::span<const std::complex<double>> x, std::span<std::complex<double>> y,
               double omega, double delta, int threads = 1) const;

    /// Diagonal matrix element <s|H|s> for basis state s.
    double diag_entry(std::size_t state, double delta) const;

    /// Cheap upper bound on the spectral norm (max |diagonal| plus the full
    /// off-diagonal row weight); used to normalize drift tolerances.
    double norm_bound(double omega, double delta) const;

  private:
    int n_;
    std::vector<PairCoupling> pairs_;
    std::vector<double> v_diag_; ///< two-body diagonal per basis state
};

} // namespace kzc::rydberg
