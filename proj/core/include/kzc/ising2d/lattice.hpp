#pragma once

#include "kzc/common/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace kzc::ising2d {

/// Critical temperature of the square-lattice nearest-neighbor Ising model,
/// 2 / ln(1 + sqrt(2)). Hard-coded because it is exact; nothing in the
/// dynamics depends on it implicitly.
inline constexpr double kTc = 2.269185314213022;

/// Periodic square-lattice Ising configuration with single-site heat-bath
/// (Glauber) dynamics. One sweep updates every site exactly once, in a fresh
/// random permutation — ordered sweeps bias domain-wall motion and
/// random-with-replacement updates would leave a fraction of sites untouched
/// per sweep, which breaks the per-sweep infinite-temperature test exactly.
///
/// The lattice owns its random stream: construction seeds it, the initial
/// condition and every sweep consume from it, so a (seed, protocol) pair
/// fully determines the trajectory.
class SpinLattice {
  public:
    /// Fair-coin spins (infinite-temperature initial condition).
    static SpinLattice random(int lx, int ly, std::uint64_t seed);
    /// Uniform +1 (deep ordered initial condition).
    static SpinLattice all_up(int lx, int ly, std::uint64_t seed);
    /// Uniform +1 with a -1 rectangle [x0, x0+w) x [y0, y0+h); used to watch
    /// a single prepared domain shrink.
    static SpinLattice embedded_domain(int lx, int ly, std::uint64_t seed, int x0, int y0,
                                       int w, int h);

    int lx() const { return lx_; }
    int ly() const { return ly_; }
    long sites() const { return static_cast<long>(lx_) * ly_; }
    std::span<const std::int8_t> spins() const { return s_; }
    double sweeps_done() const { return sweeps_; }

    /// One heat-bath sweep at temperature T >= 0: each site flips with
    /// probability 1 / (1 + exp(dE / T)). At T = 0 this degenerates to
    /// "always flip downhill, coin-flip on ties, never uphill".
    void glauber_sweep(double temperature);

    /// Energy per site, -(1/N) sum over bonds of s_i s_j (in [-2, 2]).
    double energy_per_site() const;
    /// Magnetization per site (in [-1, 1]).
    double magnetization() const;

  private:
    SpinLattice(int lx, int ly, std::uint64_t seed);

    int lx_, ly_;
    std::vector<std::int8_t> s_;
    std::vector<std::int32_t> perm_;
    Rng rng_;
    double sweeps_ = 0.0;
};

} // namespace kzc::ising2d
