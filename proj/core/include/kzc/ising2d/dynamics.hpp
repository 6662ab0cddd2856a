#pragma once

#include "kzc/ising2d/lattice.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kzc::ising2d {

/// One piece of a thermal schedule, measured in sweeps. A ramp moves the
/// temperature from t_from to t_to as T(s) = t_from + (t_to - t_from)
/// * (s / sweeps)^power; a hold keeps it at t_from. Each sweep samples the
/// temperature at its midpoint.
struct ThermalSegment {
    enum class Kind { ramp, hold };
    Kind kind = Kind::hold;
    double t_from = 0.0;
    double t_to = 0.0;
    long sweeps = 0;
    double power = 1.0;
};

/// A full schedule: segments executed in order.
struct ThermalProtocol {
    std::vector<ThermalSegment> segments;

    void validate() const; ///< throws std::invalid_argument
    long total_sweeps() const;
    /// Temperature applied during sweep number `sweep` (0-based, global).
    double temperature_for_sweep(long sweep) const;
};

/// State of the lattice captured after an integer number of sweeps.
struct LatticeSnapshot {
    double time = 0.0;        ///< sweeps since protocol start
    double temperature = 0.0; ///< temperature of the last sweep applied (0 at t=0)
    int lx = 0;
    int ly = 0;
    std::vector<std::int8_t> spins;
    double energy_per_site = 0.0;
    double magnetization = 0.0;
};

/// Runs the protocol on the lattice, invoking `sink` at each requested time
/// (integer sweep counts, ascending, within the protocol; time 0 is the state
/// before any sweep). The lattice is evolved in place.
void run_protocol(SpinLattice& lattice, const ThermalProtocol& protocol,
                  std::span<const double> snapshot_times,
                  const std::function<void(const LatticeSnapshot&)>& sink);

} // namespace kzc::ising2d
