#include "kzc/ising2d/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace kzc::ising2d {

void ThermalProtocol::validate() const {
    if (segments.empty())
        throw std::invalid_argument("thermal protocol: needs at least one segment");
    for (const auto& seg : segments) {
        if (seg.sweeps < 1)
            throw std::invalid_argument("thermal protocol: segment sweep count must be >= 1");
        if (!(std::isfinite(seg.t_from) && seg.t_from >= 0.0))
            throw std::invalid_argument("thermal protocol: temperatures must be >= 0");
        if (seg.kind == ThermalSegment::Kind::ramp) {
            if (!(std::isfinite(seg.t_to) && seg.t_to >= 0.0))
                throw std::invalid_argument("thermal protocol: temperatures must be >= 0");
            if (!(std::isfinite(seg.power) && seg.power >= 1.0))
                throw std::invalid_argument("thermal protocol: ramp power must be >= 1");
        }
    }
}

long ThermalProtocol::total_sweeps() const {
    long total = 0;
    for (const auto& seg : segments) total += seg.sweeps;
    return total;
}

double ThermalProtocol::temperature_for_sweep(long sweep) const {
    long offset = 0;
    for (const auto& seg : segments) {
        if (sweep < offset + seg.sweeps) {
            if (seg.kind == ThermalSegment::Kind::hold) return seg.t_from;
            const double frac =
                (static_cast<double>(sweep - offset) + 0.5) / static_cast<double>(seg.sweeps);
            return seg.t_from + (seg.t_to - seg.t_from) * std::pow(frac, seg.power);
        }
        offset += seg.sweeps;
    }
    throw std::out_of_range("thermal protocol: sweep index past the protocol end");
}

namespace {

LatticeSnapshot capture(const SpinLattice& lattice, double time, double temperature) {
    LatticeSnapshot snap;
    snap.time = time;
    snap.temperature = temperature;
    snap.lx = lattice.lx();
    snap.ly = lattice.ly();
    snap.spins.assign(lattice.spins().begin(), lattice.spins().end());
    snap.energy_per_site = lattice.energy_per_site();
    snap.magnetization = lattice.magnetization();
    return snap;
}

} // namespace

void run_protocol(SpinLattice& lattice, const ThermalProtocol& protocol,
                  std::span<const double> snapshot_times,
                  const std::function<void(const LatticeSnapshot&)>& sink) {
    protocol.validate();
    const long total = protocol.total_sweeps();

    double prev = -1.0;
    for (const double t : snapshot_times) {
        if (t != std::floor(t) || t < 0.0 || t > static_cast<double>(total))
            throw std::invalid_argument(
                "run_protocol: snapshot times must be integer sweep counts within the protocol");
        if (t <= prev)
            throw std::invalid_argument("run_protocol: snapshot times must be ascending");
        prev = t;
    }

    std::size_t next_snap = 0;
    const auto emit_due = [&](long sweep_count, double temperature) {
        if (next_snap < snapshot_times.size() &&
            snapshot_times[next_snap] == static_cast<double>(sweep_count)) {
            sink(capture(lattice, static_cast<double>(sweep_count), temperature));
            ++next_snap;
        }
    };

    emit_due(0, 0.0);
    for (long sweep = 0; sweep < total; ++sweep) {
        const double temperature = protocol.temperature_for_sweep(sweep);
        lattice.glauber_sweep(temperature);
        emit_due(sweep + 1, temperature);
    }
}

} // namespace kzc::ising2d
