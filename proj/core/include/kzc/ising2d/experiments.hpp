#pragma once

#include "kzc/est/correlation.hpp"
#include "kzc/est/fit.hpp"
#include "kzc/ising2d/dynamics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kzc::ising2d {

/// Replica ensemble specification: lattice shape, initial condition, and one
/// seed per replica.
struct EnsembleSpec {
    int lx = 512;
    int ly = 512;
    enum class Init { random, all_up, embedded_domain } init = Init::random;
    int domain_x = 0, domain_y = 0, domain_w = 0, domain_h = 0;
    std::vector<std::uint64_t> seeds;

    void validate() const;
    SpinLattice make_lattice(std::uint64_t seed) const;
};

/// One measured time point of an ensemble run: second-moment correlation
/// length from the replica-averaged structure factor (bootstrap error over
/// replicas) plus the domain-wall cross-check length.
struct SeriesRow {
    double time = 0.0;
    double temperature = 0.0;
    double xi = 0.0;
    double xi_err = 0.0;
    int xi_status = 0; ///< 0 ok, 1 no_peak, 2 saturated
    double wall_density = 0.0;
    double defect_length = 0.0;
};

struct SeriesResult {
    std::vector<SeriesRow> rows;
    std::vector<std::string> warnings;
};

/// Runs every replica through the protocol, measuring at the given snapshot
/// times. Replicas are independent and may run on several threads; all
/// reductions combine replicas in seed order, so results are identical for
/// any thread count.
SeriesResult xi_series(const EnsembleSpec& ensemble, const ThermalProtocol& protocol,
                       std::span<const double> snapshot_times, est::Channel channel,
                       int threads = 1);

/// Ramp-rate sweep across the thermal transition: for each tau the ensemble
/// is equilibrated above the transition, cooled to it linearly over tau
/// sweeps, and the correlation length at the crossing is recorded. Rows with
/// xi beyond lx/8 are flagged and excluded from the power-law fit, as are
/// tau < 10 (sweep discretization dominates there).
struct KzRampSpec {
    int lx = 512;
    int ly = 512;
    std::vector<double> tau_list;
    std::vector<std::uint64_t> seeds;
    double t_high = 2.0 * kTc;
    double t_low = kTc;
    long equil_sweeps = 32;
};

struct KzRampRow {
    double tau = 0.0;
    double xi = 0.0;
    double xi_err = 0.0;
    bool excluded = false;
    std::string note;
};

struct KzRampResult {
    std::vector<KzRampRow> rows;
    std::optional<est::FitResult> fit; ///< absent when < 6 usable rows
    std::vector<std::string> warnings;
};

KzRampResult kz_ramp_experiment(const KzRampSpec& spec, int threads = 1);

} // namespace kzc::ising2d
