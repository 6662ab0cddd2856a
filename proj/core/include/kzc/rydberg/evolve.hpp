#pragma once

#include "kzc/rydberg/hamiltonian.hpp"

#include <functional>
#include <span>

namespace kzc::rydberg {

/// One piece of the drive schedule: Omega and Delta interpolate linearly in
/// time across [t0, t1]. A segment with equal endpoints is recognized as
/// constant and evolved with long error-controlled Krylov steps; only
/// genuinely time-dependent segments pay for midpoint freezing with
/// step-doubling control. The interaction part is fixed at Hamiltonian
/// construction; schedules drive the one-body terms.
struct ScheduleSegment {
    double t0 = 0.0, t1 = 0.0;
    double omega0 = 0.0, omega1 = 0.0;
    double delta0 = 0.0, delta1 = 0.0;

    bool constant() const { return omega0 == omega1 && delta0 == delta1; }
    double omega_at(double t) const;
    double delta_at(double t) const;
};

struct DriveSchedule {
    std::vector<ScheduleSegment> segments;

    static DriveSchedule constant(double omega, double delta, double t0, double t1);
    /// Throws std::invalid_argument unless segments are nonempty, each spans
    /// positive time, and consecutive segments are contiguous.
    void validate() const;
    double t_begin() const;
    double t_end() const;
};

struct EvolveOptions {
    double dt_max = 0.1;  ///< upper bound on a single step
    double tol = 1e-9;    ///< per-step error budget (Krylov residual estimate,
                          ///< and step-doubling defect on ramped segments)
    int krylov_dim = 20;  ///< maximal Krylov subspace dimension
    int threads = 1;
};

/// Propagates psi through the schedule, calling `sink` at each requested
/// snapshot time (ascending, inside the schedule span; the start time counts
/// if listed). psi.time must equal the schedule start. The state is
/// renormalized after every accepted step, so norm is conserved to machine
/// precision by construction and accuracy is governed by `tol` (checked
/// against dense evolution in the tests). Throws std::runtime_error when the
/// step size underflows, i.e. the tolerance is unreachable.
void evolve(const RydbergHamiltonian& hamiltonian, const DriveSchedule& schedule,
            StateVector& psi, std::span<const double> snapshot_times,
            const std::function<void(const StateVector&)>& sink,
            const EvolveOptions& options = {});

} // namespace kzc::rydberg
