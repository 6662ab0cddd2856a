#include "kzc/rydberg/evolve.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace kzc::rydberg {

double ScheduleSegment::omega_at(double t) const {
    const double f = (t - t0) / (t1 - t0);
    return omega0 + (omega1 - omega0) * f;
}

double ScheduleSegment::delta_at(double t) const {
    const double f = (t - t0) / (t1 - t0);
    return delta0 + (delta1 - delta0) * f;
}

DriveSchedule DriveSchedule::constant(double omega, double delta, double t0, double t1) {
    DriveSchedule s;
    s.segments.push_back({t0, t1, omega, omega, delta, delta});
    s.validate();
    return s;
}

void DriveSchedule::validate() const {
    if (segments.empty())
        throw std::invalid_argument("drive schedule: needs at least one segment");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        if (!(seg.t1 > seg.t0))
            throw std::invalid_argument("drive schedule: segments must span positive time");
        if (!std::isfinite(seg.omega0) || !std::isfinite(seg.omega1) ||
            !std::isfinite(seg.delta0) || !std::isfinite(seg.delta1))
            throw std::invalid_argument("drive schedule: drives must be finite");
        if (seg.omega0 < 0.0 || seg.omega1 < 0.0)
            throw std::invalid_argument("drive schedule: omega must be >= 0");
        if (i > 0 && segments[i].t0 != segments[i - 1].t1)
            throw std::invalid_argument("drive schedule: segments must be contiguous");
    }
}

double DriveSchedule::t_begin() const { return segments.front().t0; }
double DriveSchedule::t_end() const { return segments.back().t1; }

namespace {

using Cvec = std::vector<std::complex<double>>;

/// Lanczos subspace of H(omega, delta) from a unit starting vector, plus the
/// eigendecomposition of the projected tridiagonal matrix. The subspace does
/// not depend on the step size, so one build serves every trial dt.
struct KrylovSpace {
    std::vector<Cvec> basis;  // m_eff vectors
    double residual_beta = 0.0; // norm of the first discarded direction
    Eigen::MatrixXd eigvecs;  // of the tridiagonal projection
    Eigen::VectorXd eigvals;

    int m_eff() const { return static_cast<int>(basis.size()); }

    /// Propagated coefficients y = exp(-i dt T) e1.
    Eigen::VectorXcd coefficients(double dt) const {
        const Eigen::VectorXd first_row = eigvecs.row(0);
        Eigen::VectorXcd rotated(eigvals.size());
        for (int j = 0; j < eigvals.size(); ++j)
            rotated[j] = std::polar(first_row[j], -dt * eigvals[j]);
        return eigvecs * rotated;
    }

    /// Standard residual-based local error estimate for step dt.
    double error_estimate(double dt) const {
        const Eigen::VectorXcd y = coefficients(dt);
        return residual_beta * std::abs(y[y.size() - 1]);
    }
};

KrylovSpace build_krylov(const RydbergHamiltonian& h, const Cvec& start, double omega,
                         double delta, int max_dim, int threads) {
    const std::size_t dim = start.size();
    KrylovSpace ks;
    ks.basis.reserve(static_cast<std::size_t>(max_dim));
    ks.basis.push_back(start); // caller guarantees unit norm

    std::vector<double> alpha;
    std::vector<double> beta;
    Cvec w(dim);

    for (int j = 0; j < max_dim; ++j) {
        h.apply(ks.basis[static_cast<std::size_t>(j)], w, omega, delta, threads);

        double a = 0.0; // <v_j|w> is real for Hermitian H
        for (std::size_t s = 0; s < dim; ++s)
            a += ks.basis[static_cast<std::size_t>(j)][s].real() * w[s].real() +
                 ks.basis[static_cast<std::size_t>(j)][s].imag() * w[s].imag();
        alpha.push_back(a);

        for (std::size_t s = 0; s < dim; ++s) w[s] -= a * ks.basis[static_cast<std::size_t>(j)][s];
        if (j > 0) {
            const double b_prev = beta[static_cast<std::size_t>(j - 1)];
            for (std::size_t s = 0; s < dim; ++s)
                w[s] -= b_prev * ks.basis[static_cast<std::size_t>(j - 1)][s];
        }

        double b2 = 0.0;
        for (const auto& c : w) b2 += std::norm(c);
        const double b = std::sqrt(b2);
        beta.push_back(b);

        if (b < 1e-13 || j == max_dim - 1) {
            ks.residual_beta = b < 1e-13 ? 0.0 : b;
            break;
        }
        Cvec next(dim);
        const double inv = 1.0 / b;
        for (std::size_t s = 0; s < dim; ++s) next[s] = w[s] * inv;
        ks.basis.push_back(std::move(next));
    }

    const int m = ks.m_eff();
    Eigen::VectorXd diag(m), subdiag(std::max(0, m - 1));
    for (int j = 0; j < m; ++j) diag[j] = alpha[static_cast<std::size_t>(j)];
    for (int j = 0; j + 1 < m; ++j) subdiag[j] = beta[static_cast<std::size_t>(j)];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, subdiag);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("krylov: tridiagonal eigensolve failed");
    ks.eigvecs = solver.eigenvectors();
    ks.eigvals = solver.eigenvalues();
    return ks;
}

/// psi <- normalized Krylov propagation by dt; requires unit-norm psi.
void apply_krylov(const KrylovSpace& ks, double dt, Cvec& psi) {
    const Eigen::VectorXcd y = ks.coefficients(dt);
    const std::size_t dim = psi.size();
    Cvec out(dim, {0.0, 0.0});
    for (int j = 0; j < ks.m_eff(); ++j) {
        const std::complex<double> c = y[j];
        const Cvec& v = ks.basis[static_cast<std::size_t>(j)];
        for (std::size_t s = 0; s < dim; ++s) out[s] += c * v[s];
    }
    double n2 = 0.0;
    for (const auto& c : out) n2 += std::norm(c);
    const double inv = 1.0 / std::sqrt(n2);
    for (std::size_t s = 0; s < dim; ++s) psi[s] = out[s] * inv;
}

double distance(const Cvec& a, const Cvec& b) {
    double d2 = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) d2 += std::norm(a[s] - b[s]);
    return std::sqrt(d2);
}

} // namespace

void evolve(const RydbergHamiltonian& hamiltonian, const DriveSchedule& schedule,
            StateVector& psi, std::span<const double> snapshot_times,
            const std::function<void(const StateVector&)>& sink,
            const EvolveOptions& options) {
    schedule.validate();
    if (psi.n_sites != hamiltonian.n_sites() || psi.amp.size() != hamiltonian.dim())
        throw std::invalid_argument("evolve: state does not match the Hamiltonian");
    if (!(options.dt_max > 0.0) || !(options.tol > 0.0) || options.krylov_dim < 2)
        throw std::invalid_argument("evolve: bad options");
    if (std::abs(psi.time - schedule.t_begin()) > 1e-12)
        throw std::invalid_argument("evolve: state time does not match the schedule start");

    const double span = schedule.t_end() - schedule.t_begin();
    double prev = schedule.t_begin() - 1.0;
    for (const double t : snapshot_times) {
        if (t < schedule.t_begin() - 1e-12 || t > schedule.t_end() + 1e-12)
            throw std::invalid_argument("evolve: snapshot time outside the schedule");
        if (t <= prev) throw std::invalid_argument("evolve: snapshot times must ascend");
        prev = t;
    }

    psi.normalize();
    std::size_t next_snap = 0;
    const auto emit_due = [&](double t) {
        while (next_snap < snapshot_times.size() &&
               snapshot_times[next_snap] <= t + 1e-12) {
            psi.time = snapshot_times[next_snap];
            sink(psi);
            ++next_snap;
        }
    };

    double t = schedule.t_begin();
    emit_due(t);
    const double dt_min = 1e-12 * span;

    for (const auto& seg : schedule.segments) {
        while (t < seg.t1 - 1e-12) {
            // Never step across a snapshot or the segment end.
            double limit = seg.t1;
            if (next_snap < snapshot_times.size())
                limit = std::min(limit, snapshot_times[next_snap]);
            double dt = std::min(options.dt_max, limit - t);

            if (seg.constant()) {
                const KrylovSpace ks = build_krylov(hamiltonian, psi.amp, seg.omega0,
                                                    seg.delta0, options.krylov_dim,
                                                    options.threads);
                while (ks.error_estimate(dt) > options.tol && dt > dt_min) dt *= 0.5;
                if (dt <= dt_min)
                    throw std::runtime_error("evolve: step size underflow (constant segment)");
                apply_krylov(ks, dt, psi.amp);
                t += dt;
            } else {
                // Midpoint-frozen step with step-doubling control: one step
                // at dt versus two at dt/2; accept the finer result.
                bool accepted = false;
                while (!accepted) {
                    if (dt <= dt_min)
                        throw std::runtime_error(
                            "evolve: step size underflow (ramped segment)");
                    const KrylovSpace coarse =
                        build_krylov(hamiltonian, psi.amp, seg.omega_at(t + 0.5 * dt),
                                     seg.delta_at(t + 0.5 * dt), options.krylov_dim,
                                     options.threads);
                    if (coarse.error_estimate(dt) > options.tol) {
                        dt *= 0.5;
                        continue;
                    }
                    Cvec one_step = psi.amp;
                    apply_krylov(coarse, dt, one_step);

                    Cvec two_step = psi.amp;
                    bool fine_ok = true;
                    for (int half = 0; half < 2 && fine_ok; ++half) {
                        const double t_half = t + 0.5 * dt * half;
                        const KrylovSpace fine = build_krylov(
                            hamiltonian, two_step, seg.omega_at(t_half + 0.25 * dt),
                            seg.delta_at(t_half + 0.25 * dt), options.krylov_dim,
                            options.threads);
                        if (fine.error_estimate(0.5 * dt) > options.tol) {
                            fine_ok = false;
                            break;
                        }
                        apply_krylov(fine, 0.5 * dt, two_step);
                    }
                    if (!fine_ok || distance(one_step, two_step) > options.tol) {
                        dt *= 0.5;
                        continue;
                    }
                    psi.amp = std::move(two_step);
                    t += dt;
                    accepted = true;
                }
            }
            emit_due(t);
        }
        t = seg.t1; // absorb rounding drift at segment boundaries
    }
    emit_due(t);
    psi.time = schedule.t_end();
}

} // namespace kzc::rydberg
