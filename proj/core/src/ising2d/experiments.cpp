#include "kzc/ising2d/experiments.hpp"

#include "kzc/common/parallel.hpp"
#include "kzc/common/rng.hpp"
#include "kzc/est/defects.hpp"

#include <cmath>
#include <stdexcept>

namespace kzc::ising2d {

namespace {

/// Hard cap on the replica-snapshot buffer (bytes). Trajectories are buffered
/// so replicas can run in parallel while reductions stay in seed order.
constexpr std::size_t kMaxBufferBytes = 512ull << 20;

est::Field2D to_field(const std::vector<std::int8_t>& spins, int lx, int ly) {
    est::Field2D f;
    f.nx = lx;
    f.ny = ly;
    f.v.resize(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) f.v[i] = spins[i];
    return f;
}

int status_code(est::XiResult::Status s) {
    switch (s) {
    case est::XiResult::Status::ok: return 0;
    case est::XiResult::Status::no_peak: return 1;
    case est::XiResult::Status::saturated: return 2;
    }
    return 1;
}

} // namespace

void EnsembleSpec::validate() const {
    if (lx < 8 || ly < 8)
        throw std::invalid_argument("ensemble: lattice must be at least 8 x 8");
    if (seeds.empty()) throw std::invalid_argument("ensemble: at least one seed required");
    if (init == Init::embedded_domain &&
        (domain_w < 1 || domain_h < 1 || domain_x < 0 || domain_y < 0 ||
         domain_x + domain_w > lx || domain_y + domain_h > ly))
        throw std::invalid_argument("ensemble: embedded domain outside the lattice");
}

SpinLattice EnsembleSpec::make_lattice(std::uint64_t seed) const {
    switch (init) {
    case Init::random: return SpinLattice::random(lx, ly, seed);
    case Init::all_up: return SpinLattice::all_up(lx, ly, seed);
    case Init::embedded_domain:
        return SpinLattice::embedded_domain(lx, ly, seed, domain_x, domain_y, domain_w,
                                            domain_h);
    }
    throw std::logic_error("ensemble: bad init kind");
}

SeriesResult xi_series(const EnsembleSpec& ensemble, const ThermalProtocol& protocol,
                       std::span<const double> snapshot_times, est::Channel channel,
                       int threads) {
    ensemble.validate();
    protocol.validate();
    if (snapshot_times.empty())
        throw std::invalid_argument("xi_series: at least one snapshot time required");

    const std::size_t n_seeds = ensemble.seeds.size();
    const std::size_t n_times = snapshot_times.size();
    const std::size_t site_count =
        static_cast<std::size_t>(ensemble.lx) * static_cast<std::size_t>(ensemble.ly);
    if (n_seeds * n_times * site_count > kMaxBufferBytes)
        throw std::invalid_argument(
            "xi_series: replica-snapshot buffer would exceed 512 MiB; reduce seeds, "
            "snapshot times, or lattice size");

    // Phase 1: independent replica trajectories (parallel over seeds).
    struct Captured {
        std::vector<std::int8_t> spins;
        double temperature = 0.0;
    };
    std::vector<std::vector<Captured>> buffer(n_seeds);
    parallel_for(n_seeds, threads, [&](std::size_t si) {
        SpinLattice lat = ensemble.make_lattice(ensemble.seeds[si]);
        auto& mine = buffer[si];
        mine.reserve(n_times);
        run_protocol(lat, protocol, snapshot_times, [&](const LatticeSnapshot& snap) {
            mine.push_back({snap.spins, snap.temperature});
        });
    });

    // Phase 2: seed-ordered reductions per time point.
    SeriesResult out;
    Rng boot_rng(0x626f6f74ULL);
    for (std::size_t ti = 0; ti < n_times; ++ti) {
        SeriesRow row;
        row.time = snapshot_times[ti];
        row.temperature = buffer.front()[ti].temperature;

        std::vector<double> peaks(n_seeds), offs(n_seeds);
        std::vector<double> mean_s; // running mean of S(q) over seeds
        double wall_density_sum = 0.0;
        const int ox = channel == est::Channel::staggered ? ensemble.lx / 2 : 0;
        const int oy = channel == est::Channel::staggered ? ensemble.ly / 2 : 0;
        for (std::size_t si = 0; si < n_seeds; ++si) {
            const auto& cap = buffer[si][ti];
            const est::CorrelationData one =
                est::structure_factor(to_field(cap.spins, ensemble.lx, ensemble.ly));
            if (mean_s.empty()) mean_s.assign(one.s_q.size(), 0.0);
            for (std::size_t q = 0; q < one.s_q.size(); ++q) mean_s[q] += one.s_q[q];
            peaks[si] = one.s_at(ox, oy);
            offs[si] = 0.25 * (one.s_at(ox + 1, oy) + one.s_at(ox - 1, oy) +
                               one.s_at(ox, oy + 1) + one.s_at(ox, oy - 1));
            wall_density_sum +=
                est::defect_length_2d(cap.spins, ensemble.lx, ensemble.ly, channel).density;
        }

        est::CorrelationData mean;
        mean.nx = ensemble.lx;
        mean.ny = ensemble.ly;
        mean.samples = static_cast<long>(n_seeds);
        mean.s_q = std::move(mean_s);
        for (auto& s : mean.s_q) s /= static_cast<double>(n_seeds);

        const est::XiResult xi = est::second_moment_xi(mean, channel);
        row.xi = xi.xi;
        row.xi_status = status_code(xi.status);
        if (xi.status == est::XiResult::Status::saturated)
            out.warnings.push_back("t=" + std::to_string(row.time) +
                                   ": correlation length saturated by finite size");
        if (xi.status == est::XiResult::Status::no_peak)
            out.warnings.push_back("t=" + std::to_string(row.time) +
                                   ": no ordering peak in the structure factor");

        // Bootstrap over replicas: resample seeds, average S at the five
        // wavevectors, redo the ratio.
        if (n_seeds > 1) {
            const double q1 = 2.0 * 3.14159265358979323846 / ensemble.lx;
            double sum = 0.0, sum2 = 0.0;
            int accepted = 0;
            for (int b = 0; b < 200; ++b) {
                double peak = 0.0, off = 0.0;
                for (std::size_t s = 0; s < n_seeds; ++s) {
                    const std::size_t pick = boot_rng.below(n_seeds);
                    peak += peaks[pick];
                    off += offs[pick];
                }
                if (!(peak > off) || !(off > 0.0)) continue;
                const double xi_b =
                    std::sqrt(peak / off - 1.0) / q1; // seed-count factors cancel
                sum += xi_b;
                sum2 += xi_b * xi_b;
                ++accepted;
            }
            if (accepted > 1) {
                const double n = accepted;
                row.xi_err = std::sqrt(std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0)));
            }
        }

        row.wall_density = wall_density_sum / static_cast<double>(n_seeds);
        row.defect_length = row.wall_density > 0.0 ? 1.0 / row.wall_density : 0.0;
        out.rows.push_back(std::move(row));
    }
    return out;
}

KzRampResult kz_ramp_experiment(const KzRampSpec& spec, int threads) {
    if (spec.lx != spec.ly)
        throw std::invalid_argument("kz_ramp_experiment: lattice must be square");
    if (spec.tau_list.empty())
        throw std::invalid_argument("kz_ramp_experiment: tau_list must not be empty");
    if (spec.seeds.empty())
        throw std::invalid_argument("kz_ramp_experiment: at least one seed required");
    if (!(spec.t_high > spec.t_low) || !(spec.t_low >= 0.0))
        throw std::invalid_argument("kz_ramp_experiment: need t_high > t_low >= 0");
    if (spec.equil_sweeps < 1)
        throw std::invalid_argument("kz_ramp_experiment: equil_sweeps must be >= 1");

    KzRampResult out;
    for (const double tau : spec.tau_list) {
        if (!(tau > 0.0) || tau != std::floor(tau))
            throw std::invalid_argument(
                "kz_ramp_experiment: tau values must be positive integers (sweeps)");

        EnsembleSpec ens;
        ens.lx = spec.lx;
        ens.ly = spec.ly;
        ens.init = EnsembleSpec::Init::random;
        ens.seeds = spec.seeds;

        ThermalProtocol protocol;
        protocol.segments.push_back(
            {ThermalSegment::Kind::hold, spec.t_high, spec.t_high, spec.equil_sweeps, 1.0});
        protocol.segments.push_back({ThermalSegment::Kind::ramp, spec.t_high, spec.t_low,
                                     static_cast<long>(tau), 1.0});

        const double t_end = static_cast<double>(protocol.total_sweeps());
        const SeriesResult series =
            xi_series(ens, protocol, std::span<const double>(&t_end, 1),
                      est::Channel::ferromagnetic, threads);
        const SeriesRow& r = series.rows.front();

        KzRampRow row;
        row.tau = tau;
        row.xi = r.xi;
        row.xi_err = r.xi_err;
        if (tau < 10.0) {
            row.excluded = true;
            row.note = "tau below 10 sweeps: discretization dominates";
        } else if (r.xi_status != 0 || r.xi > static_cast<double>(spec.lx) / 8.0) {
            row.excluded = true;
            row.note = r.xi_status == 1 ? "no ordering peak"
                                        : "correlation length beyond lx/8";
            out.warnings.push_back("tau=" + std::to_string(tau) + ": " + row.note);
        }
        out.rows.push_back(std::move(row));
    }

    std::vector<est::SeriesPoint> pts;
    double lo = 0.0, hi = 0.0;
    for (const auto& row : out.rows) {
        if (row.excluded) continue;
        pts.push_back({row.tau, row.xi, row.xi_err});
        lo = lo == 0.0 ? row.tau : std::min(lo, row.tau);
        hi = std::max(hi, row.tau);
    }
    if (pts.size() >= 6 && hi / lo >= 10.0) {
        out.fit = est::fit_power_law(pts, {0.999 * lo, 1.001 * hi});
    } else {
        out.warnings.push_back("fewer than 6 usable ramp rates spanning a decade; "
                               "no power-law fit");
    }
    return out;
}

} // namespace kzc::ising2d
