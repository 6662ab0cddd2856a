#include "kzc/io/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "engine_params.hpp"
#include "kzc/common/csv.hpp"
#include "kzc/common/parallel.hpp"
#include "kzc/common/rng.hpp"
#include "kzc/common/sha256.hpp"
#include "kzc/est/defects.hpp"
#include "kzc/est/fit.hpp"
#include "kzc/io/manifest.hpp"
#include "kzc/ising2d/snapshot_io.hpp"
#include "kzc/rydberg/observables.hpp"
#include "kzc/rydberg/state_io.hpp"
#include "kzc/scaling/classify.hpp"
#include "kzc/scaling/functions.hpp"
#include "kzc/scaling/kz.hpp"
#include "kzc/tfim/ramp.hpp"
#include "kzc/version.hpp"

namespace kzc::io {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Collects the run-dir-relative names of every file the engine produces.
/// Engines call file() from the orchestrating thread only; worker threads
/// get their target paths up front.
struct OutputSet {
    fs::path dir;
    std::vector<std::string> names;

    fs::path file(const std::string& name) {
        names.push_back(name);
        return dir / name;
    }
};

std::string padded(long value, int width) {
    std::string s = std::to_string(value);
    if (static_cast<int>(s.size()) < width)
        s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
    return s;
}

std::string regime_name(scaling::GrowthRegime regime) {
    switch (regime) {
    case scaling::GrowthRegime::growing: return "growing";
    case scaling::GrowthRegime::logarithmic: return "logarithmic";
    case scaling::GrowthRegime::bounded: return "bounded";
    }
    return "growing";
}

json exponents_json(const scaling::CriticalExponents& ex) {
    return json{{"nu", ex.nu},       {"z", ex.z},     {"nu_bar", ex.nu_bar},
                {"z_bar", ex.z_bar}, {"z_d", ex.z_d}, {"d", ex.d}};
}

json scales_json(const scaling::KzScales& kz) {
    return json{
        {"t_kz", kz.t_kz}, {"xi_kz", kz.xi_kz}, {"g_kz", kz.g_kz}, {"eps_kz", kz.eps_kz}};
}

json fit_json(const est::FitResult& fit) {
    return json{{"exponent", fit.exponent},
                {"amplitude", fit.amplitude},
                {"exponent_err", fit.exponent_err},
                {"amplitude_err", fit.amplitude_err},
                {"r_squared", fit.r_squared},
                {"n_points", fit.n_points},
                {"window", json{{"t_min", fit.window.t_min}, {"t_max", fit.window.t_max}}}};
}

est::FitWindow window_from_json(const json& w) {
    return est::FitWindow{w.at("t_min").get<double>(), w.at("t_max").get<double>()};
}

// --------------------------------------------------------------------------
// scaling
// --------------------------------------------------------------------------

json run_scaling(const RunConfig& cfg, OutputSet& outs) {
    const json& P = cfg.params;
    const auto ex = detail::exponents_from_params(P);
    const auto micro = detail::micro_from_params(P);
    const std::string task = P.at("task").get<std::string>();

    json summary{{"task", task}, {"exponents", exponents_json(ex)}, {"warnings", json::array()}};
    if (!P.at("universality").is_null()) summary["universality"] = P.at("universality");

    if (task == "exponent") {
        const double p = P.at("p").get<double>();
        const auto law = scaling::growth_exponent(ex, p);
        summary["p"] = p;
        summary["kappa"] = law.kappa;
        summary["regime"] = regime_name(law.regime);
    } else if (task == "scales") {
        const auto protocol = detail::protocol_from_json(P.at("protocol"));
        const auto kz = scaling::kz_scales(ex, micro, protocol);
        const auto law = scaling::growth_exponent(ex, protocol.p);
        summary["tau"] = protocol.tau;
        summary["p"] = protocol.p;
        summary["scales"] = scales_json(kz);
        summary["kappa"] = law.kappa;
        summary["regime"] = regime_name(law.regime);
        summary["excess_energy_scale"] = scaling::excess_energy_scale(ex, micro, protocol);
    } else if (task == "classify") {
        const auto protocol = detail::protocol_from_json(P.at("protocol"));
        const auto kz = scaling::kz_scales(ex, micro, protocol);
        const auto model = detail::model_from_json(P.at("model"), ex);
        const auto side =
            scaling::stop_energy_side_from_string(P.at("stop_side").get<std::string>());
        const auto label = scaling::classify_case(protocol, kz, model, side);
        summary["case"] = scaling::to_string(label);
        summary["stop_side"] = P.at("stop_side");
        summary["scales"] = scales_json(kz);
        if (const auto t_s = protocol.stop_time()) {
            const double x_s = *t_s / kz.t_kz;
            summary["x_s"] = x_s;
            if (model.x_c) {
                const double x_star = scaling::crossover_xstar(model, x_s);
                if (std::isfinite(x_star)) {
                    summary["x_star"] = x_star;
                } else {
                    summary["x_star"] = nullptr;
                    summary["critical_coarsening_forever"] = true;
                }
            }
        }
    } else { // eval
        const auto model = detail::model_from_json(P.at("model"), ex);
        const auto& e = P.at("eval");
        const std::string function = e.at("function").get<std::string>();
        const double x_min = e.at("x_min").get<double>();
        const double x_max = e.at("x_max").get<double>();
        const int points = e.at("points").get<int>();
        const double x_s = e.at("x_s").is_null() ? std::numeric_limits<double>::infinity()
                                                 : e.at("x_s").get<double>();
        const double p = e.at("p").get<double>();

        CsvWriter csv(outs.file("curve.csv"),
                      {function == "h" ? std::string("y") : std::string("x"), "value"});
        const double dx = (x_max - x_min) / static_cast<double>(points - 1);
        for (int i = 0; i < points; ++i) {
            const double x = i + 1 == points ? x_max : x_min + i * dx;
            double value = 0.0;
            if (function == "f") {
                value = scaling::eval_f(model, x, p);
            } else if (function == "F") {
                value = scaling::eval_F(model, x, x_s);
            } else {
                const auto h = scaling::eval_h(model, x);
                value = h ? *h : std::numeric_limits<double>::infinity();
            }
            csv.row({x, value});
        }
        csv.close();
        summary["function"] = function;
        summary["points"] = points;
        summary["data"] = "curve.csv";
        if (function == "F") summary["x_s"] = e.at("x_s");
    }
    return summary;
}

// --------------------------------------------------------------------------
// tfim1d
// --------------------------------------------------------------------------

json run_tfim(const RunConfig& cfg, OutputSet& outs, std::ostream* log) {
    const json& P = cfg.params;
    const auto taus = P.at("tau_list").get<std::vector<double>>();
    const int n_trace = P.at("n_trace").get<int>();
    const bool save_modes = P.at("save_modes").get<bool>();
    json warnings = json::array();

    CsvWriter defects(outs.file("defects.csv"), {"tau", "n_defects", "length"});
    std::vector<est::SeriesPoint> points;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const auto spec = detail::chain_from_params(P, taus[i]);
        if (log)
            *log << "[kzc] tfim1d: tau = " << format_double(spec.tau) << " (" << i + 1 << "/"
                 << taus.size() << ")" << std::endl;
        const auto result = tfim::ramp_simulate(spec, cfg.threads, n_trace);
        defects.row({spec.tau, result.n_defects, result.length});
        points.push_back({spec.tau, result.n_defects, 0.0});
        for (const auto& w : result.warnings)
            warnings.push_back("tau=" + format_double(spec.tau) + ": " + w);
        if (save_modes) {
            CsvWriter modes(outs.file("modes_" + padded(static_cast<long>(i), 3) + ".csv"),
                            {"k", "p_k"});
            for (std::size_t m = 0; m < result.k.size(); ++m)
                modes.row({result.k[m], result.p_k[m]});
            modes.close();
        }
        if (n_trace > 0) {
            CsvWriter trace(outs.file("trace_" + padded(static_cast<long>(i), 3) + ".csv"),
                            {"t", "g"});
            for (const auto& [t, g] : result.trace) trace.row({t, g});
            trace.close();
        }
    }
    defects.close();

    json summary{{"n_tau", taus.size()},
                 {"data", "defects.csv"},
                 {"warnings", warnings},
                 {"fit", nullptr}};
    if (!P.at("fit_window").is_null())
        summary["fit"] = fit_json(est::fit_power_law(points, window_from_json(P.at("fit_window"))));
    return summary;
}

// --------------------------------------------------------------------------
// ising2d + estimate (shared replica reduction)
// --------------------------------------------------------------------------

int status_code(est::XiResult::Status s) {
    switch (s) {
    case est::XiResult::Status::ok: return 0;
    case est::XiResult::Status::no_peak: return 1;
    case est::XiResult::Status::saturated: return 2;
    }
    return 1;
}

/// Ensemble-averaged estimators for one time point: mean structure factor
/// over the samples (in the given order), second-moment length from the
/// mean, replica-bootstrap error, and the domain-wall cross-check. Mirrors
/// the reduction inside ising2d::xi_series so file-based and in-memory
/// pipelines agree to the last bit.
ising2d::SeriesRow reduce_group(double time,
                                const std::vector<const ising2d::LatticeSnapshot*>& samples,
                                est::Channel channel, Rng& boot_rng,
                                std::vector<std::string>& warnings) {
    const int lx = samples.front()->lx;
    const int ly = samples.front()->ly;
    for (const auto* s : samples)
        if (s->lx != lx || s->ly != ly)
            throw std::invalid_argument("snapshots in one time group have different shapes");
    const std::size_t n = samples.size();

    ising2d::SeriesRow row;
    row.time = time;
    row.temperature = samples.front()->temperature;

    std::vector<double> peaks(n), offs(n);
    std::vector<double> mean_s;
    double wall_density_sum = 0.0;
    const int ox = channel == est::Channel::staggered ? lx / 2 : 0;
    const int oy = channel == est::Channel::staggered ? ly / 2 : 0;
    for (std::size_t si = 0; si < n; ++si) {
        est::Field2D field;
        field.nx = lx;
        field.ny = ly;
        field.v.assign(samples[si]->spins.begin(), samples[si]->spins.end());
        const est::CorrelationData one = est::structure_factor(field);
        if (mean_s.empty()) mean_s.assign(one.s_q.size(), 0.0);
        for (std::size_t q = 0; q < one.s_q.size(); ++q) mean_s[q] += one.s_q[q];
        peaks[si] = one.s_at(ox, oy);
        offs[si] = 0.25 * (one.s_at(ox + 1, oy) + one.s_at(ox - 1, oy) + one.s_at(ox, oy + 1) +
                           one.s_at(ox, oy - 1));
        wall_density_sum +=
            est::defect_length_2d(samples[si]->spins, lx, ly, channel).density;
    }

    est::CorrelationData mean;
    mean.nx = lx;
    mean.ny = ly;
    mean.samples = static_cast<long>(n);
    mean.s_q = std::move(mean_s);
    for (auto& s : mean.s_q) s /= static_cast<double>(n);

    const est::XiResult xi = est::second_moment_xi(mean, channel);
    row.xi = xi.xi;
    row.xi_status = status_code(xi.status);
    if (xi.status == est::XiResult::Status::saturated)
        warnings.push_back("t=" + std::to_string(time) +
                           ": correlation length saturated by finite size");
    if (xi.status == est::XiResult::Status::no_peak)
        warnings.push_back("t=" + std::to_string(time) +
                           ": no ordering peak in the structure factor");

    if (n > 1) {
        const double q1 = 2.0 * 3.14159265358979323846 / lx;
        double sum = 0.0, sum2 = 0.0;
        int accepted = 0;
        for (int b = 0; b < 200; ++b) {
            double peak = 0.0, off = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                const std::size_t pick = boot_rng.below(n);
                peak += peaks[pick];
                off += offs[pick];
            }
            if (!(peak > off) || !(off > 0.0)) continue;
            const double xi_b = std::sqrt(peak / off - 1.0) / q1;
            sum += xi_b;
            sum2 += xi_b * xi_b;
            ++accepted;
        }
        if (accepted > 1) {
            const double count = accepted;
            row.xi_err =
                std::sqrt(std::max(0.0, (sum2 - sum * sum / count) / (count - 1.0)));
        }
    }

    row.wall_density = wall_density_sum / static_cast<double>(n);
    row.defect_length = row.wall_density > 0.0 ? 1.0 / row.wall_density : 0.0;
    return row;
}

json run_ising2d(const RunConfig& cfg, OutputSet& outs, std::ostream* log) {
    const json& P = cfg.params;
    const std::string experiment = P.at("experiment").get<std::string>();
    json warnings = json::array();

    if (experiment == "kz_ramp") {
        const auto spec = detail::kz_ramp_from_params(P, cfg.seeds);
        if (log)
            *log << "[kzc] ising2d: ramp sweep over " << spec.tau_list.size() << " rates, "
                 << spec.seeds.size() << " replicas each" << std::endl;
        const auto result = ising2d::kz_ramp_experiment(spec, cfg.threads);

        CsvWriter ramp(outs.file("ramp.csv"), {"tau", "xi", "xi_err", "excluded"});
        json excluded = json::array();
        for (const auto& row : result.rows) {
            ramp.row({row.tau, row.xi, row.xi_err, row.excluded ? 1.0 : 0.0});
            if (row.excluded) excluded.push_back(json{{"tau", row.tau}, {"note", row.note}});
        }
        ramp.close();
        for (const auto& w : result.warnings) warnings.push_back(w);

        return json{{"experiment", "kz_ramp"},
                    {"data", "ramp.csv"},
                    {"replicas", spec.seeds.size()},
                    {"excluded", excluded},
                    {"fit", result.fit ? fit_json(*result.fit) : json(nullptr)},
                    {"warnings", warnings}};
    }

    // experiment == "hold"
    const auto ensemble = detail::ensemble_from_params(P, cfg.seeds);
    const auto protocol = detail::thermal_from_json(P.at("protocol"));
    const auto times = P.at("snapshot_times").get<std::vector<double>>();
    const auto channel = detail::channel_from_string(P.at("channel").get<std::string>());
    const bool save = P.at("save_snapshots").get<bool>();

    const std::size_t n_seeds = ensemble.seeds.size();
    const std::size_t n_times = times.size();
    const std::size_t site_count =
        static_cast<std::size_t>(ensemble.lx) * static_cast<std::size_t>(ensemble.ly);
    if (n_seeds * n_times * site_count > (512ull << 20))
        throw std::runtime_error("replica-snapshot buffer would exceed 512 MiB; reduce seeds, "
                                 "snapshot times, or lattice size");

    if (log)
        *log << "[kzc] ising2d: " << n_seeds << " replicas, " << protocol.total_sweeps()
             << " sweeps each" << std::endl;

    // Phase 1: independent replica trajectories (parallel over seeds);
    // snapshot files, when requested, go to disjoint per-replica names.
    std::vector<std::vector<ising2d::LatticeSnapshot>> buffer(n_seeds);
    std::vector<std::string> snapshot_names(save ? n_seeds * n_times : 0);
    parallel_for(n_seeds, cfg.threads, [&](std::size_t si) {
        ising2d::SpinLattice lattice = ensemble.make_lattice(ensemble.seeds[si]);
        auto& mine = buffer[si];
        mine.reserve(n_times);
        ising2d::run_protocol(lattice, protocol, times,
                              [&](const ising2d::LatticeSnapshot& snap) {
                                  if (save) {
                                      const std::string name =
                                          "snap_s" + padded(static_cast<long>(si), 3) + "_t" +
                                          padded(static_cast<long>(snap.time), 8) + ".kzis";
                                      ising2d::write_snapshot(outs.dir / name, snap);
                                      snapshot_names[si * n_times + mine.size()] = name;
                                  }
                                  mine.push_back(snap);
                              });
    });
    for (auto& name : snapshot_names) outs.names.push_back(std::move(name));

    // Phase 2: seed-ordered reductions per time point.
    Rng boot_rng(0x626f6f74ULL);
    std::vector<std::string> warn_list;
    CsvWriter series(outs.file("series.csv"), {"time", "temperature", "xi", "xi_err",
                                               "xi_status", "wall_density", "defect_length"});
    std::vector<est::SeriesPoint> fit_points;
    for (std::size_t ti = 0; ti < n_times; ++ti) {
        std::vector<const ising2d::LatticeSnapshot*> group(n_seeds);
        for (std::size_t si = 0; si < n_seeds; ++si) group[si] = &buffer[si][ti];
        const auto row = reduce_group(times[ti], group, channel, boot_rng, warn_list);
        series.row({row.time, row.temperature, row.xi, row.xi_err,
                    static_cast<double>(row.xi_status), row.wall_density, row.defect_length});
        if (row.xi_status == 0 && row.time > 0.0 && row.xi > 0.0)
            fit_points.push_back({row.time, row.xi, row.xi_err});
    }
    series.close();
    for (const auto& w : warn_list) warnings.push_back(w);

    json summary{{"experiment", "hold"}, {"data", "series.csv"}, {"replicas", n_seeds},
                 {"fit", nullptr},       {"warnings", warnings}};
    if (!P.at("fit_window").is_null())
        summary["fit"] =
            fit_json(est::fit_power_law(fit_points, window_from_json(P.at("fit_window"))));
    return summary;
}

// --------------------------------------------------------------------------
// rydberg
// --------------------------------------------------------------------------

std::pair<double, double> drive_at(const rydberg::DriveSchedule& schedule, double t) {
    for (const auto& seg : schedule.segments)
        if (t <= seg.t1) return {seg.omega_at(t), seg.delta_at(t)};
    const auto& last = schedule.segments.back();
    return {last.omega1, last.delta1};
}

json run_rydberg(const RunConfig& cfg, OutputSet& outs, std::ostream* log) {
    const json& P = cfg.params;
    const auto geometry = detail::geometry_from_json(P.at("geometry"));
    const auto interaction = detail::interaction_from_json(P.at("interaction"));
    const auto schedule = detail::schedule_from_json(P.at("schedule"));
    const auto options = detail::evolve_options_from_json(P.at("evolve"), cfg.threads);
    const auto pattern = detail::initial_pattern_from_json(P.at("initial"), geometry);
    const auto reference =
        detail::reference_pattern_from_json(P.at("reference"), P.at("initial"), geometry);
    const auto times = P.at("snapshot_times").get<std::vector<double>>();
    const bool save = P.at("save_states").get<bool>();

    const rydberg::RydbergHamiltonian hamiltonian(geometry, interaction);
    rydberg::StateVector psi = rydberg::product_state(geometry, pattern);
    psi.time = schedule.t_begin();

    if (log)
        *log << "[kzc] rydberg: " << geometry.n_sites() << " sites, dimension "
             << hamiltonian.dim() << ", " << hamiltonian.pairs().size() << " couplings"
             << std::endl;

    CsvWriter obs(outs.file("observables.csv"),
                  {"time", "excess_density", "staggered_m", "staggered_m2", "energy", "norm"});
    CsvWriter dens(outs.file("densities.csv"), {"time", "site", "density"});
    std::vector<fs::path> state_paths;
    if (save)
        for (std::size_t i = 0; i < times.size(); ++i)
            state_paths.push_back(outs.file("state_" + padded(static_cast<long>(i), 3) + ".kzry"));

    int index = 0;
    double final_excess = 0.0;
    rydberg::evolve(
        hamiltonian, schedule, psi, times,
        [&](const rydberg::StateVector& s) {
            const auto [omega, delta] = drive_at(schedule, s.time);
            const double excess = rydberg::excess_density(s, reference);
            obs.row({s.time, excess, rydberg::staggered_magnetization(s, geometry),
                     rydberg::staggered_m2(s, geometry),
                     rydberg::energy_expectation(hamiltonian, s, omega, delta, cfg.threads),
                     s.norm()});
            const auto density = rydberg::site_densities(s);
            for (std::size_t i = 0; i < density.size(); ++i)
                dens.row({s.time, static_cast<double>(i), density[i]});
            if (save) rydberg::write_state(state_paths[static_cast<std::size_t>(index)], s);
            final_excess = excess;
            ++index;
            if (log)
                *log << "[kzc] rydberg: snapshot " << index << "/" << times.size()
                     << " at t = " << format_double(s.time) << std::endl;
        },
        options);
    obs.close();
    dens.close();

    return json{{"n_sites", geometry.n_sites()},
                {"dim", hamiltonian.dim()},
                {"pairs", hamiltonian.pairs().size()},
                {"snapshots", times.size()},
                {"final_excess_density", final_excess},
                {"data", "observables.csv"},
                {"warnings", json::array()}};
}

// --------------------------------------------------------------------------
// estimate
// --------------------------------------------------------------------------

json run_estimate(const RunConfig& cfg, OutputSet& outs, std::ostream* log) {
    const json& P = cfg.params;
    const auto channel = detail::channel_from_string(P.at("channel").get<std::string>());

    std::vector<ising2d::LatticeSnapshot> snaps;
    for (const auto& path : P.at("snapshots"))
        snaps.push_back(ising2d::read_snapshot(path.get<std::string>()));
    if (log) *log << "[kzc] estimate: " << snaps.size() << " snapshots" << std::endl;

    std::map<double, std::vector<const ising2d::LatticeSnapshot*>> groups;
    for (const auto& s : snaps) groups[s.time].push_back(&s);

    Rng boot_rng(0x626f6f74ULL);
    std::vector<std::string> warn_list;
    CsvWriter table(outs.file("estimates.csv"),
                    {"time", "n_samples", "temperature", "xi", "xi_err", "xi_status",
                     "wall_density", "defect_length"});
    std::vector<est::SeriesPoint> fit_points;
    for (const auto& [time, group] : groups) {
        const auto row = reduce_group(time, group, channel, boot_rng, warn_list);
        table.row({row.time, static_cast<double>(group.size()), row.temperature, row.xi,
                   row.xi_err, static_cast<double>(row.xi_status), row.wall_density,
                   row.defect_length});
        if (row.xi_status == 0 && row.time > 0.0 && row.xi > 0.0)
            fit_points.push_back({row.time, row.xi, row.xi_err});
    }
    table.close();

    json warnings = json::array();
    for (const auto& w : warn_list) warnings.push_back(w);
    json summary{{"samples", snaps.size()},  {"groups", groups.size()},
                 {"data", "estimates.csv"},  {"fit", nullptr},
                 {"warnings", warnings}};
    if (!P.at("fit_window").is_null())
        summary["fit"] =
            fit_json(est::fit_power_law(fit_points, window_from_json(P.at("fit_window"))));
    return summary;
}

// --------------------------------------------------------------------------
// collapse
// --------------------------------------------------------------------------

json run_collapse(const RunConfig& cfg, OutputSet& outs, std::ostream* log) {
    const json& P = cfg.params;
    const CsvTable table = read_csv(P.at("input").get<std::string>());
    const auto& tau_col = table.data[table.column("tau")];
    const auto& t_col = table.data[table.column("t")];
    const auto& y_col = table.data[table.column("y")];

    std::vector<est::CollapseCurve> curves;
    std::map<double, std::size_t> index; // tau -> curve slot, first appearance order kept below
    for (std::size_t r = 0; r < table.rows(); ++r) {
        const auto [it, inserted] = index.try_emplace(tau_col[r], curves.size());
        if (inserted) {
            curves.emplace_back();
            curves.back().tau = tau_col[r];
        }
        curves[it->second].t.push_back(t_col[r]);
        curves[it->second].y.push_back(y_col[r]);
    }
    if (log) *log << "[kzc] collapse: " << curves.size() << " curves" << std::endl;

    const auto options = detail::collapse_options_from_json(P.at("options"));
    const auto result = est::optimize_collapse(curves, options);

    json summary{{"n_curves", curves.size()},
                 {"residual", result.residual},
                 {"degenerate", result.degenerate},
                 {"warnings", json::array()}};
    if (result.degenerate) {
        summary["alpha_l"] = nullptr;
        summary["alpha_t"] = nullptr;
        summary["alpha_l_err"] = nullptr;
        summary["alpha_t_err"] = nullptr;
        summary["warnings"].push_back(
            "tau values span less than a factor of 4; exponents are not identifiable");
    } else {
        summary["alpha_l"] = result.alpha_l;
        summary["alpha_t"] = result.alpha_t;
        summary["alpha_l_err"] = result.alpha_l_err;
        summary["alpha_t_err"] = result.alpha_t_err;
        CsvWriter collapsed(outs.file("collapsed.csv"),
                            {"tau", "t", "y", "t_scaled", "y_scaled"});
        for (const auto& curve : curves) {
            const double t_scale = std::pow(curve.tau, -result.alpha_t);
            const double y_scale = std::pow(curve.tau, -result.alpha_l);
            for (std::size_t i = 0; i < curve.t.size(); ++i)
                collapsed.row({curve.tau, curve.t[i], curve.y[i], curve.t[i] * t_scale,
                               curve.y[i] * y_scale});
        }
        collapsed.close();
        summary["data"] = "collapsed.csv";
    }
    return summary;
}

} // namespace

RunOutcome run(const RunConfig& config, std::ostream* log) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = config.out_dir;

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw EngineError("setup: cannot create output directory " + dir.string() + ": " +
                          ec.message());

    if (fs::exists(dir / "manifest.json")) {
        RunManifest previous;
        try {
            previous = read_manifest(dir);
        } catch (const std::exception& e) {
            throw EngineError("setup: existing manifest in " + dir.string() +
                              " is unreadable (" + e.what() + "); clean the directory manually");
        }
        for (const auto& name : previous.outputs) fs::remove(dir / name, ec);
        fs::remove(dir / "summary.json", ec);
    } else if (!fs::is_empty(dir)) {
        throw EngineError("setup: output directory " + dir.string() +
                          " is not empty and holds no manifest; refusing to mix outputs");
    }

    const std::string canonical = config.canonical();
    {
        std::ofstream out(dir / "config.json", std::ios::binary);
        if (!out)
            throw EngineError("setup: cannot write " + (dir / "config.json").string());
        out << canonical;
        if (!out)
            throw EngineError("setup: write failed for " + (dir / "config.json").string());
    }

    RunManifest manifest;
    manifest.schema_version = kSchemaVersion;
    manifest.toolkit_version = kVersion;
    manifest.engine = config.engine;
    manifest.config_hash = "sha256:" + sha256_hex(canonical);
    manifest.seeds = config.seeds;
    manifest.complete = false;
    write_manifest(dir, manifest);

    OutputSet outs{dir, {"config.json"}};
    json summary;
    try {
        if (config.engine == "scaling")
            summary = run_scaling(config, outs);
        else if (config.engine == "tfim1d")
            summary = run_tfim(config, outs, log);
        else if (config.engine == "ising2d")
            summary = run_ising2d(config, outs, log);
        else if (config.engine == "rydberg")
            summary = run_rydberg(config, outs, log);
        else if (config.engine == "estimate")
            summary = run_estimate(config, outs, log);
        else if (config.engine == "collapse")
            summary = run_collapse(config, outs, log);
        else
            throw EngineError("engine: unknown engine '" + config.engine + "'");
    } catch (const EngineError&) {
        throw;
    } catch (const std::exception& e) {
        throw EngineError("engine '" + config.engine + "': " + e.what());
    }

    summary["schema_version"] = kSchemaVersion;
    summary["engine"] = config.engine;
    {
        std::ofstream out(dir / "summary.json", std::ios::binary);
        if (!out)
            throw EngineError("finalize: cannot write " + (dir / "summary.json").string());
        out << summary.dump(2) << '\n';
        if (!out)
            throw EngineError("finalize: write failed for " + (dir / "summary.json").string());
    }
    outs.names.push_back("summary.json");

    std::sort(outs.names.begin(), outs.names.end());
    manifest.complete = true;
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.outputs = outs.names;
    write_manifest(dir, manifest);

    if (log) *log << "[kzc] run complete: " << dir.string() << std::endl;
    return RunOutcome{dir, std::move(summary), manifest.outputs};
}

} // namespace kzc::io
