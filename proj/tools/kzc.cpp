// kzc — command-line front door for the coarsening toolkit.
//
// One verb per module responsibility:
//   scales / exponent / classify / eval   scaling arithmetic and curve tables
//   simulate                              any engine, from a config file
//   estimate                              correlation lengths from snapshots
//   collapse                              two-exponent data collapse
//   report                                inspect a finished run directory
//
// Every run writes a manifest, the canonical config, and a summary JSON into
// its output directory. Without --out (and without --config), the arithmetic
// verbs run in a scratch directory and print their result to stdout instead.
//
// Exit codes: 0 success, 2 config error, 3 engine error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kzc/io/config.hpp"
#include "kzc/io/manifest.hpp"
#include "kzc/io/run.hpp"
#include "kzc/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using kzc::io::ConfigError;
using kzc::io::ConfigOverrides;
using kzc::io::EngineError;
using kzc::io::RunConfig;

namespace {

/// Flags shared by every engine-running subcommand.
struct CommonFlags {
    std::string config;
    std::uint64_t seed = 0;
    std::string out;
    int threads = 0;
    bool verbose = false;

    CLI::Option* config_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* threads_opt = nullptr;

    void attach(CLI::App* cmd, bool with_config) {
        if (with_config)
            config_opt = cmd->add_option("--config", config, "run config file (JSON)")
                             ->check(CLI::ExistingFile);
        seed_opt = cmd->add_option("--seed", seed, "replace the seed list with this one seed");
        out_opt = cmd->add_option("--out", out, "output directory for the run artifacts");
        threads_opt = cmd->add_option("--threads", threads, "worker threads for replica loops");
        cmd->add_flag("--verbose", verbose, "log progress to stderr");
    }

    ConfigOverrides overrides() const {
        ConfigOverrides ov;
        if (seed_opt && seed_opt->count()) ov.seed = seed;
        if (out_opt && out_opt->count()) ov.out_dir = fs::path(out);
        if (threads_opt && threads_opt->count()) ov.threads = threads;
        return ov;
    }

    bool has_config() const { return config_opt && config_opt->count() > 0; }
};

fs::path make_scratch_dir() {
    std::string tmpl = (fs::temp_directory_path() / "kzc-XXXXXX").string();
    if (!mkdtemp(tmpl.data()))
        throw EngineError("setup: cannot create a scratch directory under " +
                          fs::temp_directory_path().string());
    return fs::path(tmpl);
}

std::ostream* log_stream(const CommonFlags& common) {
    return common.verbose ? &std::cerr : nullptr;
}

/// Runs a config built from command-line flags. With --out the artifacts are
/// kept and the summary goes to stdout; without it the run lands in a scratch
/// directory that is removed afterwards, and stdout carries either the
/// summary or, when `bare_payload` names a data file, that file's content.
void run_built(json config_json, const CommonFlags& common, const std::string& bare_payload) {
    ConfigOverrides ov = common.overrides();
    const bool scratch = !ov.out_dir.has_value();
    fs::path tmp;
    if (scratch) {
        tmp = make_scratch_dir();
        ov.out_dir = tmp;
    }
    try {
        const RunConfig rc = kzc::io::validate_config_json(config_json, ov, fs::current_path());
        const auto outcome = kzc::io::run(rc, log_stream(common));
        if (scratch && !bare_payload.empty()) {
            std::ifstream in(outcome.out_dir / bare_payload, std::ios::binary);
            std::cout << in.rdbuf();
        } else {
            std::cout << outcome.summary.dump(2) << '\n';
        }
        if (!scratch) std::cerr << "kzc: run directory " << outcome.out_dir.string() << '\n';
        if (scratch) fs::remove_all(tmp);
    } catch (...) {
        if (scratch) {
            std::error_code ec;
            fs::remove_all(tmp, ec);
        }
        throw;
    }
}

/// Runs a config file (any engine). Artifacts are always kept.
void run_file(const CommonFlags& common, const std::string& require_engine = "",
              const std::string& require_task = "") {
    const RunConfig rc = kzc::io::validate_config(common.config, common.overrides());
    if (!require_engine.empty() && rc.engine != require_engine)
        throw ConfigError({"engine: config declares '" + rc.engine + "' but this subcommand runs '" +
                           require_engine + "'"});
    if (!require_task.empty() && rc.params.value("task", std::string()) != require_task)
        throw ConfigError({"params.task: config declares '" +
                           rc.params.value("task", std::string()) +
                           "' but this subcommand runs '" + require_task + "'"});
    const auto outcome = kzc::io::run(rc, log_stream(common));
    std::cout << outcome.summary.dump(2) << '\n';
    std::cerr << "kzc: run directory " << outcome.out_dir.string() << '\n';
}

/// Exponent/micro/protocol/model flags shared by the scaling verbs. Only
/// options the user actually passed enter the params JSON, so the validator
/// reports missing required fields and fills the documented defaults.
struct ScalingFlags {
    std::string universality, registry, stop_side, function;
    double nu = 0, z = 0, nu_bar = 0, z_bar = 0, z_d = 0;
    int d = 0;
    double l0 = 0, t0 = 0;
    double tau = 0, p = 0, g_s = 0, t_hold = 0;
    double x_c = 0, y_c = 0;
    double x_min = 0, x_max = 0, x_s = 0;
    int points = 0;

    CLI::Option *o_universality = nullptr, *o_registry = nullptr;
    CLI::Option *o_nu = nullptr, *o_z = nullptr, *o_nu_bar = nullptr, *o_z_bar = nullptr,
                *o_z_d = nullptr, *o_d = nullptr;
    CLI::Option *o_l0 = nullptr, *o_t0 = nullptr;
    CLI::Option *o_tau = nullptr, *o_p = nullptr, *o_g_s = nullptr, *o_t_hold = nullptr;
    CLI::Option *o_x_c = nullptr, *o_y_c = nullptr, *o_stop_side = nullptr;
    CLI::Option *o_function = nullptr, *o_x_min = nullptr, *o_x_max = nullptr, *o_points = nullptr,
                *o_x_s = nullptr;

    void attach_exponents(CLI::App* cmd) {
        o_universality =
            cmd->add_option("--universality,-u", universality, "universality-class name");
        o_registry = cmd->add_option("--registry", registry, "exponent registry file (JSON)");
        o_nu = cmd->add_option("--nu", nu, "correlation-length exponent");
        o_z = cmd->add_option("--z", z, "dynamical exponent");
        o_nu_bar = cmd->add_option("--nu-bar", nu_bar, "classical correlation-length exponent");
        o_z_bar = cmd->add_option("--z-bar", z_bar, "classical dynamical exponent");
        o_z_d = cmd->add_option("--zd", z_d, "domain-growth exponent");
        o_d = cmd->add_option("--dim", d, "spatial dimension");
        o_l0 = cmd->add_option("--l0", l0, "microscopic length");
        o_t0 = cmd->add_option("--t0", t0, "microscopic time");
    }

    void attach_protocol(CLI::App* cmd) {
        o_tau = cmd->add_option("--tau", tau, "ramp time scale");
        o_p = cmd->add_option("--p", p, "ramp power");
        o_g_s = cmd->add_option("--gs", g_s, "stop coupling (ramp ends at g = g_s)");
        o_t_hold = cmd->add_option("--t-hold", t_hold, "hold time after the stop");
    }

    void attach_model(CLI::App* cmd) {
        o_x_c = cmd->add_option("--xc", x_c, "crossover point of the growing regime");
        o_y_c = cmd->add_option("--yc", y_c, "finite-time divergence point of h");
    }

    json params(const std::string& task) const {
        json P{{"task", task}};
        if (o_universality->count()) P["universality"] = universality;
        if (o_registry->count()) P["registry_file"] = registry;
        json ex = json::object();
        if (o_nu->count()) ex["nu"] = nu;
        if (o_z->count()) ex["z"] = z;
        if (o_nu_bar->count()) ex["nu_bar"] = nu_bar;
        if (o_z_bar->count()) ex["z_bar"] = z_bar;
        if (o_z_d->count()) ex["z_d"] = z_d;
        if (o_d->count()) ex["d"] = d;
        if (!ex.empty()) P["exponents"] = std::move(ex);
        json micro = json::object();
        if (o_l0->count()) micro["l0"] = l0;
        if (o_t0->count()) micro["t0"] = t0;
        if (!micro.empty()) P["micro"] = std::move(micro);

        if (task == "exponent") {
            if (o_p->count()) P["p"] = p;
            return P;
        }
        if (task == "scales" || task == "classify") {
            json protocol = json::object();
            if (o_tau->count()) protocol["tau"] = tau;
            if (o_p->count()) protocol["p"] = p;
            if (o_g_s->count()) protocol["g_s"] = g_s;
            if (o_t_hold->count()) protocol["t_hold"] = t_hold;
            P["protocol"] = std::move(protocol);
        }
        if (task == "classify" || task == "eval") {
            json model = json::object();
            if (o_x_c->count()) model["x_c"] = x_c;
            if (o_y_c->count()) model["y_c"] = y_c;
            if (!model.empty()) P["model"] = std::move(model);
        }
        if (task == "classify" && o_stop_side->count()) P["stop_side"] = stop_side;
        if (task == "eval") {
            json e = json::object();
            if (o_function->count()) e["function"] = function;
            if (o_x_min->count()) e["x_min"] = x_min;
            if (o_x_max->count()) e["x_max"] = x_max;
            if (o_points->count()) e["points"] = points;
            if (o_x_s->count()) e["x_s"] = x_s;
            if (o_p->count()) e["p"] = p;
            P["eval"] = std::move(e);
        }
        return P;
    }
};

void scaling_verb(const CommonFlags& common, const ScalingFlags& flags, const std::string& task,
                  const std::string& bare_payload) {
    if (common.has_config()) {
        run_file(common, "scaling", task);
        return;
    }
    run_built(json{{"engine", "scaling"}, {"params", flags.params(task)}}, common, bare_payload);
}

void report_verb(const std::string& run_dir) {
    const fs::path dir(run_dir);
    kzc::io::RunManifest manifest;
    try {
        manifest = kzc::io::read_manifest(dir);
    } catch (const std::exception& e) {
        throw ConfigError({std::string("manifest: ") + e.what()});
    }

    std::cout << "run directory:   " << fs::absolute(dir).lexically_normal().string() << '\n';
    std::cout << "engine:          " << manifest.engine << '\n';
    std::cout << "toolkit version: " << manifest.toolkit_version << '\n';
    std::cout << "schema version:  " << manifest.schema_version << '\n';
    std::cout << "config hash:     " << manifest.config_hash << '\n';
    std::cout << "seeds:          ";
    for (const auto s : manifest.seeds) std::cout << ' ' << s;
    std::cout << '\n';
    std::cout << "complete:        " << (manifest.complete ? "yes" : "no") << '\n';
    std::cout << "wall clock:      " << manifest.wall_clock_seconds << " s\n";
    std::cout << "outputs (" << manifest.outputs.size() << "):\n";
    for (const auto& name : manifest.outputs) std::cout << "  " << name << '\n';

    std::ifstream summary(dir / "summary.json", std::ios::binary);
    if (summary) {
        std::cout << "summary:\n";
        std::cout << summary.rdbuf();
    } else if (manifest.complete) {
        std::cout << "summary: missing\n";
    } else {
        std::cout << "summary: not written (run incomplete)\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kibble-Zurek and coarsening toolkit"};
    app.set_version_flag("--version", std::string("kzc ") + kzc::kVersion);
    app.require_subcommand(1);

    CommonFlags c_exponent, c_scales, c_classify, c_eval, c_simulate, c_estimate, c_collapse;
    ScalingFlags f_exponent, f_scales, f_classify, f_eval;

    // --- scaling verbs -----------------------------------------------------
    auto* cmd_exponent =
        app.add_subcommand("exponent", "coarsening growth exponent for a universality class");
    c_exponent.attach(cmd_exponent, true);
    f_exponent.attach_exponents(cmd_exponent);
    f_exponent.o_p = cmd_exponent->add_option("--p", f_exponent.p, "ramp power");
    cmd_exponent->callback([&] { scaling_verb(c_exponent, f_exponent, "exponent", ""); });

    auto* cmd_scales =
        app.add_subcommand("scales", "freeze-out time and length for a ramp protocol");
    c_scales.attach(cmd_scales, true);
    f_scales.attach_exponents(cmd_scales);
    f_scales.attach_protocol(cmd_scales);
    cmd_scales->callback([&] { scaling_verb(c_scales, f_scales, "scales", ""); });

    auto* cmd_classify =
        app.add_subcommand("classify", "late-time coarsening case for a stopped ramp");
    c_classify.attach(cmd_classify, true);
    f_classify.attach_exponents(cmd_classify);
    f_classify.attach_protocol(cmd_classify);
    f_classify.attach_model(cmd_classify);
    f_classify.o_stop_side = cmd_classify->add_option(
        "--stop-side", f_classify.stop_side, "phase the ramp stops in: ordered|critical|disordered");
    cmd_classify->callback([&] { scaling_verb(c_classify, f_classify, "classify", ""); });

    auto* cmd_eval = app.add_subcommand("eval", "tabulate a universal scaling function");
    c_eval.attach(cmd_eval, true);
    f_eval.attach_exponents(cmd_eval);
    f_eval.attach_model(cmd_eval);
    f_eval.o_function =
        cmd_eval->add_option("--function", f_eval.function, "which function: f|F|h");
    f_eval.o_x_min = cmd_eval->add_option("--x-min", f_eval.x_min, "first grid point");
    f_eval.o_x_max = cmd_eval->add_option("--x-max", f_eval.x_max, "last grid point");
    f_eval.o_points = cmd_eval->add_option("--points", f_eval.points, "grid size");
    f_eval.o_x_s = cmd_eval->add_option("--xs", f_eval.x_s, "scaled stop time (F only)");
    f_eval.o_p = cmd_eval->add_option("--p", f_eval.p, "ramp power (f only)");
    cmd_eval->callback([&] { scaling_verb(c_eval, f_eval, "eval", "curve.csv"); });

    // --- engines -----------------------------------------------------------
    auto* cmd_simulate = app.add_subcommand("simulate", "run a full engine config file");
    c_simulate.attach(cmd_simulate, true);
    c_simulate.config_opt->required();
    cmd_simulate->callback([&] { run_file(c_simulate); });

    auto* cmd_estimate =
        app.add_subcommand("estimate", "correlation lengths from saved lattice snapshots");
    c_estimate.attach(cmd_estimate, true);
    std::vector<std::string> est_snapshots;
    std::string est_channel;
    double est_fit_min = 0, est_fit_max = 0;
    auto* o_snaps = cmd_estimate->add_option("snapshots", est_snapshots, "snapshot files (.kzis)");
    auto* o_channel = cmd_estimate->add_option("--channel", est_channel,
                                               "order parameter: ferromagnetic|staggered");
    auto* o_fit_min = cmd_estimate->add_option("--fit-min", est_fit_min, "fit window start");
    auto* o_fit_max = cmd_estimate->add_option("--fit-max", est_fit_max, "fit window end");
    cmd_estimate->callback([&] {
        if (c_estimate.has_config()) {
            if (o_snaps->count())
                throw ConfigError({"snapshots: pass files or --config, not both"});
            run_file(c_estimate, "estimate");
            return;
        }
        json P{{"snapshots", est_snapshots}};
        if (o_channel->count()) P["channel"] = est_channel;
        if (o_fit_min->count() || o_fit_max->count())
            P["fit_window"] = json{{"t_min", est_fit_min}, {"t_max", est_fit_max}};
        run_built(json{{"engine", "estimate"}, {"params", std::move(P)}}, c_estimate, "");
    });

    auto* cmd_collapse =
        app.add_subcommand("collapse", "two-exponent collapse of curve families");
    c_collapse.attach(cmd_collapse, true);
    std::string col_input;
    double col_alpha_min = 0, col_alpha_max = 0, col_grid = 0, col_refine = 0;
    auto* o_input =
        cmd_collapse->add_option("input", col_input, "curve table (CSV with tau, t, y columns)");
    auto* o_amin = cmd_collapse->add_option("--alpha-min", col_alpha_min, "exponent search floor");
    auto* o_amax = cmd_collapse->add_option("--alpha-max", col_alpha_max, "exponent search ceiling");
    auto* o_grid = cmd_collapse->add_option("--grid-step", col_grid, "coarse search step");
    auto* o_refine = cmd_collapse->add_option("--refine-tol", col_refine, "refinement tolerance");
    cmd_collapse->callback([&] {
        if (c_collapse.has_config()) {
            if (o_input->count()) throw ConfigError({"input: pass a file or --config, not both"});
            run_file(c_collapse, "collapse");
            return;
        }
        json P = json::object();
        if (o_input->count()) P["input"] = col_input;
        json options = json::object();
        if (o_amin->count()) options["alpha_min"] = col_alpha_min;
        if (o_amax->count()) options["alpha_max"] = col_alpha_max;
        if (o_grid->count()) options["grid_step"] = col_grid;
        if (o_refine->count()) options["refine_tol"] = col_refine;
        if (!options.empty()) P["options"] = std::move(options);
        run_built(json{{"engine", "collapse"}, {"params", std::move(P)}}, c_collapse, "");
    });

    auto* cmd_report = app.add_subcommand("report", "print the manifest and summary of a run");
    std::string report_dir;
    cmd_report->add_option("run_dir", report_dir, "run directory holding manifest.json")
        ->required()
        ->check(CLI::ExistingDirectory);
    cmd_report->callback([&] { report_verb(report_dir); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "kzc: " << e.what() << '\n';
        return 2;
    } catch (const EngineError& e) {
        std::cerr << "kzc: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "kzc: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
