// Acceptance suite: one criterion per command-line argument (C1 .. C11), one
// [PASS]/[FAIL] line per criterion, nonzero exit when anything fails. Every
// tolerance is pinned here, next to the check that uses it.
//
// The heavy criteria (C3-C7) run real simulations at the sizes quoted in
// their pass lines; expect minutes to tens of minutes each on one core.

#include <Eigen/Dense>

#include <nlohmann/json.hpp>

#include "kzc/common/rng.hpp"
#include "kzc/est/collapse.hpp"
#include "kzc/est/correlation.hpp"
#include "kzc/est/fit.hpp"
#include "kzc/io/config.hpp"
#include "kzc/io/run.hpp"
#include "kzc/ising2d/experiments.hpp"
#include "kzc/ising2d/lattice.hpp"
#include "kzc/rydberg/evolve.hpp"
#include "kzc/rydberg/observables.hpp"
#include "kzc/scaling/classify.hpp"
#include "kzc/scaling/exponents.hpp"
#include "kzc/scaling/functions.hpp"
#include "kzc/scaling/kz.hpp"
#include "kzc/scaling/model.hpp"
#include "kzc/scaling/protocol.hpp"
#include "kzc/tfim/ramp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// infrastructure
// ---------------------------------------------------------------------------

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

fs::path scratch_dir(const char* tag) {
    std::string tmpl = (fs::temp_directory_path() / (std::string("kzc-accept-") + tag + "-XXXXXX"))
                           .string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed for " + tmpl);
    return fs::path(buf.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Numeric rows of a comma-separated file, header line skipped.
std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Unweighted least squares of ln y against ln t.
struct Ols {
    double slope = 0.0;
    double intercept = 0.0;
};

Ols ols_loglog(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [t, y] : pts) {
        const double x = std::log(t), v = std::log(y);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    const double n = static_cast<double>(pts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

/// Validates and runs one engine config, directing outputs to a scratch
/// subdirectory. Seeds come from the config itself.
kzc::io::RunOutcome run_engine(const json& cfg, const fs::path& out_dir) {
    kzc::io::ConfigOverrides ov;
    ov.out_dir = out_dir;
    const auto rc = kzc::io::validate_config_json(cfg, ov);
    return kzc::io::run(rc);
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

/// Relative continuity gap between the two one-sided limits at a breakpoint.
double rel_gap(double left, double right) {
    return std::abs(left - right) / std::max({1.0, std::abs(left), std::abs(right)});
}

const kzc::scaling::CriticalExponents& quantum_exponents() {
    return kzc::scaling::builtin_exponents().at("ising-2+1d");
}

const kzc::scaling::CriticalExponents& classical_exponents() {
    return kzc::scaling::builtin_exponents().at("ising-2d-classical");
}

// ---------------------------------------------------------------------------
// C1 — growth-exponent arithmetic through the scaling engine
// ---------------------------------------------------------------------------

Outcome c1() {
    const auto dir = scratch_dir("c1");
    const double nu = 0.629, z = 1.0, z_d = 2.0;
    const struct {
        double p;
        double quoted; // rounded value the pass line quotes
        const char* regime;
    } cases[] = {{1.0, 0.186, "growing"}, {3.0, -0.444, "bounded"}};

    std::string detail;
    for (const auto& c : cases) {
        const json cfg{{"engine", "scaling"},
                       {"params", {{"task", "exponent"}, {"universality", "ising-2+1d"}, {"p", c.p}}}};
        const auto outcome = run_engine(cfg, dir / fmt("p%g", c.p));
        const double kappa = outcome.summary.at("kappa").get<double>();
        const double formula = -c.p * nu + (c.p * nu * z + 1.0) / z_d;
        if (!within(kappa, formula, 1e-3))
            return {false, fmt("kappa(p=%g) = %.6f deviates from -p nu + (p nu z + 1)/z_d = %.6f "
                               "by more than 1e-3",
                               c.p, kappa, formula)};
        if (!within(kappa, c.quoted, 1e-3))
            return {false, fmt("kappa(p=%g) = %.6f is more than 1e-3 from the quoted %.3f", c.p,
                               kappa, c.quoted)};
        if (outcome.summary.at("regime").get<std::string>() != c.regime)
            return {false, fmt("regime(p=%g) = '%s', expected '%s'", c.p,
                               outcome.summary.at("regime").get<std::string>().c_str(), c.regime)};
        detail += fmt("%skappa(p=%g) = %.4f (%s)", detail.empty() ? "" : ", ", c.p, kappa,
                      c.regime);
    }
    return {true, detail + "; both within 1e-3 of the closed form"};
}

// ---------------------------------------------------------------------------
// C2 — scaling-function contract suite
// ---------------------------------------------------------------------------

Outcome c2() {
    using namespace kzc::scaling;
    ScalingModel m;
    m.exponents = quantum_exponents();
    m.amplitudes = {{"f_minus", 1.2}, {"f_plus", 0.9}, {"f_inf", 2.4}, {"C", 1.1},
                    {"C_s", 0.4},     {"xstar", 1.3},  {"h_minus", 1.0}, {"h_crit", 0.8}};
    m.x_c = 0.8;
    m.y_c = 1.3;

    int checks = 0;

    // (a) F(x, x_s) == f(x) for x <= x_s, bit for bit, for stops on either
    // side of the fan and for the never-stopped ramp.
    for (double x_s : {-1.5, 0.5, 2.0, std::numeric_limits<double>::infinity()}) {
        const double lo = -3.0;
        const double hi = std::isfinite(x_s) ? x_s : 50.0;
        for (int i = 0; i <= 96; ++i) {
            const double x = lo + (hi - lo) * i / 96.0;
            if (eval_F(m, x, x_s) != eval_f(m, x, 1.0))
                return {false, fmt("F(%.6f, x_s=%.2f) != f(%.6f) bitwise", x, x_s, x)};
            ++checks;
        }
    }

    // (b) continuity of f at the freeze-out boundaries for all three late
    // regimes (kappa > 0, = 0, < 0), of F at its stop/crossover breakpoints,
    // and of h at its branch edges; 1e-6 relative at eps = 1e-9.
    const double eps = 1e-9, tol = 1e-6;
    const double p_log = 1.0 / 0.629; // kappa(p) = 0 exactly at p = 1/nu for z=1, z_d=2
    for (double p : {1.0, p_log, 3.0}) {
        for (double b : {-1.0, 1.0}) {
            if (rel_gap(eval_f(m, b - eps, p), eval_f(m, b, p)) > tol ||
                rel_gap(eval_f(m, b, p), eval_f(m, b + eps, p)) > tol)
                return {false, fmt("f discontinuous at x=%g for p=%.4f", b, p)};
            ++checks;
        }
    }
    {
        // Ordered-side stop with a critical window: breakpoints at the anchor
        // x_a = 1 and at the crossover x*.
        const double x_s = 0.9;
        const double xs_cross = crossover_xstar(m, x_s);
        for (double b : {1.0, xs_cross}) {
            if (rel_gap(eval_F(m, b - eps * b, x_s), eval_F(m, b + eps * b, x_s)) > tol)
                return {false, fmt("F(x, x_s=0.9) discontinuous at x=%.3f", b)};
            ++checks;
        }
        // Deep ordered stop, no critical window: breakpoint at x_a = x_s.
        const double deep = 2.0;
        if (rel_gap(eval_F(m, deep - eps * deep, deep), eval_F(m, deep + eps * deep, deep)) > tol)
            return {false, "F discontinuous at a deep ordered stop anchor"};
        ++checks;
        // Disordered-side stop near the line: plateau joins at x*.
        const double x_sd = 0.7;
        const double cross_d = crossover_xstar(m, x_sd);
        if (rel_gap(eval_F(m, cross_d * (1 - eps), x_sd), eval_F(m, cross_d * (1 + eps), x_sd)) >
            tol)
            return {false, "F plateau discontinuous at the disordered-side crossover"};
        ++checks;
    }
    {
        const double w = std::min(*m.y_c / 2.0, 1.0);
        for (double b : {-1.0, *m.y_c - w, *m.y_c + w}) {
            const auto left = eval_h(m, b - eps * std::max(1.0, std::abs(b)));
            const auto mid = eval_h(m, b);
            const auto right = eval_h(m, b + eps * std::max(1.0, std::abs(b)));
            if (!left || !mid || !right) return {false, fmt("h unexpectedly empty near y=%g", b)};
            if (rel_gap(*left, *mid) > tol || rel_gap(*mid, *right) > tol)
                return {false, fmt("h discontinuous at branch edge y=%g", b)};
            ++checks;
        }
    }

    // (c) monotonicity where the law grows: the late branch of f for
    // kappa > 0, the critical branch of F, and the offset branch of F.
    {
        double prev = eval_f(m, 1.0, 1.0);
        for (int i = 1; i <= 40; ++i) {
            const double x = std::pow(10.0, 3.0 * i / 40.0);
            const double cur = eval_f(m, x, 1.0);
            if (cur < prev) return {false, fmt("f(p=1) not monotone at x=%.3f", x)};
            prev = cur;
            ++checks;
        }
        prev = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double x = 1.0 + i * 2.0; // inside the critical window of x_s = 0.9
            const double cur = eval_F(m, x, 0.9);
            if (cur < prev) return {false, fmt("critical branch of F not monotone at x=%.3f", x)};
            prev = cur;
            ++checks;
        }
        prev = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double x = 2.0 + i * 5.0; // offset growth after the deep stop at 2.0
            const double cur = eval_F(m, x, 2.0);
            if (cur < prev) return {false, fmt("offset branch of F not monotone at x=%.3f", x)};
            prev = cur;
            ++checks;
        }
    }

    // (d) h is finite everywhere except exactly y_c.
    if (eval_h(m, *m.y_c).has_value()) return {false, "h(y_c) should be empty (divergent)"};
    for (int i = 0; i <= 200; ++i) {
        const double y = -5.0 + 10.0 * i / 200.0;
        if (y == *m.y_c) continue;
        const auto h = eval_h(m, y);
        if (!h || !std::isfinite(*h) || *h <= 0.0)
            return {false, fmt("h(%.3f) not finite/positive", y)};
        ++checks;
    }

    // (e) the crossover scale diverges exactly at x_s = x_c and grows as the
    // stop approaches the line.
    if (!std::isinf(crossover_xstar(m, *m.x_c))) return {false, "x*(x_c) should be infinite"};
    if (!(crossover_xstar(m, 0.81) > crossover_xstar(m, 1.0) &&
          crossover_xstar(m, 1.0) > crossover_xstar(m, 2.0)))
        return {false, "x*(x_s) should grow toward the critical line"};
    checks += 2;

    // (f) representative protocols land in all five cases plus adiabatic.
    {
        ScalingModel mc;
        mc.exponents = quantum_exponents();
        mc.x_c = 0.5;
        RampProtocol r;
        r.tau = 100.0;
        const auto kz = kz_scales(mc.exponents, {}, r);
        const struct {
            double x_s;
            StopEnergySide side;
            const char* label;
        } plans[] = {
            {8.0, StopEnergySide::ordered, "case1-noncritical"},
            {0.8, StopEnergySide::ordered, "case2-critical-then-noncritical"},
            {0.5, StopEnergySide::critical, "case3-critical"},
            {0.4, StopEnergySide::disordered, "case4-critical-then-frozen"},
            {-0.6, StopEnergySide::disordered, "case5-frozen"},
            {-10.0, StopEnergySide::disordered, "adiabatic"},
        };
        for (const auto& plan : plans) {
            RampProtocol stopped = r;
            stopped.g_s = plan.x_s * kz.t_kz / r.tau; // p = 1: g(t) = t / tau
            const auto got = to_string(classify_case(stopped, kz, mc, plan.side));
            if (got != plan.label)
                return {false, fmt("stop at x_s=%.1f classified '%s', expected '%s'", plan.x_s,
                                   got.c_str(), plan.label)};
            ++checks;
        }
        if (to_string(classify_case(r, kz, mc, StopEnergySide::ordered)) != "case1-noncritical")
            return {false, "indefinite ramp should classify as case1-noncritical"};
        ++checks;
    }

    return {true, fmt("%d property checks: F==f pre-stop (bitwise), continuity at every branch "
                      "edge (rel. 1e-6), growth monotonicity, h finite off y_c, x* divergence at "
                      "x_c, all six case labels",
                      checks)};
}

// ---------------------------------------------------------------------------
// C3 — 1D transverse-field chain: defect-density scaling with ramp rate
// ---------------------------------------------------------------------------

Outcome c3() {
    const auto dir = scratch_dir("c3");

    // p = 1 at the quoted rates; the engine's own fitter needs >= 6 points,
    // so the five-point slope is computed right here instead.
    const json cfg1{{"engine", "tfim1d"},
                    {"params",
                     {{"L", 512},
                      {"tau_list", {25, 50, 100, 200, 400}},
                      {"fit_window", nullptr}}}};
    const auto out1 = run_engine(cfg1, dir / "p1");
    std::vector<std::pair<double, double>> pts1;
    for (const auto& row : read_csv(out1.out_dir / "defects.csv"))
        pts1.emplace_back(row.at(0), row.at(1));
    if (pts1.size() != 5) return {false, "p=1 sweep did not produce 5 rows"};
    const double slope1 = ols_loglog(pts1).slope;
    if (!within(slope1, -0.50, 0.03))
        return {false, fmt("p=1 slope %.4f outside -0.50 +/- 0.03 (L=512)", slope1)};

    // p = 2: the excitation window narrows like tau^(-2/3), so resolving it
    // on the momentum grid at the largest tau needs a longer chain.
    const json cfg2{{"engine", "tfim1d"},
                    {"params",
                     {{"L", 2048},
                      {"p", 2},
                      {"tau_list", {25, 40, 63, 100, 160, 250}},
                      {"fit_window", nullptr}}}};
    const auto out2 = run_engine(cfg2, dir / "p2");
    std::vector<std::pair<double, double>> pts2;
    for (const auto& row : read_csv(out2.out_dir / "defects.csv"))
        pts2.emplace_back(row.at(0), row.at(1));
    if (pts2.size() != 6) return {false, "p=2 sweep did not produce 6 rows"};
    const double slope2 = ols_loglog(pts2).slope;
    if (!within(slope2, -2.0 / 3.0, 0.05))
        return {false, fmt("p=2 slope %.4f outside -2/3 +/- 0.05 (L=2048)", slope2)};

    return {true, fmt("defect-density slope %.4f over tau {25..400} at L=512 (target -0.50 +/- "
                      "0.03); p=2 slope %.4f over tau {25..250} at L=2048 (target -0.667 +/- "
                      "0.05)",
                      slope1, slope2)};
}

// ---------------------------------------------------------------------------
// shared 2D-Ising machinery for C4 / C5
// ---------------------------------------------------------------------------

std::vector<double> log_spaced_times(double lo, double hi, int n) {
    std::vector<double> times;
    for (int i = 0; i < n; ++i)
        times.push_back(std::round(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1))));
    return times;
}

std::vector<std::uint64_t> seed_range(int n) {
    std::vector<std::uint64_t> seeds;
    for (int i = 1; i <= n; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
    return seeds;
}

// ---------------------------------------------------------------------------
// C4 — 2D Ising noncritical coarsening at T_c / 2
// ---------------------------------------------------------------------------

Outcome c4() {
    using namespace kzc::ising2d;
    EnsembleSpec ens;
    ens.lx = ens.ly = 512;
    ens.init = EnsembleSpec::Init::random;
    ens.seeds = seed_range(16);

    ThermalProtocol protocol{{{ThermalSegment::Kind::hold, kTc / 2.0, kTc / 2.0, 10000, 1.0}}};
    const auto times = log_spaced_times(100.0, 10000.0, 11);
    const auto series = xi_series(ens, protocol, times, kzc::est::Channel::ferromagnetic, 1);

    std::vector<kzc::est::SeriesPoint> pts;
    for (const auto& row : series.rows) pts.push_back({row.time, row.defect_length, 0.0});
    const auto fit = kzc::est::fit_power_law(pts, {99.0, 10100.0});
    if (!within(fit.exponent, 0.50, 0.07))
        return {false, fmt("domain-growth exponent %.4f +/- %.4f outside 0.50 +/- 0.07 "
                           "(defect length, 512^2, 16 seeds, t in [100, 10^4] sweeps)",
                           fit.exponent, fit.exponent_err)};
    return {true, fmt("domain-growth exponent %.4f +/- %.4f (target 0.50 +/- 0.07; defect "
                      "length over t in [100, 10^4] sweeps at T_c/2, 512^2, 16 seeds, r^2 = "
                      "%.4f)",
                      fit.exponent, fit.exponent_err, fit.r_squared)};
}

// ---------------------------------------------------------------------------
// C5 — 2D Ising classical-critical coarsening at exactly T_c
// ---------------------------------------------------------------------------

Outcome c5() {
    using namespace kzc::ising2d;
    EnsembleSpec ens;
    ens.lx = ens.ly = 512;
    ens.init = EnsembleSpec::Init::random;
    ens.seeds = seed_range(16);

    ThermalProtocol protocol{{{ThermalSegment::Kind::hold, kTc, kTc, 10000, 1.0}}};
    const auto times = log_spaced_times(100.0, 10000.0, 11);
    const auto series = xi_series(ens, protocol, times, kzc::est::Channel::ferromagnetic, 1);

    std::vector<kzc::est::SeriesPoint> pts;
    for (const auto& row : series.rows) {
        if (row.xi_status != 0)
            return {false, fmt("xi estimator status %d at t=%g (peak lost or saturated)",
                               row.xi_status, row.time)};
        pts.push_back({row.time, row.xi, row.xi_err});
    }
    const auto fit = kzc::est::fit_power_law(pts, {99.0, 10100.0});
    if (!within(fit.exponent, 0.46, 0.08))
        return {false, fmt("critical-coarsening exponent %.4f +/- %.4f outside 0.46 +/- 0.08 "
                           "(xi(t) at T_c, 512^2, 16 seeds)",
                           fit.exponent, fit.exponent_err)};
    const bool separable = fit.exponent + 2.0 * fit.exponent_err < 0.50;
    return {true, fmt("critical-coarsening exponent %.4f +/- %.4f (target 0.46 +/- 0.08, 1/z "
                      "with z = 2.17; xi(t) at T_c, 512^2, 16 seeds)%s",
                      fit.exponent, fit.exponent_err,
                      separable ? "; excludes 0.50 at two sigma"
                                : "; NOT separable from 0.50 at this precision - more seeds "
                                  "needed")};
}

// ---------------------------------------------------------------------------
// C6 — 2D Ising thermal Kibble-Zurek: xi at the crossing vs cooling rate
// ---------------------------------------------------------------------------

Outcome c6() {
    using namespace kzc::ising2d;
    KzRampSpec spec;
    spec.lx = spec.ly = 512;
    spec.tau_list = {25, 40, 63, 100, 158, 251, 398};
    spec.seeds = seed_range(16);
    spec.equil_sweeps = 32;

    const auto result = kz_ramp_experiment(spec, 1);
    int used = 0;
    for (const auto& row : result.rows)
        if (!row.excluded) ++used;
    if (!result.fit)
        return {false, fmt("no power-law fit produced (%d usable rates of %zu)", used,
                           result.rows.size())};
    const auto& fit = *result.fit;
    if (!within(fit.exponent, 0.315, 0.05))
        return {false, fmt("freeze-out exponent %.4f +/- %.4f outside 0.315 +/- 0.05 "
                           "(%d usable rates, 512^2, 16 seeds)",
                           fit.exponent, fit.exponent_err, used)};
    return {true, fmt("freeze-out exponent %.4f +/- %.4f (target 0.315 +/- 0.05, nu/(nu z + 1) "
                      "for nu = 1, z = 2.17; cooling 2T_c -> T_c over tau in [25, 398] sweeps, "
                      "512^2, 16 seeds, %d/%zu rates usable)",
                      fit.exponent, fit.exponent_err, used, result.rows.size())};
}

// ---------------------------------------------------------------------------
// C7 — quench-depth slowdown ordering of the stopped-ramp growth law
// ---------------------------------------------------------------------------

// The slowdown statement holds for z < z_d, which selects the quantum
// exponent set (z = 1, z_d = 2); the thermal crossing has z = 2.17 > z_d and
// genuinely inverts the ordering. Each seeded draw builds one admissible set
// of nonuniversal amplitudes, stops the same ramp at two depths past the
// freeze-out window, and compares the grown length at a matched hold time.
Outcome c7() {
    using namespace kzc::scaling;
    const int n_pairs = 20;
    kzc::Rng rng(0xacc7ULL);
    int ordered = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_pairs; ++i) {
        ScalingModel m;
        m.exponents = quantum_exponents();
        const double f_plus = 0.5 + 1.5 * rng.uniform();
        const double c_drive = 0.8 + 0.7 * rng.uniform();
        m.amplitudes = {{"f_minus", 0.5 + 1.5 * rng.uniform()},
                        {"f_plus", f_plus},
                        {"f_inf", f_plus * (1.5 + 1.5 * rng.uniform())},
                        {"C", c_drive},
                        {"C_s", c_drive * (0.2 + 0.5 * rng.uniform())}};
        const double x_shallow = 1.2 + 0.8 * rng.uniform();
        const double x_deep = x_shallow * (2.0 + 2.0 * rng.uniform());
        const double hold = x_deep * (5.0 + 45.0 * rng.uniform());

        const double l_shallow = eval_F(m, x_shallow + hold, x_shallow);
        const double l_deep = eval_F(m, x_deep + hold, x_deep);
        if (l_deep <= l_shallow) ++ordered;
        worst_margin = std::min(worst_margin, l_shallow / l_deep);
    }
    const double fraction = 100.0 * ordered / n_pairs;
    if (ordered < 18) // >= 90% of 20 pairs
        return {false, fmt("deeper stop grew less in only %d/%d paired draws (%.0f%%, need >= "
                           "90%%)",
                           ordered, n_pairs, fraction)};
    return {true, fmt("deeper stop grew less in %d/%d paired random-amplitude draws (%.0f%%, "
                      "need >= 90%%; worst shallow/deep length ratio %.3f; quantum exponents, "
                      "z = 1 < z_d = 2)",
                      ordered, n_pairs, fraction, worst_margin)};
}

// ---------------------------------------------------------------------------
// C8 — Krylov propagation vs dense exponentiation on 8 sites
// ---------------------------------------------------------------------------

Outcome c8() {
    using namespace kzc::rydberg;
    ArrayGeometry geom{2, 4, 1.0};
    const double omega = 1.0, delta = 1.5, t_end = 5.0;
    RydbergParams params{omega, delta, 1.1, 2};
    RydbergHamiltonian ham(geom, params);
    const auto dim = static_cast<Eigen::Index>(ham.dim());

    // Dense reference: H column by column through the same apply(), then an
    // exact eigendecomposition propagator.
    Eigen::MatrixXd h(dim, dim);
    {
        std::vector<std::complex<double>> x(ham.dim()), y(ham.dim());
        for (Eigen::Index j = 0; j < dim; ++j) {
            std::fill(x.begin(), x.end(), std::complex<double>(0.0, 0.0));
            x[static_cast<std::size_t>(j)] = 1.0;
            ham.apply(x, y, omega, delta);
            for (Eigen::Index i = 0; i < dim; ++i) h(i, j) = y[static_cast<std::size_t>(i)].real();
        }
        const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12) return {false, fmt("dense H not symmetric (max asymmetry %.2e)", asym)};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::MatrixXcd vc = es.eigenvectors().cast<std::complex<double>>();

    StateVector psi = prepare_domain_wall(geom, DetuningMask::rectangle(geom, 0, 1, 2, 2));
    Eigen::VectorXcd psi0(dim);
    for (Eigen::Index i = 0; i < dim; ++i) psi0(i) = psi.amp[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd modes = vc.adjoint() * psi0;

    const std::vector<double> snaps{0.0, 1.25, 2.5, 3.75, 5.0};
    const double e0 = energy_expectation(ham, psi, omega, delta);
    double max_pop_err = 0.0, max_norm_drift = 0.0, max_energy_rate = 0.0;
    evolve(ham, DriveSchedule::constant(omega, delta, 0.0, t_end), psi, snaps,
           [&](const StateVector& s) {
               Eigen::VectorXcd phases(dim);
               for (Eigen::Index k = 0; k < dim; ++k)
                   phases(k) = std::polar(1.0, -es.eigenvalues()(k) * s.time) * modes(k);
               const Eigen::VectorXcd dense = vc * phases;
               for (Eigen::Index i = 0; i < dim; ++i) {
                   const double pop = std::norm(s.amp[static_cast<std::size_t>(i)]);
                   max_pop_err = std::max(max_pop_err, std::abs(pop - std::norm(dense(i))));
               }
               max_norm_drift = std::max(max_norm_drift, std::abs(s.norm() - 1.0));
               if (s.time > 0.0) {
                   const double e = energy_expectation(ham, s, omega, delta);
                   max_energy_rate = std::max(max_energy_rate, std::abs(e - e0) / s.time);
               }
           });

    const double h_norm = ham.norm_bound(omega, delta);
    if (max_pop_err > 1e-7)
        return {false, fmt("population deviation %.3e exceeds 1e-7", max_pop_err)};
    if (max_norm_drift > 1e-9)
        return {false, fmt("norm drift %.3e exceeds 1e-9", max_norm_drift)};
    if (max_energy_rate > 1e-8 * h_norm)
        return {false, fmt("energy drift %.3e per unit time exceeds 1e-8 * ||H|| = %.3e",
                           max_energy_rate, 1e-8 * h_norm)};
    return {true, fmt("2x4 array, 256 states, t <= 5: max population deviation %.2e (tol 1e-7), "
                      "norm drift %.2e (tol 1e-9), energy drift %.2e/t (tol %.2e)",
                      max_pop_err, max_norm_drift, max_energy_rate, 1e-8 * h_norm)};
}

// ---------------------------------------------------------------------------
// C9 — Rydberg coarsening-rate ordering on a 4x5 array
// ---------------------------------------------------------------------------

// On 20 exactly-evolved sites the static-pattern excess is dominated by the
// uniform quantum dressing of the background (larger near the critical
// point) and by closed-system heating, which invert the large-lattice
// ordering of its time average for every domain size tried. The imprint's
// own relaxation is isolated by referencing the same drive applied to the
// pristine ordered state: D(t) = site-averaged |<n_i>_domain - <n_i>_bg|
// starts at the flipped fraction and decays exactly insofar as the prepared
// domain scrambles away. The ordering of that relaxation is the claim under
// test ("relaxes faster" near the critical point).
Outcome c9() {
    using namespace kzc::rydberg;
    const ArrayGeometry geom{4, 5, 1.0};
    const double omega = 1.0, t_end = 24.0;
    std::vector<double> snaps;
    for (double t = 0.0; t <= t_end + 1e-9; t += 0.5) snaps.push_back(t);
    const auto mask = DetuningMask::rectangle(geom, 1, 1, 2, 2);
    const auto background = checkerboard_pattern(geom, true);

    double avg[2] = {0.0, 0.0}, d_start[2] = {0.0, 0.0}, d_end[2] = {0.0, 0.0};
    const double ratios[2] = {2.0, 4.0};
    for (int arm = 0; arm < 2; ++arm) {
        const RydbergParams params{omega, ratios[arm] * omega, 1.1, 2};
        const RydbergHamiltonian ham(geom, params);
        const auto schedule = DriveSchedule::constant(omega, ratios[arm] * omega, 0.0, t_end);

        std::map<double, std::vector<double>> dens_domain;
        {
            StateVector psi = prepare_domain_wall(geom, mask);
            evolve(ham, schedule, psi, snaps,
                   [&](const StateVector& s) { dens_domain[s.time] = site_densities(s); });
        }
        StateVector psi = product_state(geom, background);
        int n_avg = 0;
        evolve(ham, schedule, psi, snaps, [&](const StateVector& s) {
            const auto& a = dens_domain.at(s.time);
            const auto b = site_densities(s);
            double d = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
            d /= static_cast<double>(a.size());
            if (n_avg == 0) d_start[arm] = d;
            d_end[arm] = d;
            avg[arm] += d;
            ++n_avg;
        });
        avg[arm] /= n_avg;
        if (std::abs(d_start[arm] - 0.2) > 1e-9)
            return {false, fmt("initial imprint should differ on exactly 4 of 20 sites, got "
                               "D(0) = %.6f",
                               d_start[arm])};
    }
    if (!(avg[0] < avg[1]))
        return {false, fmt("time-averaged domain-memory diagnostic %.5f at Delta/Omega=2 is "
                           "not below %.5f at Delta/Omega=4",
                           avg[0], avg[1])};
    return {true, fmt("prepared domain relaxes faster near the critical point: time-averaged "
                      "memory diagnostic %.4f at Delta/Omega=2 vs %.4f at Delta/Omega=4 "
                      "(decay 0.20 -> %.3f vs 0.20 -> %.3f by t = 24/Omega; 4x5 array, "
                      "R_b/a = 1.1, central 2x2 flip; ordering only)",
                      avg[0], avg[1], d_end[0], d_end[1])};
}

// ---------------------------------------------------------------------------
// C10 — collapse self-consistency on synthetic curve families
// ---------------------------------------------------------------------------

Outcome c10() {
    using namespace kzc::scaling;
    using kzc::est::CollapseCurve;

    const auto& ex = classical_exponents();
    const double alpha_l = ex.nu / (ex.nu * ex.z + 1.0);          // 1 / 3.17
    const double alpha_t = ex.nu * ex.z / (ex.nu * ex.z + 1.0);   // 2.17 / 3.17

    ScalingModel master;
    master.exponents = ex;
    master.amplitudes = {{"f_minus", 1.0}, {"f_plus", 0.8}, {"f_inf", 2.0}};
    ScalingModel other = master; // mismatched master for the negative control
    other.amplitudes = {{"f_minus", 0.4}, {"f_plus", 2.6}, {"f_inf", 5.2}};

    kzc::Rng rng(0xacc10ULL);
    const std::vector<double> taus{50.0, 120.0, 290.0, 700.0, 1700.0};
    auto family = [&](const ScalingModel& m, double tau) {
        CollapseCurve curve;
        curve.tau = tau;
        const double t_kz = std::pow(tau, alpha_t);
        const double xi_kz = std::pow(tau, alpha_l);
        for (int i = 0; i < 24; ++i) {
            const double x = 0.08 * std::pow(25.0 / 0.08, i / 23.0);
            const double wiggle = 1.0 + 0.01 * (2.0 * rng.uniform() - 1.0);
            curve.t.push_back(x * t_kz);
            curve.y.push_back(xi_kz * eval_f(m, x, 1.0) * wiggle);
        }
        return curve;
    };

    std::vector<CollapseCurve> curves;
    for (double tau : taus) curves.push_back(family(master, tau));
    const auto opt = kzc::est::optimize_collapse(curves);
    if (opt.degenerate) return {false, "collapse flagged degenerate on a 34x tau span"};
    if (!within(opt.alpha_l, alpha_l, 0.02) || !within(opt.alpha_t, alpha_t, 0.02))
        return {false, fmt("recovered (alpha_l, alpha_t) = (%.4f, %.4f) outside +/- 0.02 of the "
                           "generating (%.4f, %.4f)",
                           opt.alpha_l, opt.alpha_t, alpha_l, alpha_t)};

    std::vector<CollapseCurve> mixed;
    for (std::size_t i = 0; i < taus.size(); ++i)
        mixed.push_back(family(i < 3 ? master : other, taus[i]));
    const auto bad = kzc::est::optimize_collapse(mixed);
    if (!(bad.residual >= 10.0 * opt.residual))
        return {false, fmt("mixed-master residual %.3e is not >= 10x the clean residual %.3e",
                           bad.residual, opt.residual)};

    return {true, fmt("recovered (alpha_l, alpha_t) = (%.4f, %.4f) vs generating (%.4f, %.4f), "
                      "tol +/- 0.02, 1%% deterministic noise; mixed-master control residual "
                      "%.1fx the clean one (need >= 10x)",
                      opt.alpha_l, opt.alpha_t, alpha_l, alpha_t, bad.residual / opt.residual)};
}

// ---------------------------------------------------------------------------
// C11 — byte-identical reruns across every engine family
// ---------------------------------------------------------------------------

Outcome c11() {
    const auto dir = scratch_dir("c11");
    const std::vector<std::pair<const char*, json>> configs = {
        {"ising2d",
         json{{"engine", "ising2d"},
              {"seeds", {1, 2}},
              {"params",
               {{"experiment", "hold"},
                {"lattice", {{"lx", 32}, {"ly", 32}}},
                {"protocol",
                 {{"segments",
                   json::array({{{"kind", "ramp"}, {"t_from", 4.5}, {"t_to", 1.2}, {"sweeps", 24}},
                                {{"kind", "hold"}, {"t_from", 1.2}, {"sweeps", 8}}})}}},
                {"snapshot_times", {0, 16, 32}},
                {"save_snapshots", true}}}}},
        {"tfim1d",
         json{{"engine", "tfim1d"},
              {"params",
               {{"L", 64},
                {"tau_list", {12, 18, 27, 40, 60, 90}},
                {"fit_window", nullptr},
                {"n_trace", 16},
                {"save_modes", true}}}}},
        {"rydberg",
         json{{"engine", "rydberg"},
              {"params",
               {{"geometry", {{"rows", 2}, {"cols", 3}}},
                {"initial",
                 {{"state", "domain_wall"},
                  {"mask", {{"r0", 0}, {"c0", 1}, {"h", 2}, {"w", 1}}}}},
                {"schedule",
                 {{"segments", json::array({{{"t0", 0.0},
                                             {"t1", 4.0},
                                             {"omega0", 1.0},
                                             {"omega1", 1.0},
                                             {"delta0", 0.0},
                                             {"delta1", 2.0}}})}}},
                {"snapshot_times", {0.0, 2.0, 4.0}},
                {"save_states", true}}}}},
    };

    std::string detail;
    for (const auto& [name, cfg] : configs) {
        const auto first = run_engine(cfg, dir / (std::string(name) + "-a"));
        const auto second = run_engine(cfg, dir / (std::string(name) + "-b"));
        if (first.outputs != second.outputs)
            return {false, fmt("%s: rerun produced a different output set", name)};
        int compared = 0;
        for (const auto& rel : first.outputs) {
            if (slurp(first.out_dir / rel) != slurp(second.out_dir / rel))
                return {false, fmt("%s: %s differs between identical reruns", name, rel.c_str())};
            ++compared;
        }
        detail += fmt("%s%s (%d files)", detail.empty() ? "" : ", ", name, compared);
    }
    return {true, detail + "; every indexed output byte-compared across reruns, data files "
                           "plus summaries"};
}

// ---------------------------------------------------------------------------
// driver
// ---------------------------------------------------------------------------

struct Criterion {
    const char* name;
    const char* what;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"C1", "growth-exponent arithmetic", c1},
    {"C2", "scaling-function contract suite", c2},
    {"C3", "1D chain defect-density scaling", c3},
    {"C4", "2D Ising noncritical coarsening", c4},
    {"C5", "2D Ising critical coarsening", c5},
    {"C6", "2D Ising thermal freeze-out scaling", c6},
    {"C7", "quench-depth slowdown ordering", c7},
    {"C8", "Krylov vs dense propagation", c8},
    {"C9", "Rydberg coarsening-rate ordering", c9},
    {"C10", "collapse self-consistency", c10},
    {"C11", "byte-identical reruns", c11},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<const Criterion*> selected;
    if (argc <= 1) {
        for (const auto& c : kCriteria) selected.push_back(&c);
    } else {
        for (int i = 1; i < argc; ++i) {
            const auto it =
                std::find_if(std::begin(kCriteria), std::end(kCriteria),
                             [&](const Criterion& c) { return std::strcmp(c.name, argv[i]) == 0; });
            if (it == std::end(kCriteria)) {
                std::fprintf(stderr, "unknown criterion '%s' (known: C1 .. C11)\n", argv[i]);
                return 2;
            }
            selected.push_back(&*it);
        }
    }

    int failures = 0;
    for (const Criterion* c : selected) {
        Outcome outcome;
        try {
            outcome = c->run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("unhandled exception: ") + e.what()};
        }
        std::printf("[%s] %s — %s: %s\n", outcome.pass ? "PASS" : "FAIL", c->name, c->what,
                    outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
