#include "kzc/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <string_view>

#include "engine_params.hpp"
#include "kzc/common/csv.hpp"
#include "kzc/version.hpp"

namespace kzc::io {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string join_errors(const std::vector<std::string>& errors) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) {
        msg += "\n  - ";
        msg += e;
    }
    return msg;
}

/// Field-path-aware validation context. Getters record an error and return
/// nullopt instead of throwing, so one pass reports every problem at once.
/// JSON null is treated like an absent key everywhere.
class Val {
  public:
    std::vector<std::string> errors;

    bool ok() const { return errors.empty(); }

    void fail(const std::string& path, const std::string& msg) {
        errors.push_back(path + ": " + msg);
    }

    static const json* find(const json& obj, std::string_view key) {
        if (!obj.is_object()) return nullptr;
        const auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) return nullptr;
        return &*it;
    }

    /// Object check plus strict unknown-key sweep.
    bool object(const json& j, const std::string& path, std::initializer_list<std::string_view> keys,
                const std::string& note = "") {
        if (!j.is_object()) {
            fail(path, "must be an object");
            return false;
        }
        for (const auto& [key, value] : j.items())
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                fail(path + "." + key, "unknown key" + note);
        return true;
    }

    std::optional<double> num(const json& obj, const std::string& path, const char* key,
                              std::optional<double> def) {
        const json* p = find(obj, key);
        if (!p) {
            if (def) return def;
            fail(path + "." + key, "required number is missing");
            return std::nullopt;
        }
        if (!p->is_number()) {
            fail(path + "." + key, "must be a number");
            return std::nullopt;
        }
        const double value = p->get<double>();
        if (!std::isfinite(value)) {
            fail(path + "." + key, "must be finite");
            return std::nullopt;
        }
        return value;
    }

    std::optional<long long> integer(const json& obj, const std::string& path, const char* key,
                                     std::optional<long long> def) {
        const json* p = find(obj, key);
        if (!p) {
            if (def) return def;
            fail(path + "." + key, "required integer is missing");
            return std::nullopt;
        }
        if (p->is_number_integer() || p->is_number_unsigned()) return p->get<long long>();
        if (p->is_number_float()) {
            const double d = p->get<double>();
            if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15)
                return static_cast<long long>(d);
        }
        fail(path + "." + key, "must be an integer");
        return std::nullopt;
    }

    std::optional<bool> boolean(const json& obj, const std::string& path, const char* key,
                                std::optional<bool> def) {
        const json* p = find(obj, key);
        if (!p) {
            if (def) return def;
            fail(path + "." + key, "required boolean is missing");
            return std::nullopt;
        }
        if (!p->is_boolean()) {
            fail(path + "." + key, "must be a boolean");
            return std::nullopt;
        }
        return p->get<bool>();
    }

    std::optional<std::string> str(const json& obj, const std::string& path, const char* key,
                                   std::optional<std::string> def) {
        const json* p = find(obj, key);
        if (!p) {
            if (def) return def;
            fail(path + "." + key, "required string is missing");
            return std::nullopt;
        }
        if (!p->is_string()) {
            fail(path + "." + key, "must be a string");
            return std::nullopt;
        }
        return p->get<std::string>();
    }
};

bool has(const json& obj, const char* key) { return Val::find(obj, key) != nullptr; }

std::string resolve_path(const fs::path& base, const std::string& p) {
    fs::path path(p);
    if (path.is_relative() && !base.empty()) path = base / path;
    return fs::absolute(path).lexically_normal().generic_string();
}

/// Resolves a path-valued key, checks the file exists, stores the resolved
/// form in `out`.
void path_field(Val& v, const json& in, json& out, const std::string& path, const char* key,
                const fs::path& base, bool required) {
    const auto value = v.str(in, path, key, required ? std::nullopt : std::optional<std::string>(""));
    if (!value) {
        if (!required) out[key] = nullptr;
        return;
    }
    if (value->empty()) {
        out[key] = nullptr;
        return;
    }
    const std::string resolved = resolve_path(base, *value);
    if (!fs::exists(resolved)) {
        v.fail(path + "." + key, "file not found: " + resolved);
        return;
    }
    out[key] = resolved;
}

/// Normalizes an optional {t_min, t_max} power-law fit window.
void fit_window_field(Val& v, const json& in, json& out, const std::string& path) {
    const json* w = Val::find(in, "fit_window");
    if (!w) {
        out["fit_window"] = nullptr;
        return;
    }
    const std::string wpath = path + ".fit_window";
    if (!v.object(*w, wpath, {"t_min", "t_max"})) return;
    const auto t_min = v.num(*w, wpath, "t_min", std::nullopt);
    const auto t_max = v.num(*w, wpath, "t_max", std::nullopt);
    if (!t_min || !t_max) return;
    if (*t_min <= 0.0) v.fail(wpath + ".t_min", "must be positive");
    if (*t_max < 10.0 * *t_min)
        v.fail(wpath, "window must span at least one decade (t_max >= 10 t_min)");
    out["fit_window"] = json{{"t_min", *t_min}, {"t_max", *t_max}};
}

/// Normalizes a strictly ascending snapshot-time array; integral == true
/// additionally requires nonnegative integer values (sweep counts).
void snapshot_times_field(Val& v, const json& in, json& out, const std::string& path,
                          bool integral) {
    const json* times = Val::find(in, "snapshot_times");
    const std::string tpath = path + ".snapshot_times";
    if (!times) {
        v.fail(tpath, "required array is missing");
        return;
    }
    if (!times->is_array() || times->empty()) {
        v.fail(tpath, "must be a nonempty array of times");
        return;
    }
    json norm = json::array();
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < times->size(); ++i) {
        const std::string ipath = tpath + "[" + std::to_string(i) + "]";
        const json& el = (*times)[i];
        if (!el.is_number() || !std::isfinite(el.get<double>())) {
            v.fail(ipath, "must be a finite number");
            return;
        }
        const double t = el.get<double>();
        if (integral && (t < 0.0 || t != std::floor(t))) {
            v.fail(ipath, "must be a nonnegative integer sweep count");
            return;
        }
        if (t <= prev) {
            v.fail(ipath, "snapshot times must be strictly ascending");
            return;
        }
        prev = t;
        norm.push_back(t);
    }
    out["snapshot_times"] = std::move(norm);
}

// --------------------------------------------------------------------------
// scaling
// --------------------------------------------------------------------------

void normalize_micro(Val& v, const json& in, json& out, const std::string& path) {
    json micro{{"l0", 1.0}, {"t0", 1.0}};
    if (const json* m = Val::find(in, "micro")) {
        const std::string mpath = path + ".micro";
        if (v.object(*m, mpath, {"l0", "t0"})) {
            if (const auto l0 = v.num(*m, mpath, "l0", 1.0)) {
                if (*l0 <= 0.0) v.fail(mpath + ".l0", "must be positive");
                micro["l0"] = *l0;
            }
            if (const auto t0 = v.num(*m, mpath, "t0", 1.0)) {
                if (*t0 <= 0.0) v.fail(mpath + ".t0", "must be positive");
                micro["t0"] = *t0;
            }
        }
    }
    out["micro"] = std::move(micro);
}

void normalize_exponent_source(Val& v, const json& in, json& out, const std::string& path,
                               const fs::path& base) {
    const bool has_name = has(in, "universality");
    const bool has_inline = has(in, "exponents");
    if (has_name == has_inline) {
        v.fail(path, "exactly one of 'universality' or 'exponents' is required");
        return;
    }
    if (has_inline && has(in, "registry_file")) {
        v.fail(path + ".registry_file", "only used together with 'universality'");
        return;
    }
    out["universality"] = nullptr;
    out["exponents"] = nullptr;
    out["registry_file"] = nullptr;
    if (has_name) {
        if (const auto name = v.str(in, path, "universality", std::nullopt))
            out["universality"] = *name;
        if (has(in, "registry_file")) path_field(v, in, out, path, "registry_file", base, false);
        return;
    }
    const json& ex = in.at("exponents");
    const std::string epath = path + ".exponents";
    if (!v.object(ex, epath, {"nu", "z", "nu_bar", "z_bar", "z_d", "d"})) return;
    json norm = json::object();
    for (const char* key : {"nu", "z", "nu_bar", "z_bar", "z_d"}) {
        if (const auto value = v.num(ex, epath, key, std::nullopt)) {
            if (*value <= 0.0) v.fail(epath + "." + key, "must be positive");
            norm[key] = *value;
        }
    }
    if (const auto d = v.integer(ex, epath, "d", std::nullopt)) {
        if (*d < 1) v.fail(epath + ".d", "must be >= 1");
        norm["d"] = static_cast<int>(*d);
    }
    out["exponents"] = std::move(norm);
}

void normalize_ramp_protocol(Val& v, const json& in, json& out, const std::string& path) {
    const json* p = Val::find(in, "protocol");
    const std::string ppath = path + ".protocol";
    if (!p) {
        v.fail(ppath, "required object is missing");
        return;
    }
    if (!v.object(*p, ppath, {"tau", "p", "g_s", "t_hold"})) return;
    json norm{{"tau", 0.0}, {"p", 1.0}, {"g_s", nullptr}, {"t_hold", nullptr}};
    if (const auto tau = v.num(*p, ppath, "tau", std::nullopt)) {
        if (*tau <= 0.0) v.fail(ppath + ".tau", "must be positive");
        norm["tau"] = *tau;
    }
    if (const auto power = v.num(*p, ppath, "p", 1.0)) {
        if (*power < 1.0) v.fail(ppath + ".p", "must be >= 1");
        norm["p"] = *power;
    }
    if (has(*p, "g_s"))
        if (const auto g_s = v.num(*p, ppath, "g_s", std::nullopt)) norm["g_s"] = *g_s;
    if (has(*p, "t_hold")) {
        if (const auto t_hold = v.num(*p, ppath, "t_hold", std::nullopt)) {
            if (*t_hold < 0.0) v.fail(ppath + ".t_hold", "must be >= 0");
            if (!has(*p, "g_s")) v.fail(ppath + ".t_hold", "requires a stop value g_s");
            norm["t_hold"] = *t_hold;
        }
    }
    out["protocol"] = std::move(norm);
}

void normalize_model(Val& v, const json& in, json& out, const std::string& path) {
    json norm{{"amplitudes", json::object()}, {"x_c", nullptr}, {"y_c", nullptr}};
    if (const json* m = Val::find(in, "model")) {
        const std::string mpath = path + ".model";
        if (!v.object(*m, mpath, {"amplitudes", "x_c", "y_c"})) return;
        if (const json* amps = Val::find(*m, "amplitudes")) {
            const std::string apath = mpath + ".amplitudes";
            if (!amps->is_object()) {
                v.fail(apath, "must be an object of positive amplitudes");
            } else {
                for (const auto& [key, value] : amps->items()) {
                    if (!value.is_number() || !(value.get<double>() > 0.0) ||
                        !std::isfinite(value.get<double>())) {
                        v.fail(apath + "." + key, "must be a positive number");
                        continue;
                    }
                    norm["amplitudes"][key] = value.get<double>();
                }
            }
        }
        if (has(*m, "x_c")) {
            if (const auto x_c = v.num(*m, mpath, "x_c", std::nullopt)) {
                if (*x_c <= 0.0) v.fail(mpath + ".x_c", "must be positive");
                norm["x_c"] = *x_c;
            }
        }
        if (has(*m, "y_c")) {
            if (const auto y_c = v.num(*m, mpath, "y_c", std::nullopt)) {
                if (*y_c <= 0.0) v.fail(mpath + ".y_c", "must be positive");
                norm["y_c"] = *y_c;
            }
        }
    }
    out["model"] = std::move(norm);
}

json normalize_scaling(Val& v, const json& in, const fs::path& base) {
    json out = json::object();
    const std::string path = "params";
    const auto task = v.str(in, path, "task", std::nullopt);
    if (!task) return out;
    static const std::map<std::string, std::vector<std::string_view>> kAllowed = {
        {"exponent", {"task", "universality", "exponents", "registry_file", "micro", "p"}},
        {"scales", {"task", "universality", "exponents", "registry_file", "micro", "protocol"}},
        {"classify",
         {"task", "universality", "exponents", "registry_file", "micro", "protocol", "model",
          "stop_side"}},
        {"eval", {"task", "universality", "exponents", "registry_file", "micro", "model", "eval"}},
    };
    const auto allowed = kAllowed.find(*task);
    if (allowed == kAllowed.end()) {
        v.fail(path + ".task", "must be one of exponent, scales, classify, eval");
        return out;
    }
    out["task"] = *task;
    for (const auto& [key, value] : in.items())
        if (std::find(allowed->second.begin(), allowed->second.end(), key) ==
            allowed->second.end())
            v.fail(path + "." + key, "unknown key for task '" + *task + "'");

    normalize_exponent_source(v, in, out, path, base);
    normalize_micro(v, in, out, path);

    if (*task == "exponent") {
        if (const auto power = v.num(in, path, "p", 1.0)) {
            if (*power < 1.0) v.fail(path + ".p", "must be >= 1");
            out["p"] = *power;
        }
    }
    if (*task == "scales" || *task == "classify") normalize_ramp_protocol(v, in, out, path);
    if (*task == "classify" || *task == "eval") normalize_model(v, in, out, path);
    if (*task == "classify") {
        const auto side = v.str(in, path, "stop_side", std::string("ordered"));
        if (side) {
            if (*side != "ordered" && *side != "critical" && *side != "disordered")
                v.fail(path + ".stop_side", "must be one of ordered, critical, disordered");
            else
                out["stop_side"] = *side;
        }
    }
    if (*task == "eval") {
        const json* e = Val::find(in, "eval");
        const std::string epath = path + ".eval";
        if (!e) {
            v.fail(epath, "required object is missing");
            return out;
        }
        if (!v.object(*e, epath, {"function", "x_min", "x_max", "points", "x_s", "p"})) return out;
        json norm{{"function", ""},    {"x_min", 0.0}, {"x_max", 0.0},
                  {"points", 201},     {"x_s", nullptr}, {"p", 1.0}};
        const auto function = v.str(*e, epath, "function", std::nullopt);
        if (function) {
            if (*function != "f" && *function != "F" && *function != "h")
                v.fail(epath + ".function", "must be one of f, F, h");
            norm["function"] = *function;
        }
        const auto x_min = v.num(*e, epath, "x_min", std::nullopt);
        const auto x_max = v.num(*e, epath, "x_max", std::nullopt);
        if (x_min) norm["x_min"] = *x_min;
        if (x_max) norm["x_max"] = *x_max;
        if (x_min && x_max && !(*x_max > *x_min)) v.fail(epath + ".x_max", "must exceed x_min");
        if (const auto points = v.integer(*e, epath, "points", 201)) {
            if (*points < 2) v.fail(epath + ".points", "must be >= 2");
            norm["points"] = static_cast<int>(*points);
        }
        if (has(*e, "x_s")) {
            if (function && *function != "F")
                v.fail(epath + ".x_s", "only used by function 'F'");
            else if (const auto x_s = v.num(*e, epath, "x_s", std::nullopt))
                norm["x_s"] = *x_s;
        }
        if (has(*e, "p")) {
            if (function && *function != "f")
                v.fail(epath + ".p", "only used by function 'f' (F assumes a linear ramp)");
            else if (const auto power = v.num(*e, epath, "p", 1.0)) {
                if (*power < 1.0) v.fail(epath + ".p", "must be >= 1");
                norm["p"] = *power;
            }
        }
        out["eval"] = std::move(norm);
    }

    if (!v.ok()) return out;
    // Cross-field checks via the domain types' own invariants.
    try {
        const auto ex = detail::exponents_from_params(out);
        const auto micro = detail::micro_from_params(out);
        if (*task == "scales" || *task == "classify") {
            const auto protocol = detail::protocol_from_json(out.at("protocol"));
            if (protocol.tau < micro.t0)
                v.fail(path + ".protocol.tau",
                       "must be >= micro.t0 (the ramp must be slower than the microscopic time)");
        }
        if (*task == "classify" || *task == "eval") {
            const auto model = detail::model_from_json(out.at("model"), ex);
            if (*task == "eval") {
                const auto& e = out.at("eval");
                const std::string fn = e.at("function").get<std::string>();
                if (fn == "h" && !model.y_c)
                    v.fail(path + ".model.y_c", "required to evaluate h");
                if (fn == "F" && !e.at("x_s").is_null() && !model.x_c) {
                    const double x_s = e.at("x_s").get<double>();
                    if (std::abs(x_s) <= 1.0)
                        v.fail(path + ".model.x_c",
                               "required to evaluate F for a stop inside the freeze-out window");
                }
            }
        }
    } catch (const std::exception& e) {
        v.fail(path, e.what());
    }
    return out;
}

// --------------------------------------------------------------------------
// tfim1d
// --------------------------------------------------------------------------

json normalize_tfim(Val& v, const json& in) {
    json out = json::object();
    const std::string path = "params";
    v.object(in, path,
             {"L", "tau_list", "p", "g_start", "g_end", "rel_tol", "n_trace", "save_modes",
              "fit_window"});

    if (const auto L = v.integer(in, path, "L", 256)) {
        if (*L < 8 || *L % 2 != 0) v.fail(path + ".L", "must be an even integer >= 8");
        out["L"] = static_cast<int>(*L);
    }
    const json* taus = Val::find(in, "tau_list");
    if (!taus || !taus->is_array() || taus->empty()) {
        v.fail(path + ".tau_list", "must be a nonempty array of positive ramp scales");
    } else {
        json norm = json::array();
        for (std::size_t i = 0; i < taus->size(); ++i) {
            const json& el = (*taus)[i];
            if (!el.is_number() || !(el.get<double>() > 0.0) ||
                !std::isfinite(el.get<double>())) {
                v.fail(path + ".tau_list[" + std::to_string(i) + "]", "must be a positive number");
                continue;
            }
            norm.push_back(el.get<double>());
        }
        out["tau_list"] = std::move(norm);
    }
    if (const auto power = v.num(in, path, "p", 1.0)) {
        if (*power < 1.0) v.fail(path + ".p", "must be >= 1");
        out["p"] = *power;
    }
    if (const auto g_start = v.num(in, path, "g_start", -1.0)) {
        if (!(*g_start < 0.0)) v.fail(path + ".g_start", "must be negative (disordered side)");
        out["g_start"] = *g_start;
    }
    if (const auto g_end = v.num(in, path, "g_end", 1.0)) {
        if (!(*g_end > 0.0) || *g_end > 1.0) v.fail(path + ".g_end", "must be in (0, 1]");
        out["g_end"] = *g_end;
    }
    if (const auto rel_tol = v.num(in, path, "rel_tol", 1.0e-8)) {
        if (*rel_tol < 1.0e-12 || *rel_tol > 1.0e-4)
            v.fail(path + ".rel_tol", "must be in [1e-12, 1e-4]");
        out["rel_tol"] = *rel_tol;
    }
    if (const auto n_trace = v.integer(in, path, "n_trace", 0)) {
        if (*n_trace < 0) v.fail(path + ".n_trace", "must be >= 0");
        out["n_trace"] = static_cast<int>(*n_trace);
    }
    if (const auto save_modes = v.boolean(in, path, "save_modes", false))
        out["save_modes"] = *save_modes;
    fit_window_field(v, in, out, path);

    if (!v.ok()) return out;
    try {
        for (const auto& tau : out.at("tau_list")) {
            const auto spec = detail::chain_from_params(out, tau.get<double>());
            const double g_kz = std::pow(spec.tau, -spec.p / (spec.p + 1.0));
            if (std::abs(spec.g_start) < 2.0 * g_kz)
                v.fail(path + ".g_start",
                       "|g_start| < 2 tau^(-p/(p+1)) at tau = " + std::to_string(spec.tau) +
                           "; the ramp would start inside the freeze-out window");
        }
        if (!out.at("fit_window").is_null()) {
            const double t_min = out.at("fit_window").at("t_min").get<double>();
            const double t_max = out.at("fit_window").at("t_max").get<double>();
            int inside = 0;
            for (const auto& tau : out.at("tau_list"))
                if (tau.get<double>() >= t_min && tau.get<double>() <= t_max) ++inside;
            if (inside < 6)
                v.fail(path + ".fit_window",
                       "only " + std::to_string(inside) +
                           " tau values fall inside the window; the power-law fit needs >= 6");
        }
    } catch (const std::exception& e) {
        v.fail(path, e.what());
    }
    return out;
}

// --------------------------------------------------------------------------
// ising2d
// --------------------------------------------------------------------------

void normalize_lattice(Val& v, const json& in, json& out, const std::string& path) {
    json lattice{{"lx", 512}, {"ly", 512}};
    if (const json* l = Val::find(in, "lattice")) {
        const std::string lpath = path + ".lattice";
        if (v.object(*l, lpath, {"lx", "ly"})) {
            for (const char* key : {"lx", "ly"}) {
                if (const auto side = v.integer(*l, lpath, key, 512)) {
                    if (*side < 8) v.fail(lpath + "." + key, "must be >= 8");
                    lattice[key] = static_cast<int>(*side);
                }
            }
        }
    }
    out["lattice"] = std::move(lattice);
}

void normalize_thermal_protocol(Val& v, const json& in, json& out, const std::string& path) {
    const json* p = Val::find(in, "protocol");
    const std::string ppath = path + ".protocol";
    if (!p) {
        v.fail(ppath, "required object is missing");
        return;
    }
    if (!v.object(*p, ppath, {"segments"})) return;
    const json* segs = Val::find(*p, "segments");
    if (!segs || !segs->is_array() || segs->empty()) {
        v.fail(ppath + ".segments", "must be a nonempty array of schedule segments");
        return;
    }
    json norm = json::array();
    for (std::size_t i = 0; i < segs->size(); ++i) {
        const std::string spath = ppath + ".segments[" + std::to_string(i) + "]";
        const json& seg = (*segs)[i];
        const auto kind = v.str(seg, spath, "kind", std::nullopt);
        if (!kind) continue;
        if (*kind == "hold") {
            if (!v.object(seg, spath, {"kind", "t_from", "sweeps"})) continue;
            const auto t_from = v.num(seg, spath, "t_from", std::nullopt);
            const auto sweeps = v.integer(seg, spath, "sweeps", std::nullopt);
            if (!t_from || !sweeps) continue;
            if (*t_from < 0.0) v.fail(spath + ".t_from", "temperature must be >= 0");
            if (*sweeps < 1) v.fail(spath + ".sweeps", "must be >= 1");
            norm.push_back(json{{"kind", "hold"},
                                {"t_from", *t_from},
                                {"t_to", *t_from},
                                {"sweeps", *sweeps},
                                {"power", 1.0}});
        } else if (*kind == "ramp") {
            if (!v.object(seg, spath, {"kind", "t_from", "t_to", "sweeps", "power"})) continue;
            const auto t_from = v.num(seg, spath, "t_from", std::nullopt);
            const auto t_to = v.num(seg, spath, "t_to", std::nullopt);
            const auto sweeps = v.integer(seg, spath, "sweeps", std::nullopt);
            const auto power = v.num(seg, spath, "power", 1.0);
            if (!t_from || !t_to || !sweeps || !power) continue;
            if (*t_from < 0.0 || *t_to < 0.0)
                v.fail(spath, "temperatures must be >= 0");
            if (*sweeps < 1) v.fail(spath + ".sweeps", "must be >= 1");
            if (!(*power > 0.0)) v.fail(spath + ".power", "must be positive");
            norm.push_back(json{{"kind", "ramp"},
                                {"t_from", *t_from},
                                {"t_to", *t_to},
                                {"sweeps", *sweeps},
                                {"power", *power}});
        } else {
            v.fail(spath + ".kind", "must be 'ramp' or 'hold'");
        }
    }
    out["protocol"] = json{{"segments", std::move(norm)}};
}

json normalize_ising2d(Val& v, const json& in, const std::vector<std::uint64_t>& seeds) {
    json out = json::object();
    const std::string path = "params";
    const auto experiment = v.str(in, path, "experiment", std::nullopt);
    if (!experiment) return out;
    if (*experiment != "hold" && *experiment != "kz_ramp") {
        v.fail(path + ".experiment", "must be 'hold' or 'kz_ramp'");
        return out;
    }
    out["experiment"] = *experiment;

    if (*experiment == "kz_ramp") {
        v.object(in, path, {"experiment", "lattice", "ramp"},
                 " for experiment 'kz_ramp'");
        normalize_lattice(v, in, out, path);
        const json* ramp = Val::find(in, "ramp");
        const std::string rpath = path + ".ramp";
        if (!ramp) {
            v.fail(rpath, "required object is missing");
            return out;
        }
        if (!v.object(*ramp, rpath, {"tau_list", "t_high", "t_low", "equil_sweeps"})) return out;
        json norm = json::object();
        const json* taus = Val::find(*ramp, "tau_list");
        if (!taus || !taus->is_array() || taus->empty()) {
            v.fail(rpath + ".tau_list", "must be a nonempty array of positive sweep counts");
        } else {
            json list = json::array();
            for (std::size_t i = 0; i < taus->size(); ++i) {
                const json& el = (*taus)[i];
                if (!el.is_number() || !(el.get<double>() > 0.0) ||
                    el.get<double>() != std::floor(el.get<double>())) {
                    v.fail(rpath + ".tau_list[" + std::to_string(i) + "]",
                           "must be a positive integer sweep count");
                    continue;
                }
                list.push_back(el.get<double>());
            }
            norm["tau_list"] = std::move(list);
        }
        const auto t_high = v.num(*ramp, rpath, "t_high", 2.0 * ising2d::kTc);
        const auto t_low = v.num(*ramp, rpath, "t_low", ising2d::kTc);
        if (t_high) norm["t_high"] = *t_high;
        if (t_low) {
            if (*t_low < 0.0) v.fail(rpath + ".t_low", "must be >= 0");
            norm["t_low"] = *t_low;
        }
        if (t_high && t_low && !(*t_high > *t_low))
            v.fail(rpath, "t_high must exceed t_low");
        if (const auto equil = v.integer(*ramp, rpath, "equil_sweeps", 32)) {
            if (*equil < 1) v.fail(rpath + ".equil_sweeps", "must be >= 1");
            norm["equil_sweeps"] = *equil;
        }
        out["ramp"] = std::move(norm);
        if (v.ok()) {
            const int lx = out["lattice"]["lx"].get<int>();
            const int ly = out["lattice"]["ly"].get<int>();
            if (lx != ly) v.fail(path + ".lattice", "kz_ramp needs a square lattice");
        }
        return out;
    }

    // experiment == "hold"
    v.object(in, path,
             {"experiment", "lattice", "init", "protocol", "snapshot_times", "channel",
              "fit_window", "save_snapshots"},
             " for experiment 'hold'");
    normalize_lattice(v, in, out, path);

    json init{{"kind", "random"}, {"domain", nullptr}};
    if (const json* i = Val::find(in, "init")) {
        const std::string ipath = path + ".init";
        if (v.object(*i, ipath, {"kind", "domain"})) {
            const auto kind = v.str(*i, ipath, "kind", std::string("random"));
            if (kind) {
                if (*kind != "random" && *kind != "all_up" && *kind != "embedded_domain")
                    v.fail(ipath + ".kind",
                           "must be one of random, all_up, embedded_domain");
                else
                    init["kind"] = *kind;
            }
            const json* domain = Val::find(*i, "domain");
            if (kind && *kind == "embedded_domain") {
                const std::string dpath = ipath + ".domain";
                if (!domain) {
                    v.fail(dpath, "required for embedded_domain init");
                } else if (v.object(*domain, dpath, {"x", "y", "w", "h"})) {
                    json d = json::object();
                    for (const char* key : {"x", "y"}) {
                        if (const auto value = v.integer(*domain, dpath, key, std::nullopt)) {
                            if (*value < 0) v.fail(dpath + "." + key, "must be >= 0");
                            d[key] = static_cast<int>(*value);
                        }
                    }
                    for (const char* key : {"w", "h"}) {
                        if (const auto value = v.integer(*domain, dpath, key, std::nullopt)) {
                            if (*value < 1) v.fail(dpath + "." + key, "must be >= 1");
                            d[key] = static_cast<int>(*value);
                        }
                    }
                    init["domain"] = std::move(d);
                }
            } else if (domain) {
                v.fail(ipath + ".domain", "only used with embedded_domain init");
            }
        }
    }
    out["init"] = std::move(init);

    normalize_thermal_protocol(v, in, out, path);
    snapshot_times_field(v, in, out, path, /*integral=*/true);

    const auto channel = v.str(in, path, "channel", std::string("ferromagnetic"));
    if (channel) {
        if (*channel != "ferromagnetic" && *channel != "staggered")
            v.fail(path + ".channel", "must be 'ferromagnetic' or 'staggered'");
        else
            out["channel"] = *channel;
    }
    fit_window_field(v, in, out, path);
    if (const auto save = v.boolean(in, path, "save_snapshots", false))
        out["save_snapshots"] = *save;

    if (!v.ok()) return out;
    try {
        const auto ensemble = detail::ensemble_from_params(out, seeds);
        const auto protocol = detail::thermal_from_json(out.at("protocol"));
        const double total = static_cast<double>(protocol.total_sweeps());
        const auto& times = out.at("snapshot_times");
        if (times.back().get<double>() > total)
            v.fail(path + ".snapshot_times",
                   "last snapshot (" + format_double(times.back().get<double>()) +
                       ") is past the protocol end (" + format_double(total) + " sweeps)");
        if (out.at("channel").get<std::string>() == "staggered" &&
            (ensemble.lx % 2 != 0 || ensemble.ly % 2 != 0))
            v.fail(path + ".lattice", "staggered channel needs even lattice dimensions");
    } catch (const std::exception& e) {
        v.fail(path, e.what());
    }
    return out;
}

// --------------------------------------------------------------------------
// rydberg
// --------------------------------------------------------------------------

json normalize_rydberg(Val& v, const json& in) {
    json out = json::object();
    const std::string path = "params";
    v.object(in, path,
             {"geometry", "interaction", "schedule", "initial", "snapshot_times", "reference",
              "evolve", "save_states"});

    const json* g = Val::find(in, "geometry");
    const std::string gpath = path + ".geometry";
    if (!g) {
        v.fail(gpath, "required object is missing");
        return out;
    }
    if (v.object(*g, gpath, {"rows", "cols", "spacing"})) {
        json geometry{{"rows", 0}, {"cols", 0}, {"spacing", 1.0}};
        const auto rows = v.integer(*g, gpath, "rows", std::nullopt);
        const auto cols = v.integer(*g, gpath, "cols", std::nullopt);
        if (rows) {
            if (*rows < 1) v.fail(gpath + ".rows", "must be >= 1");
            geometry["rows"] = static_cast<int>(*rows);
        }
        if (cols) {
            if (*cols < 1) v.fail(gpath + ".cols", "must be >= 1");
            geometry["cols"] = static_cast<int>(*cols);
        }
        if (rows && cols && *rows >= 1 && *cols >= 1 && *rows * *cols > 24)
            v.fail(gpath, std::to_string(*rows) + " x " + std::to_string(*cols) + " = " +
                              std::to_string(*rows * *cols) +
                              " sites exceeds the 24-site exact-evolution cap");
        if (const auto spacing = v.num(*g, gpath, "spacing", 1.0)) {
            if (!(*spacing > 0.0)) v.fail(gpath + ".spacing", "must be positive");
            geometry["spacing"] = *spacing;
        }
        out["geometry"] = std::move(geometry);
    }

    json interaction{{"omega", 1.0}, {"rb_over_a", 1.1}, {"shells", 2}};
    if (const json* i = Val::find(in, "interaction")) {
        const std::string ipath = path + ".interaction";
        if (v.object(*i, ipath, {"omega", "rb_over_a", "shells"})) {
            if (const auto omega = v.num(*i, ipath, "omega", 1.0)) {
                if (!(*omega > 0.0)) v.fail(ipath + ".omega", "must be positive");
                interaction["omega"] = *omega;
            }
            if (const auto rb = v.num(*i, ipath, "rb_over_a", 1.1)) {
                if (!(*rb > 0.0)) v.fail(ipath + ".rb_over_a", "must be positive");
                interaction["rb_over_a"] = *rb;
            }
            if (const auto shells = v.integer(*i, ipath, "shells", 2)) {
                if (*shells < 0) v.fail(ipath + ".shells", "must be >= 0 (0 keeps all pairs)");
                interaction["shells"] = static_cast<int>(*shells);
            }
        }
    }
    out["interaction"] = std::move(interaction);

    const json* sched = Val::find(in, "schedule");
    const std::string spath = path + ".schedule";
    if (!sched) {
        v.fail(spath, "required object is missing");
    } else if (v.object(*sched, spath, {"segments"})) {
        const json* segs = Val::find(*sched, "segments");
        if (!segs || !segs->is_array() || segs->empty()) {
            v.fail(spath + ".segments", "must be a nonempty array of drive segments");
        } else {
            json norm = json::array();
            for (std::size_t i = 0; i < segs->size(); ++i) {
                const std::string segpath = spath + ".segments[" + std::to_string(i) + "]";
                const json& seg = (*segs)[i];
                if (!v.object(seg, segpath, {"t0", "t1", "omega0", "omega1", "delta0", "delta1"}))
                    continue;
                json s = json::object();
                bool complete = true;
                for (const char* key : {"t0", "t1", "omega0", "omega1", "delta0", "delta1"}) {
                    if (const auto value = v.num(seg, segpath, key, std::nullopt))
                        s[key] = *value;
                    else
                        complete = false;
                }
                if (!complete) continue;
                if (s["omega0"].get<double>() < 0.0 || s["omega1"].get<double>() < 0.0)
                    v.fail(segpath, "omega must be >= 0");
                norm.push_back(std::move(s));
            }
            out["schedule"] = json{{"segments", std::move(norm)}};
        }
    }

    json initial{{"state", "checkerboard"},
                 {"even_occupied", true},
                 {"mask", nullptr},
                 {"occupations", nullptr}};
    if (const json* i = Val::find(in, "initial")) {
        const std::string ipath = path + ".initial";
        const auto state = v.str(*i, ipath, "state", std::string("checkerboard"));
        if (state) {
            if (*state == "checkerboard") {
                if (v.object(*i, ipath, {"state", "even_occupied"}, " for state 'checkerboard'"))
                    if (const auto even = v.boolean(*i, ipath, "even_occupied", true))
                        initial["even_occupied"] = *even;
            } else if (*state == "vacuum") {
                v.object(*i, ipath, {"state"}, " for state 'vacuum'");
            } else if (*state == "domain_wall") {
                if (v.object(*i, ipath, {"state", "mask"}, " for state 'domain_wall'")) {
                    const json* mask = Val::find(*i, "mask");
                    const std::string mpath = ipath + ".mask";
                    if (!mask) {
                        v.fail(mpath, "required for domain_wall init");
                    } else if (v.object(*mask, mpath, {"r0", "c0", "h", "w"})) {
                        json m = json::object();
                        for (const char* key : {"r0", "c0"}) {
                            if (const auto value = v.integer(*mask, mpath, key, std::nullopt)) {
                                if (*value < 0) v.fail(mpath + "." + key, "must be >= 0");
                                m[key] = static_cast<int>(*value);
                            }
                        }
                        for (const char* key : {"h", "w"}) {
                            if (const auto value = v.integer(*mask, mpath, key, std::nullopt)) {
                                if (*value < 1) v.fail(mpath + "." + key, "must be >= 1");
                                m[key] = static_cast<int>(*value);
                            }
                        }
                        initial["mask"] = std::move(m);
                    }
                }
            } else if (*state == "product") {
                if (v.object(*i, ipath, {"state", "occupations"}, " for state 'product'")) {
                    const json* occ = Val::find(*i, "occupations");
                    if (!occ || !occ->is_array()) {
                        v.fail(ipath + ".occupations", "required array of 0/1 site occupations");
                    } else {
                        json list = json::array();
                        for (std::size_t k = 0; k < occ->size(); ++k) {
                            const json& el = (*occ)[k];
                            const bool valid = el.is_number_integer() ||
                                               el.is_number_unsigned();
                            const long long value = valid ? el.get<long long>() : -1;
                            if (value != 0 && value != 1) {
                                v.fail(ipath + ".occupations[" + std::to_string(k) + "]",
                                       "must be 0 or 1");
                                continue;
                            }
                            list.push_back(static_cast<int>(value));
                        }
                        initial["occupations"] = std::move(list);
                    }
                }
            } else {
                v.fail(ipath + ".state",
                       "must be one of checkerboard, vacuum, domain_wall, product");
            }
            initial["state"] = *state;
        }
    }
    out["initial"] = std::move(initial);

    snapshot_times_field(v, in, out, path, /*integral=*/false);

    if (const json* ref = Val::find(in, "reference")) {
        if (ref->is_array()) {
            json list = json::array();
            for (std::size_t k = 0; k < ref->size(); ++k) {
                const json& el = (*ref)[k];
                const bool valid = el.is_number_integer() || el.is_number_unsigned();
                const long long value = valid ? el.get<long long>() : -1;
                if (value != 0 && value != 1) {
                    v.fail(path + ".reference[" + std::to_string(k) + "]", "must be 0 or 1");
                    continue;
                }
                list.push_back(static_cast<int>(value));
            }
            out["reference"] = std::move(list);
        } else if (ref->is_string()) {
            const std::string name = ref->get<std::string>();
            if (name != "checkerboard" && name != "checkerboard-odd" && name != "initial")
                v.fail(path + ".reference",
                       "must be checkerboard, checkerboard-odd, initial, or a 0/1 array");
            out["reference"] = name;
        } else {
            v.fail(path + ".reference", "must be a string or a 0/1 array");
        }
    } else {
        out["reference"] = "checkerboard";
    }

    json evolve{{"dt_max", 0.1}, {"tol", 1.0e-9}, {"krylov_dim", 20}};
    if (const json* e = Val::find(in, "evolve")) {
        const std::string epath = path + ".evolve";
        if (v.object(*e, epath, {"dt_max", "tol", "krylov_dim"})) {
            if (const auto dt_max = v.num(*e, epath, "dt_max", 0.1)) {
                if (!(*dt_max > 0.0)) v.fail(epath + ".dt_max", "must be positive");
                evolve["dt_max"] = *dt_max;
            }
            if (const auto tol = v.num(*e, epath, "tol", 1.0e-9)) {
                if (!(*tol > 0.0)) v.fail(epath + ".tol", "must be positive");
                evolve["tol"] = *tol;
            }
            if (const auto dim = v.integer(*e, epath, "krylov_dim", 20)) {
                if (*dim < 2) v.fail(epath + ".krylov_dim", "must be >= 2");
                evolve["krylov_dim"] = static_cast<int>(*dim);
            }
        }
    }
    out["evolve"] = std::move(evolve);
    if (const auto save = v.boolean(in, path, "save_states", false)) out["save_states"] = *save;

    if (!v.ok()) return out;
    try {
        const auto geometry = detail::geometry_from_json(out.at("geometry"));
        detail::interaction_from_json(out.at("interaction"));
        const auto schedule = detail::schedule_from_json(out.at("schedule"));
        const auto pattern = detail::initial_pattern_from_json(out.at("initial"), geometry);
        detail::reference_pattern_from_json(out.at("reference"), out.at("initial"), geometry);
        const auto& times = out.at("snapshot_times");
        if (times.front().get<double>() < schedule.t_begin() ||
            times.back().get<double>() > schedule.t_end())
            v.fail(path + ".snapshot_times",
                   "snapshots must lie inside the schedule span [" +
                       format_double(schedule.t_begin()) + ", " +
                       format_double(schedule.t_end()) + "]");
        (void)pattern;
    } catch (const std::exception& e) {
        v.fail(path, e.what());
    }
    return out;
}

// --------------------------------------------------------------------------
// estimate
// --------------------------------------------------------------------------

json normalize_estimate(Val& v, const json& in, const fs::path& base) {
    json out = json::object();
    const std::string path = "params";
    v.object(in, path, {"snapshots", "channel", "fit_window"});

    const json* snaps = Val::find(in, "snapshots");
    if (!snaps || !snaps->is_array() || snaps->empty()) {
        v.fail(path + ".snapshots", "must be a nonempty array of snapshot file paths");
    } else {
        json list = json::array();
        for (std::size_t i = 0; i < snaps->size(); ++i) {
            const std::string ipath = path + ".snapshots[" + std::to_string(i) + "]";
            const json& el = (*snaps)[i];
            if (!el.is_string()) {
                v.fail(ipath, "must be a file path");
                continue;
            }
            const std::string resolved = resolve_path(base, el.get<std::string>());
            if (!fs::exists(resolved)) {
                v.fail(ipath, "file not found: " + resolved);
                continue;
            }
            list.push_back(resolved);
        }
        out["snapshots"] = std::move(list);
    }
    const auto channel = v.str(in, path, "channel", std::string("ferromagnetic"));
    if (channel) {
        if (*channel != "ferromagnetic" && *channel != "staggered")
            v.fail(path + ".channel", "must be 'ferromagnetic' or 'staggered'");
        else
            out["channel"] = *channel;
    }
    fit_window_field(v, in, out, path);
    return out;
}

// --------------------------------------------------------------------------
// collapse
// --------------------------------------------------------------------------

json normalize_collapse(Val& v, const json& in, const fs::path& base) {
    json out = json::object();
    const std::string path = "params";
    v.object(in, path, {"input", "options"});
    path_field(v, in, out, path, "input", base, /*required=*/true);

    json options{{"alpha_min", 0.0}, {"alpha_max", 1.2}, {"grid_step", 0.05},
                 {"refine_tol", 1.0e-4}};
    if (const json* o = Val::find(in, "options")) {
        const std::string opath = path + ".options";
        if (v.object(*o, opath, {"alpha_min", "alpha_max", "grid_step", "refine_tol"})) {
            const auto alpha_min = v.num(*o, opath, "alpha_min", 0.0);
            const auto alpha_max = v.num(*o, opath, "alpha_max", 1.2);
            if (alpha_min) options["alpha_min"] = *alpha_min;
            if (alpha_max) options["alpha_max"] = *alpha_max;
            if (alpha_min && alpha_max && !(*alpha_max > *alpha_min))
                v.fail(opath, "alpha_max must exceed alpha_min");
            if (const auto step = v.num(*o, opath, "grid_step", 0.05)) {
                if (!(*step > 0.0)) v.fail(opath + ".grid_step", "must be positive");
                options["grid_step"] = *step;
            }
            if (const auto tol = v.num(*o, opath, "refine_tol", 1.0e-4)) {
                if (!(*tol > 0.0)) v.fail(opath + ".refine_tol", "must be positive");
                options["refine_tol"] = *tol;
            }
        }
    }
    out["options"] = std::move(options);
    return out;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

std::filesystem::path default_out_root() {
    if (const char* root = std::getenv("KZC_OUT_ROOT"); root != nullptr && root[0] != '\0')
        return std::filesystem::path(root);
    return std::filesystem::path("kzc-runs");
}

std::string RunConfig::canonical() const {
    const json j{{"schema_version", schema_version},
                 {"engine", engine},
                 {"seeds", seeds},
                 {"params", params}};
    return j.dump(2) + "\n";
}

RunConfig validate_config_json(const nlohmann::json& j, const ConfigOverrides& overrides,
                               const std::filesystem::path& base_dir) {
    Val v;
    if (!j.is_object()) throw ConfigError({"config: must be a JSON object"});
    v.object(j, "config", {"schema_version", "engine", "seeds", "threads", "out_dir", "params"});

    RunConfig config;
    if (const auto schema = v.integer(j, "config", "schema_version", 1)) {
        if (*schema != kSchemaVersion)
            v.fail("config.schema_version",
                   "unsupported version " + std::to_string(*schema) + " (this toolkit reads " +
                       std::to_string(kSchemaVersion) + ")");
        config.schema_version = static_cast<int>(*schema);
    }

    static const std::set<std::string> kEngines = {"scaling",  "tfim1d",   "ising2d",
                                                   "rydberg",  "estimate", "collapse"};
    const auto engine = v.str(j, "config", "engine", std::nullopt);
    if (engine) {
        if (!kEngines.count(*engine))
            v.fail("config.engine",
                   "must be one of scaling, tfim1d, ising2d, rydberg, estimate, collapse");
        else
            config.engine = *engine;
    }

    config.seeds = {1};
    if (const json* seeds = Val::find(j, "seeds")) {
        if (!seeds->is_array() || seeds->empty()) {
            v.fail("config.seeds", "must be a nonempty array of nonnegative integers");
        } else {
            config.seeds.clear();
            std::set<std::uint64_t> seen;
            for (std::size_t i = 0; i < seeds->size(); ++i) {
                const json& el = (*seeds)[i];
                const std::string ipath = "config.seeds[" + std::to_string(i) + "]";
                if (el.is_number_unsigned()) {
                    // fine
                } else if (el.is_number_integer()) {
                    if (el.get<long long>() < 0) {
                        v.fail(ipath, "must be >= 0");
                        continue;
                    }
                } else {
                    v.fail(ipath, "must be an integer");
                    continue;
                }
                const std::uint64_t seed = el.get<std::uint64_t>();
                if (!seen.insert(seed).second) {
                    v.fail(ipath, "duplicate seed " + std::to_string(seed) +
                                      " (replicas must differ)");
                    continue;
                }
                config.seeds.push_back(seed);
            }
        }
    }
    if (overrides.seed) config.seeds = {*overrides.seed};

    if (const auto threads = v.integer(j, "config", "threads", 1)) {
        if (*threads < 1) v.fail("config.threads", "must be >= 1");
        config.threads = static_cast<int>(*threads);
    }
    if (overrides.threads) {
        if (*overrides.threads < 1) v.fail("config.threads", "--threads must be >= 1");
        config.threads = *overrides.threads;
    }

    const json* params = Val::find(j, "params");
    if (!params) {
        v.fail("config.params", "required object is missing");
    } else if (!params->is_object()) {
        v.fail("config.params", "must be an object");
    } else if (engine && kEngines.count(*engine)) {
        if (*engine == "scaling")
            config.params = normalize_scaling(v, *params, base_dir);
        else if (*engine == "tfim1d")
            config.params = normalize_tfim(v, *params);
        else if (*engine == "ising2d")
            config.params = normalize_ising2d(v, *params, config.seeds);
        else if (*engine == "rydberg")
            config.params = normalize_rydberg(v, *params);
        else if (*engine == "estimate")
            config.params = normalize_estimate(v, *params, base_dir);
        else
            config.params = normalize_collapse(v, *params, base_dir);
    }

    std::optional<std::string> out_field;
    if (has(j, "out_dir")) out_field = v.str(j, "config", "out_dir", std::nullopt);

    if (!v.ok()) throw ConfigError(std::move(v.errors));

    if (overrides.out_dir) {
        config.out_dir = *overrides.out_dir;
    } else if (out_field) {
        const std::filesystem::path p(*out_field);
        config.out_dir = p.is_absolute() ? p : default_out_root() / p;
    } else {
        config.out_dir = default_out_root() / config.engine;
    }
    return config;
}

RunConfig validate_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"config: cannot open " + path.string()});
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({"config: " + std::string(e.what())});
    }
    return validate_config_json(j, overrides, path.parent_path());
}

} // namespace kzc::io
