#include "engine_params.hpp"

#include <stdexcept>

namespace kzc::io::detail {

namespace {

std::optional<double> opt_number(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

} // namespace

scaling::CriticalExponents exponents_from_params(const json& params) {
    const auto& inline_ex = params.at("exponents");
    if (!inline_ex.is_null()) {
        scaling::CriticalExponents ex;
        ex.nu = inline_ex.at("nu").get<double>();
        ex.z = inline_ex.at("z").get<double>();
        ex.nu_bar = inline_ex.at("nu_bar").get<double>();
        ex.z_bar = inline_ex.at("z_bar").get<double>();
        ex.z_d = inline_ex.at("z_d").get<double>();
        ex.d = inline_ex.at("d").get<int>();
        ex.validate();
        return ex;
    }
    const std::string name = params.at("universality").get<std::string>();
    const auto& reg = params.at("registry_file");
    if (!reg.is_null()) {
        const std::filesystem::path file = reg.get<std::string>();
        return scaling::exponents_by_name(name, &file);
    }
    return scaling::exponents_by_name(name);
}

scaling::MicroScales micro_from_params(const json& params) {
    scaling::MicroScales micro;
    micro.l0 = params.at("micro").at("l0").get<double>();
    micro.t0 = params.at("micro").at("t0").get<double>();
    micro.validate();
    return micro;
}

scaling::RampProtocol protocol_from_json(const json& j) {
    scaling::RampProtocol protocol;
    protocol.tau = j.at("tau").get<double>();
    protocol.p = j.at("p").get<double>();
    protocol.g_s = opt_number(j, "g_s");
    protocol.t_hold = opt_number(j, "t_hold");
    protocol.validate();
    return protocol;
}

scaling::ScalingModel model_from_json(const json& j, const scaling::CriticalExponents& ex) {
    scaling::ScalingModel model;
    model.exponents = ex;
    for (const auto& [key, value] : j.at("amplitudes").items())
        model.amplitudes[key] = value.get<double>();
    model.x_c = opt_number(j, "x_c");
    model.y_c = opt_number(j, "y_c");
    model.validate();
    return model;
}

tfim::ChainSpec chain_from_params(const json& params, double tau) {
    tfim::ChainSpec spec;
    spec.L = params.at("L").get<int>();
    spec.tau = tau;
    spec.p = params.at("p").get<double>();
    spec.g_start = params.at("g_start").get<double>();
    spec.g_end = params.at("g_end").get<double>();
    spec.rel_tol = params.at("rel_tol").get<double>();
    spec.validate();
    return spec;
}

ising2d::EnsembleSpec ensemble_from_params(const json& params,
                                           const std::vector<std::uint64_t>& seeds) {
    ising2d::EnsembleSpec ensemble;
    ensemble.lx = params.at("lattice").at("lx").get<int>();
    ensemble.ly = params.at("lattice").at("ly").get<int>();
    const auto& init = params.at("init");
    const std::string kind = init.at("kind").get<std::string>();
    if (kind == "random") {
        ensemble.init = ising2d::EnsembleSpec::Init::random;
    } else if (kind == "all_up") {
        ensemble.init = ising2d::EnsembleSpec::Init::all_up;
    } else if (kind == "embedded_domain") {
        ensemble.init = ising2d::EnsembleSpec::Init::embedded_domain;
        const auto& domain = init.at("domain");
        ensemble.domain_x = domain.at("x").get<int>();
        ensemble.domain_y = domain.at("y").get<int>();
        ensemble.domain_w = domain.at("w").get<int>();
        ensemble.domain_h = domain.at("h").get<int>();
    } else {
        throw std::invalid_argument("init.kind: unknown kind '" + kind + "'");
    }
    ensemble.seeds = seeds;
    ensemble.validate();
    return ensemble;
}

ising2d::ThermalProtocol thermal_from_json(const json& j) {
    ising2d::ThermalProtocol protocol;
    for (const auto& seg : j.at("segments")) {
        ising2d::ThermalSegment segment;
        const std::string kind = seg.at("kind").get<std::string>();
        segment.kind = kind == "ramp" ? ising2d::ThermalSegment::Kind::ramp
                                      : ising2d::ThermalSegment::Kind::hold;
        segment.t_from = seg.at("t_from").get<double>();
        segment.t_to = seg.at("t_to").get<double>();
        segment.sweeps = seg.at("sweeps").get<long>();
        segment.power = seg.at("power").get<double>();
        protocol.segments.push_back(segment);
    }
    protocol.validate();
    return protocol;
}

ising2d::KzRampSpec kz_ramp_from_params(const json& params,
                                        const std::vector<std::uint64_t>& seeds) {
    ising2d::KzRampSpec spec;
    spec.lx = params.at("lattice").at("lx").get<int>();
    spec.ly = params.at("lattice").at("ly").get<int>();
    const auto& ramp = params.at("ramp");
    spec.tau_list = ramp.at("tau_list").get<std::vector<double>>();
    spec.t_high = ramp.at("t_high").get<double>();
    spec.t_low = ramp.at("t_low").get<double>();
    spec.equil_sweeps = ramp.at("equil_sweeps").get<long>();
    spec.seeds = seeds;
    return spec;
}

rydberg::ArrayGeometry geometry_from_json(const json& j) {
    rydberg::ArrayGeometry geometry;
    geometry.rows = j.at("rows").get<int>();
    geometry.cols = j.at("cols").get<int>();
    geometry.spacing = j.at("spacing").get<double>();
    geometry.validate();
    return geometry;
}

rydberg::RydbergParams interaction_from_json(const json& j) {
    rydberg::RydbergParams params;
    params.omega = j.at("omega").get<double>();
    params.rb_over_a = j.at("rb_over_a").get<double>();
    params.shells = j.at("shells").get<int>();
    params.validate();
    return params;
}

rydberg::DriveSchedule schedule_from_json(const json& j) {
    rydberg::DriveSchedule schedule;
    for (const auto& seg : j.at("segments")) {
        rydberg::ScheduleSegment segment;
        segment.t0 = seg.at("t0").get<double>();
        segment.t1 = seg.at("t1").get<double>();
        segment.omega0 = seg.at("omega0").get<double>();
        segment.omega1 = seg.at("omega1").get<double>();
        segment.delta0 = seg.at("delta0").get<double>();
        segment.delta1 = seg.at("delta1").get<double>();
        schedule.segments.push_back(segment);
    }
    schedule.validate();
    return schedule;
}

rydberg::EvolveOptions evolve_options_from_json(const json& j, int threads) {
    rydberg::EvolveOptions options;
    options.dt_max = j.at("dt_max").get<double>();
    options.tol = j.at("tol").get<double>();
    options.krylov_dim = j.at("krylov_dim").get<int>();
    options.threads = threads;
    return options;
}

std::vector<std::uint8_t> initial_pattern_from_json(const json& initial,
                                                    const rydberg::ArrayGeometry& geometry) {
    const std::string state = initial.at("state").get<std::string>();
    if (state == "vacuum")
        return std::vector<std::uint8_t>(static_cast<std::size_t>(geometry.n_sites()), 0);
    if (state == "checkerboard")
        return rydberg::checkerboard_pattern(geometry, initial.at("even_occupied").get<bool>());
    if (state == "product") {
        auto occ = initial.at("occupations").get<std::vector<std::uint8_t>>();
        if (occ.size() != static_cast<std::size_t>(geometry.n_sites()))
            throw std::invalid_argument("initial.occupations: size does not match the geometry");
        return occ;
    }
    if (state == "domain_wall") {
        const auto& m = initial.at("mask");
        const auto mask = rydberg::DetuningMask::rectangle(geometry, m.at("r0").get<int>(),
                                                           m.at("c0").get<int>(), m.at("h").get<int>(),
                                                           m.at("w").get<int>());
        auto occ = rydberg::checkerboard_pattern(geometry, true);
        for (std::size_t i = 0; i < occ.size(); ++i)
            if (mask.flip[i] != 0) occ[i] = occ[i] != 0 ? 0 : 1;
        return occ;
    }
    throw std::invalid_argument("initial.state: unknown state '" + state + "'");
}

std::vector<std::uint8_t> reference_pattern_from_json(const json& reference, const json& initial,
                                                      const rydberg::ArrayGeometry& geometry) {
    if (reference.is_array()) {
        auto pattern = reference.get<std::vector<std::uint8_t>>();
        if (pattern.size() != static_cast<std::size_t>(geometry.n_sites()))
            throw std::invalid_argument("reference: pattern size does not match the geometry");
        return pattern;
    }
    const std::string name = reference.get<std::string>();
    if (name == "checkerboard") return rydberg::checkerboard_pattern(geometry, true);
    if (name == "checkerboard-odd") return rydberg::checkerboard_pattern(geometry, false);
    if (name == "initial") return initial_pattern_from_json(initial, geometry);
    throw std::invalid_argument("reference: unknown reference '" + name + "'");
}

est::CollapseOptions collapse_options_from_json(const json& j) {
    est::CollapseOptions options;
    options.alpha_min = j.at("alpha_min").get<double>();
    options.alpha_max = j.at("alpha_max").get<double>();
    options.grid_step = j.at("grid_step").get<double>();
    options.refine_tol = j.at("refine_tol").get<double>();
    return options;
}

est::Channel channel_from_string(const std::string& s) {
    if (s == "ferromagnetic") return est::Channel::ferromagnetic;
    if (s == "staggered") return est::Channel::staggered;
    throw std::invalid_argument("channel: unknown channel '" + s + "'");
}

} // namespace kzc::io::detail
