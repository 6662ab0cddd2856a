#pragma once

// Converters from *normalized* engine parameter blocks (every default
// materialized by validate_config) to the domain structs they describe.
// Shared between config validation — which constructs the structs once so
// their own validate() invariants run with field-path error prefixes — and
// run(), which constructs them again to execute. Not installed.

#include <nlohmann/json.hpp>

#include "kzc/est/collapse.hpp"
#include "kzc/ising2d/experiments.hpp"
#include "kzc/rydberg/evolve.hpp"
#include "kzc/scaling/model.hpp"
#include "kzc/scaling/protocol.hpp"
#include "kzc/tfim/chain.hpp"

namespace kzc::io::detail {

using nlohmann::json;

scaling::CriticalExponents exponents_from_params(const json& params);
scaling::MicroScales micro_from_params(const json& params);
scaling::RampProtocol protocol_from_json(const json& j);
scaling::ScalingModel model_from_json(const json& j, const scaling::CriticalExponents& ex);

tfim::ChainSpec chain_from_params(const json& params, double tau);

ising2d::EnsembleSpec ensemble_from_params(const json& params,
                                           const std::vector<std::uint64_t>& seeds);
ising2d::ThermalProtocol thermal_from_json(const json& j);
ising2d::KzRampSpec kz_ramp_from_params(const json& params,
                                        const std::vector<std::uint64_t>& seeds);

rydberg::ArrayGeometry geometry_from_json(const json& j);
rydberg::RydbergParams interaction_from_json(const json& j);
rydberg::DriveSchedule schedule_from_json(const json& j);
rydberg::EvolveOptions evolve_options_from_json(const json& j, int threads);
/// Initial-state occupation pattern described by the normalized block.
std::vector<std::uint8_t> initial_pattern_from_json(const json& initial,
                                                    const rydberg::ArrayGeometry& geometry);
/// Reference pattern for the excess-density diagnostic.
std::vector<std::uint8_t> reference_pattern_from_json(const json& reference, const json& initial,
                                                      const rydberg::ArrayGeometry& geometry);

est::CollapseOptions collapse_options_from_json(const json& j);

est::Channel channel_from_string(const std::string& s);

} // namespace kzc::io::detail
