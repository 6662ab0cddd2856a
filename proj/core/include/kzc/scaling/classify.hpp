#pragma once

#include "kzc/scaling/kz.hpp"
#include "kzc/scaling/model.hpp"
#include "kzc/scaling/protocol.hpp"

#include <string>

namespace kzc::scaling {

/// Which side of the classical critical line the protocol's stop point sits
/// on, as determined by the experiment (energy density injected by the ramp
/// relative to the critical energy density at the stop).
enum class StopEnergySide { ordered, critical, disordered };

/// The qualitative late-time regimes a stopped (or unstopped) ramp can land
/// in. Numbering follows the order in which the crossover analysis
/// distinguishes them:
///   case1 — noncritical coarsening only (indefinite ramps, deep stops, or
///           ordered-side stops whose critical window is empty)
///   case2 — critical coarsening up to x*, then noncritical growth
///           (ordered-side stop near the critical line)
///   case3 — critical coarsening indefinitely (stop exactly on the line)
///   case4 — critical coarsening up to x*, then frozen (disordered side,
///           near the line)
///   case5 — frozen immediately after the fan (disordered side, far from
///           the line)
///   adiabatic — stop well before freeze-out; the system never leaves
///           equilibrium and no coarsening window opens
enum class CoarseningCase { case1, case2, case3, case4, case5, adiabatic };

/// Human-readable labels ("case1-noncritical", ... , "adiabatic").
std::string to_string(CoarseningCase c);
std::string to_string(StopEnergySide s);
StopEnergySide stop_energy_side_from_string(const std::string& s);

/// Classifies the protocol. The stop side must be consistent with the stop
/// position (e.g. ordered with x_s > x_c); contradictions throw
/// std::invalid_argument. Stops inside the fan (|x_s| <= 1) and side
/// decisions require the model to carry x_c.
CoarseningCase classify_case(const RampProtocol& protocol, const KzScales& kz,
                             const ScalingModel& model, StopEnergySide side);

} // namespace kzc::scaling
