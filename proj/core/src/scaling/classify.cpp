#include "kzc/scaling/classify.hpp"

#include "kzc/scaling/functions.hpp"

#include <cmath>
#include <stdexcept>

namespace kzc::scaling {

std::string to_string(CoarseningCase c) {
    switch (c) {
    case CoarseningCase::case1: return "case1-noncritical";
    case CoarseningCase::case2: return "case2-critical-then-noncritical";
    case CoarseningCase::case3: return "case3-critical";
    case CoarseningCase::case4: return "case4-critical-then-frozen";
    case CoarseningCase::case5: return "case5-frozen";
    case CoarseningCase::adiabatic: return "adiabatic";
    }
    throw std::logic_error("to_string: bad CoarseningCase");
}

std::string to_string(StopEnergySide s) {
    switch (s) {
    case StopEnergySide::ordered: return "ordered";
    case StopEnergySide::critical: return "critical";
    case StopEnergySide::disordered: return "disordered";
    }
    throw std::logic_error("to_string: bad StopEnergySide");
}

StopEnergySide stop_energy_side_from_string(const std::string& s) {
    if (s == "ordered") return StopEnergySide::ordered;
    if (s == "critical") return StopEnergySide::critical;
    if (s == "disordered") return StopEnergySide::disordered;
    throw std::invalid_argument("unknown stop_energy_side '" + s +
                                "' (expected ordered|critical|disordered)");
}

CoarseningCase classify_case(const RampProtocol& protocol, const KzScales& kz,
                             const ScalingModel& model, StopEnergySide side) {
    protocol.validate();
    model.validate();
    if (!(kz.t_kz > 0.0) || !(kz.xi_kz > 0.0))
        throw std::invalid_argument("classify_case: freeze-out scales must be positive");

    const auto t_s = protocol.stop_time();
    if (!t_s) {
        // Indefinite ramp: the system ends arbitrarily deep in the ordered
        // phase, so any other side label contradicts the protocol.
        if (side != StopEnergySide::ordered)
            throw std::invalid_argument(
                "classify_case: indefinite ramps end on the ordered side; got side=" +
                to_string(side));
        return CoarseningCase::case1;
    }

    const double x_s = *t_s / kz.t_kz;

    if (x_s < -1.0) {
        // Stopped before the freeze-out window opened: equilibrium follows
        // the drive the whole way, which is only consistent with a stop on
        // the disordered side of the line.
        if (side != StopEnergySide::disordered)
            throw std::invalid_argument(
                "classify_case: a stop at x_s < -1 is adiabatic and disordered; got side=" +
                to_string(side));
        return CoarseningCase::adiabatic;
    }

    // Everything past the window needs the critical-line location to decide
    // whether a critical-coarsening window opens.
    if (!model.x_c)
        throw std::invalid_argument("classify_case: stops at x_s >= -1 require x_c");
    const double x_c = *model.x_c;

    // Side must agree with the geometry of the stop; equality within one part
    // in 1e12 counts as "on the line" to absorb round-trip rounding of x_s.
    const double tol = 1e-12 * std::max({1.0, std::abs(x_s), std::abs(x_c)});
    const bool on_line = std::abs(x_s - x_c) <= tol;

    switch (side) {
    case StopEnergySide::critical: {
        if (!on_line)
            throw std::invalid_argument("classify_case: side=critical but x_s != x_c");
        return CoarseningCase::case3;
    }
    case StopEnergySide::ordered: {
        if (!(x_s > x_c) || on_line)
            throw std::invalid_argument("classify_case: side=ordered but x_s <= x_c");
        const double x_a = std::max(x_s, 1.0);
        return crossover_xstar(model, x_s) > x_a ? CoarseningCase::case2 : CoarseningCase::case1;
    }
    case StopEnergySide::disordered: {
        if (!(x_s < x_c) || on_line)
            throw std::invalid_argument("classify_case: side=disordered but x_s >= x_c");
        const double x_a = std::max(x_s, 1.0);
        return crossover_xstar(model, x_s) > x_a ? CoarseningCase::case4 : CoarseningCase::case5;
    }
    }
    throw std::logic_error("classify_case: unreachable");
}

} // namespace kzc::scaling
