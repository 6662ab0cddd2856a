#include "kzc/scaling/kz.hpp"

#include <cmath>
#include <stdexcept>

namespace kzc::scaling {

void RampProtocol::validate() const {
    if (!(std::isfinite(tau) && tau > 0.0))
        throw std::invalid_argument("protocol: tau must be positive and finite");
    if (!(std::isfinite(p) && p >= 1.0))
        throw std::invalid_argument("protocol: ramp power p must be >= 1");
    if (g_s && !std::isfinite(*g_s))
        throw std::invalid_argument("protocol: g_s must be finite");
    if (t_hold) {
        if (!g_s) throw std::invalid_argument("protocol: t_hold requires a stop value g_s");
        if (!(std::isfinite(*t_hold) && *t_hold >= 0.0))
            throw std::invalid_argument("protocol: t_hold must be >= 0");
    }
}

double RampProtocol::g_of_t(double t) const {
    const double mag = std::pow(std::abs(t) / tau, p);
    return t < 0.0 ? -mag : mag;
}

std::optional<double> RampProtocol::stop_time() const {
    if (!g_s) return std::nullopt;
    const double mag = tau * std::pow(std::abs(*g_s), 1.0 / p);
    return *g_s < 0.0 ? -mag : mag;
}

KzScales kz_scales(const CriticalExponents& ex, const MicroScales& micro,
                   const RampProtocol& protocol) {
    ex.validate();
    micro.validate();
    protocol.validate();
    if (protocol.tau < micro.t0)
        throw std::invalid_argument(
            "kz_scales: ramp must be slower than the microscopic time (tau >= t0)");

    const double pnz = protocol.p * ex.nu * ex.z;
    const double r = protocol.tau / micro.t0;
    KzScales s;
    s.t_kz = micro.t0 * std::pow(r, pnz / (pnz + 1.0));
    s.xi_kz = micro.l0 * std::pow(r, protocol.p * ex.nu / (pnz + 1.0));
    s.g_kz = std::pow(s.xi_kz / micro.l0, -1.0 / ex.nu);
    s.eps_kz = std::pow(s.xi_kz / micro.l0, -ex.z) / micro.t0;
    return s;
}

GrowthLaw growth_exponent(const CriticalExponents& ex, double p) {
    ex.validate();
    if (!(std::isfinite(p) && p >= 1.0))
        throw std::invalid_argument("growth_exponent: ramp power p must be >= 1");

    GrowthLaw law;
    law.kappa = -p * ex.nu + (p * ex.nu * ex.z + 1.0) / ex.z_d;
    if (law.kappa > 0.0)
        law.regime = GrowthRegime::growing;
    else if (law.kappa == 0.0)
        law.regime = GrowthRegime::logarithmic;
    else
        law.regime = GrowthRegime::bounded;
    return law;
}

double excess_energy_scale(const CriticalExponents& ex, const MicroScales& micro,
                           const RampProtocol& protocol) {
    const KzScales s = kz_scales(ex, micro, protocol);
    return std::pow(s.xi_kz / micro.l0, -(static_cast<double>(ex.d) + ex.z));
}

} // namespace kzc::scaling
