#include "kzc/tfim/mode_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kzc::tfim {

void ChainSpec::validate() const {
    if (L < 8 || L % 2 != 0)
        throw std::invalid_argument("chain: L must be even and >= 8");
    if (!(std::isfinite(tau) && tau > 0.0))
        throw std::invalid_argument("chain: tau must be positive and finite");
    if (!(std::isfinite(p) && p >= 1.0))
        throw std::invalid_argument("chain: ramp power p must be >= 1");
    if (!(g_start < 0.0) || !std::isfinite(g_start))
        throw std::invalid_argument("chain: g_start must be negative (disordered side)");
    if (!(g_end > 0.0 && g_end <= 1.0))
        throw std::invalid_argument("chain: g_end must lie in (0, 1]");
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-4))
        throw std::invalid_argument("chain: rel_tol must lie in [1e-12, 1e-4]");
}

ModeCoeffs mode_coeffs(double h, double k) {
    return {2.0 * (h - std::cos(k)), 2.0 * std::sin(k)};
}

ModeState mode_ground_state(double h, double k) {
    const auto [ez, ex] = mode_coeffs(h, k);
    const double e = std::hypot(ez, ex);
    // (ex, -(ez + e)) is an eigenvector for -e; well conditioned whenever
    // ez > -e, which holds for all 0 < k < pi.
    const double na = ex;
    const double nb = -(ez + e);
    const double inv_norm = 1.0 / std::hypot(na, nb);
    return {na * inv_norm, nb * inv_norm};
}

double excitation_probability(const ModeState& state, double h, double k) {
    const auto [ez, ex] = mode_coeffs(h, k);
    const double e = std::hypot(ez, ex);
    // (ez + e, ex) is the +e eigenvector, orthogonal to the ground state.
    const double wa = ez + e;
    const double wb = ex;
    const double inv_norm = 1.0 / std::hypot(wa, wb);
    const std::complex<double> overlap = (wa * state.a + wb * state.b) * inv_norm;
    return std::norm(overlap) / state.norm2();
}

namespace {

/// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,     0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,         7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct Deriv {
    std::complex<double> da, db;
};

/// i psi' = H psi, i.e. psi' = -i H psi.
Deriv rhs(const ModeState& y, double h_field, double k) {
    const auto [ez, ex] = mode_coeffs(h_field, k);
    const std::complex<double> mi(0.0, -1.0);
    return {mi * (ez * y.a + ex * y.b), mi * (ex * y.a - ez * y.b)};
}

} // namespace

double mode_excitation(const ChainSpec& spec, double k) {
    spec.validate();
    if (!(k > 0.0 && k < 3.15))
        throw std::invalid_argument("mode_excitation: momentum must lie in (0, pi)");

    // Ramp time endpoints from g(t) = sign(t) |t/tau|^p.
    const double t_start = -spec.tau * std::pow(-spec.g_start, 1.0 / spec.p);
    const double t_end = spec.tau * std::pow(spec.g_end, 1.0 / spec.p);
    const auto field_at = [&](double t) {
        const double g = (t < 0.0 ? -1.0 : 1.0) * std::pow(std::abs(t) / spec.tau, spec.p);
        return 1.0 - g;
    };

    ModeState y = mode_ground_state(field_at(t_start), k);

    const double rtol = spec.rel_tol;
    const double atol = 1e-12;
    double t = t_start;
    double dt = std::min(1e-3 * spec.tau, t_end - t_start);
    const double dt_min = 1e-14 * (t_end - t_start);

    Deriv ks[7];
    while (t < t_end) {
        dt = std::min(dt, t_end - t);

        ks[0] = rhs(y, field_at(t), k);
        for (int stage = 1; stage < 7; ++stage) {
            ModeState ys = y;
            for (int j = 0; j < stage; ++j) {
                ys.a += dt * kA[stage][j] * ks[j].da;
                ys.b += dt * kA[stage][j] * ks[j].db;
            }
            ks[stage] = rhs(ys, field_at(t + kC[stage] * dt), k);
        }

        ModeState y5 = y, y4 = y;
        for (int j = 0; j < 7; ++j) {
            y5.a += dt * kB5[j] * ks[j].da;
            y5.b += dt * kB5[j] * ks[j].db;
            y4.a += dt * kB4[j] * ks[j].da;
            y4.b += dt * kB4[j] * ks[j].db;
        }

        // Scaled error norm over the four real components.
        const auto comp_err = [&](std::complex<double> e5, std::complex<double> e4,
                                  std::complex<double> ref) {
            const double scale = atol + rtol * std::max(std::abs(ref), 1.0);
            return std::norm(e5 - e4) / (scale * scale);
        };
        const double err =
            std::sqrt(0.5 * (comp_err(y5.a, y4.a, y.a) + comp_err(y5.b, y4.b, y.b)));

        const double factor =
            err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        if (err <= 1.0) {
            t += dt;
            // The exact flow is unitary; renormalizing removes the only
            // secular drift the integrator can introduce.
            const double inv_norm = 1.0 / std::sqrt(y5.norm2());
            y.a = y5.a * inv_norm;
            y.b = y5.b * inv_norm;
            dt *= factor;
        } else {
            dt *= factor; // factor < 1 on rejection
            if (dt < dt_min)
                throw std::runtime_error("mode_excitation: step size underflow (tolerance "
                                         "unreachable at k=" +
                                         std::to_string(k) + ")");
        }
    }

    return excitation_probability(y, field_at(t_end), k);
}

} // namespace kzc::tfim
