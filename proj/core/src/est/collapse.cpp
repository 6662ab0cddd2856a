#include "kzc/est/collapse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>

namespace kzc::est {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Relative smoothing strength of the master-curve spline. Scaled by the
/// total weight of the data entering a fit, so that duplicating every point
/// rescales the objective uniformly and leaves the fitted spline unchanged —
/// the property that makes identical curves collapse to residual exactly 0.
constexpr double kLambda0 = 1e-6;

struct ScaledPoint {
    double u, v;
};

/// Penalized least-squares fit of a uniform cubic B-spline and its residual.
/// The knot grid is supplied by the caller so pooled and per-curve fits use
/// the same basis.
struct SplineGrid {
    double u0 = 0.0;   // first segment start
    double h = 1.0;    // segment width
    int segments = 1;  // number of segments; basis size = segments + 3

    int basis() const { return segments + 3; }
};

/// Cubic B-spline basis values on segment-local coordinate s in [0, 1).
void bspline_weights(double s, double w[4]) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    w[0] = (1.0 - 3.0 * s + 3.0 * s2 - s3) / 6.0;
    w[1] = (4.0 - 6.0 * s2 + 3.0 * s3) / 6.0;
    w[2] = (1.0 + 3.0 * s + 3.0 * s2 - 3.0 * s3) / 6.0;
    w[3] = s3 / 6.0;
}

double fit_residual(const std::vector<ScaledPoint>& pts, const SplineGrid& grid) {
    const int nb = grid.basis();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nb);

    struct Loc {
        int seg;
        double w[4];
    };
    std::vector<Loc> locs(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double si = (pts[i].u - grid.u0) / grid.h;
        int seg = static_cast<int>(std::floor(si));
        seg = std::clamp(seg, 0, grid.segments - 1);
        const double s = std::clamp(si - seg, 0.0, 1.0);
        locs[i].seg = seg;
        bspline_weights(s, locs[i].w);
        for (int r = 0; r < 4; ++r) {
            rhs[seg + r] += locs[i].w[r] * pts[i].v;
            for (int c = 0; c < 4; ++c) a(seg + r, seg + c) += locs[i].w[r] * locs[i].w[c];
        }
    }

    // Second-difference penalty on coefficients, weight proportional to the
    // number of points (see kLambda0 above).
    const double lambda = kLambda0 * static_cast<double>(pts.size());
    for (int j = 0; j + 2 < nb; ++j) {
        // (c_j - 2 c_{j+1} + c_{j+2})^2 expands to a 3x3 stencil.
        const int idx[3] = {j, j + 1, j + 2};
        const double coef[3] = {1.0, -2.0, 1.0};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) a(idx[r], idx[c]) += lambda * coef[r] * coef[c];
    }

    const Eigen::VectorXd sol = a.ldlt().solve(rhs);

    double resid = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double fit = 0.0;
        for (int r = 0; r < 4; ++r) fit += locs[i].w[r] * sol[locs[i].seg + r];
        const double d = pts[i].v - fit;
        resid += d * d;
    }
    return resid;
}

struct ScaledCurves {
    std::vector<std::vector<ScaledPoint>> per_curve;
    double u_min = kInf, u_max = -kInf;
    bool overlapping = true;
};

ScaledCurves rescale(std::span<const CollapseCurve> curves, double alpha_l, double alpha_t) {
    ScaledCurves out;
    out.per_curve.resize(curves.size());
    std::vector<std::pair<double, double>> ranges;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const double lt = std::log(curves[c].tau);
        auto& pts = out.per_curve[c];
        pts.resize(curves[c].t.size());
        double lo = kInf, hi = -kInf;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            pts[i].u = std::log(curves[c].t[i]) - alpha_t * lt;
            pts[i].v = std::log(curves[c].y[i]) - alpha_l * lt;
            lo = std::min(lo, pts[i].u);
            hi = std::max(hi, pts[i].u);
        }
        ranges.emplace_back(lo, hi);
        out.u_min = std::min(out.u_min, lo);
        out.u_max = std::max(out.u_max, hi);
    }
    // Every curve must share scaled range with the hull of the others,
    // otherwise there is no common master region to compare against.
    for (std::size_t c = 0; c < ranges.size() && out.overlapping; ++c) {
        double lo = kInf, hi = -kInf;
        for (std::size_t o = 0; o < ranges.size(); ++o) {
            if (o == c) continue;
            lo = std::min(lo, ranges[o].first);
            hi = std::max(hi, ranges[o].second);
        }
        if (ranges[c].second < lo || ranges[c].first > hi) out.overlapping = false;
    }
    return out;
}

/// Residual implementation shared by the public entry point (which throws on
/// non-overlap) and the optimizer (which treats non-overlap as +inf).
double residual_or_inf(std::span<const CollapseCurve> curves, double alpha_l, double alpha_t) {
    const ScaledCurves scaled = rescale(curves, alpha_l, alpha_t);
    if (!scaled.overlapping) return kInf;

    std::size_t total = 0;
    for (const auto& pts : scaled.per_curve) total += pts.size();

    SplineGrid grid;
    const double span = std::max(scaled.u_max - scaled.u_min, 1e-9);
    grid.segments = std::clamp(static_cast<int>(total) / 3, 8, 28);
    // Pad half a segment so boundary points sit strictly inside the grid.
    grid.h = span / grid.segments;
    grid.u0 = scaled.u_min - 0.5 * grid.h;
    grid.segments += 1;

    std::vector<ScaledPoint> pooled;
    pooled.reserve(total);
    for (const auto& pts : scaled.per_curve) pooled.insert(pooled.end(), pts.begin(), pts.end());

    double baseline = 0.0;
    for (const auto& pts : scaled.per_curve) baseline += fit_residual(pts, grid);
    const double pooled_resid = fit_residual(pooled, grid);
    return std::max(0.0, pooled_resid - baseline);
}

void validate_curves(std::span<const CollapseCurve> curves, std::size_t min_curves) {
    if (curves.size() < min_curves)
        throw std::invalid_argument("collapse: need at least " + std::to_string(min_curves) +
                                    " curves");
    for (const auto& c : curves) c.validate();
}

} // namespace

void CollapseCurve::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("collapse curve: tau must be positive and finite");
    if (t.size() != y.size())
        throw std::invalid_argument("collapse curve: t and y lengths differ");
    if (t.size() < 4)
        throw std::invalid_argument("collapse curve: need at least 4 points per curve");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!(t[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("collapse curve: t and y must be positive");
}

double collapse_residual(std::span<const CollapseCurve> curves, double alpha_l, double alpha_t) {
    validate_curves(curves, 2);
    if (!std::isfinite(alpha_l) || !std::isfinite(alpha_t))
        throw std::invalid_argument("collapse_residual: exponents must be finite");
    const double r = residual_or_inf(curves, alpha_l, alpha_t);
    if (r == kInf)
        throw std::invalid_argument(
            "collapse_residual: scaled curve ranges do not overlap at these exponents");
    return r;
}

namespace {

/// Deterministic compass pattern search from a starting point.
std::pair<std::array<double, 2>, double> pattern_search(
    const std::function<double(double, double)>& f, std::array<double, 2> x0, double step0,
    double tol) {
    std::array<double, 2> x = x0;
    double best = f(x[0], x[1]);
    double step = step0;
    while (step > tol) {
        bool improved = false;
        static constexpr int dir[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& d : dir) {
            const double cand0 = x[0] + step * d[0];
            const double cand1 = x[1] + step * d[1];
            const double v = f(cand0, cand1);
            if (v < best) {
                best = v;
                x = {cand0, cand1};
                improved = true;
                break;
            }
        }
        if (!improved) step *= 0.5;
    }
    return {x, best};
}

} // namespace

CollapseResult optimize_collapse(std::span<const CollapseCurve> curves,
                                 const CollapseOptions& options) {
    validate_curves(curves, 3);
    if (!(options.alpha_max > options.alpha_min) || !(options.grid_step > 0.0) ||
        !(options.refine_tol > 0.0))
        throw std::invalid_argument("optimize_collapse: bad search options");

    double tau_min = kInf, tau_max = 0.0;
    for (const auto& c : curves) {
        tau_min = std::min(tau_min, c.tau);
        tau_max = std::max(tau_max, c.tau);
    }

    CollapseResult result;
    if (tau_max < 4.0 * tau_min) {
        // Without tau leverage the rescaling is (nearly) rigid and the
        // residual cannot distinguish exponents.
        result.degenerate = true;
        result.alpha_l = result.alpha_t = std::numeric_limits<double>::quiet_NaN();
        result.alpha_l_err = result.alpha_t_err = kInf;
        const double mid = 0.5 * (options.alpha_min + options.alpha_max);
        result.residual = residual_or_inf(curves, mid, mid);
        return result;
    }

    const auto solve = [&](std::span<const CollapseCurve> subset) {
        const auto obj = [&subset](double al, double at) {
            return residual_or_inf(subset, al, at);
        };
        std::array<double, 2> best_x = {options.alpha_min, options.alpha_min};
        double best = kInf;
        for (double al = options.alpha_min; al <= options.alpha_max + 1e-12;
             al += options.grid_step)
            for (double at = options.alpha_min; at <= options.alpha_max + 1e-12;
                 at += options.grid_step) {
                const double v = obj(al, at);
                if (v < best) {
                    best = v;
                    best_x = {al, at};
                }
            }
        return pattern_search(obj, best_x, options.grid_step, options.refine_tol);
    };

    const auto [x, best] = solve(curves);
    result.alpha_l = x[0];
    result.alpha_t = x[1];
    result.residual = best;

    // Jackknife over curves for the exponent uncertainties.
    const std::size_t n = curves.size();
    std::vector<std::array<double, 2>> loo;
    loo.reserve(n);
    std::vector<CollapseCurve> subset;
    for (std::size_t skip = 0; skip < n; ++skip) {
        subset.clear();
        for (std::size_t c = 0; c < n; ++c)
            if (c != skip) subset.push_back(curves[c]);
        loo.push_back(solve(subset).first);
    }
    double m0 = 0, m1 = 0;
    for (const auto& v : loo) {
        m0 += v[0];
        m1 += v[1];
    }
    m0 /= static_cast<double>(n);
    m1 /= static_cast<double>(n);
    double s0 = 0, s1 = 0;
    for (const auto& v : loo) {
        s0 += (v[0] - m0) * (v[0] - m0);
        s1 += (v[1] - m1) * (v[1] - m1);
    }
    const double jk = (static_cast<double>(n) - 1.0) / static_cast<double>(n);
    result.alpha_l_err = std::sqrt(jk * s0);
    result.alpha_t_err = std::sqrt(jk * s1);
    return result;
}

} // namespace kzc::est
