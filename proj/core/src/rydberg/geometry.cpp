#include "kzc/rydberg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kzc::rydberg {

std::pair<double, double> ArrayGeometry::position(int site) const {
    const int r = site / cols;
    const int c = site % cols;
    return {spacing * c, spacing * r};
}

void ArrayGeometry::validate() const {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("geometry: rows and cols must be >= 1");
    if (n_sites() > 24)
        throw std::invalid_argument(
            "geometry: at most 24 sites (exact state vectors beyond that exceed "
            "desk-scale memory)");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw std::invalid_argument("geometry: spacing must be positive and finite");
}

void DetuningMask::validate(const ArrayGeometry& geometry) const {
    if (rows != geometry.rows || cols != geometry.cols)
        throw std::invalid_argument("detuning mask: shape does not match the geometry");
    if (flip.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw std::invalid_argument("detuning mask: flip array size mismatch");
}

DetuningMask DetuningMask::rectangle(const ArrayGeometry& geometry, int r0, int c0, int h,
                                     int w) {
    geometry.validate();
    if (r0 < 0 || c0 < 0 || h < 1 || w < 1 || r0 + h > geometry.rows || c0 + w > geometry.cols)
        throw std::invalid_argument("detuning mask: rectangle outside the array");
    DetuningMask mask;
    mask.rows = geometry.rows;
    mask.cols = geometry.cols;
    mask.flip.assign(static_cast<std::size_t>(geometry.n_sites()), 0);
    for (int r = r0; r < r0 + h; ++r)
        for (int c = c0; c < c0 + w; ++c)
            mask.flip[static_cast<std::size_t>(r) * geometry.cols + c] = 1;
    return mask;
}

void RydbergParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("params: omega must be positive and finite");
    if (!std::isfinite(delta))
        throw std::invalid_argument("params: delta must be finite");
    if (!(rb_over_a > 0.0) || !std::isfinite(rb_over_a))
        throw std::invalid_argument("params: rb_over_a must be positive and finite");
    if (shells < 0) throw std::invalid_argument("params: shells must be >= 0");
}

std::vector<PairCoupling> interaction_pairs(const ArrayGeometry& geometry,
                                            const RydbergParams& params) {
    geometry.validate();
    params.validate();

    const int n = geometry.n_sites();
    // Distinct squared distances in ascending order define the shells.
    std::vector<double> dist2;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto [xi, yi] = geometry.position(i);
            const auto [xj, yj] = geometry.position(j);
            const double d2 = (xi - xj) * (xi - xj) + (yi - yj) * (yi - yj);
            bool known = false;
            for (const double known_d2 : dist2)
                if (std::abs(known_d2 - d2) < 1e-9 * (1.0 + d2)) {
                    known = true;
                    break;
                }
            if (!known) dist2.push_back(d2);
        }
    std::sort(dist2.begin(), dist2.end());

    double cutoff2 = std::numeric_limits<double>::infinity();
    if (params.shells > 0 && !dist2.empty()) {
        const std::size_t shell =
            std::min<std::size_t>(static_cast<std::size_t>(params.shells), dist2.size());
        cutoff2 = dist2[shell - 1] * (1.0 + 1e-9);
    }

    // V0 such that V(spacing) = omega * (rb/a)^6.
    const double rb = params.rb_over_a * geometry.spacing;
    const double v0 = params.omega * std::pow(rb, 6.0);

    std::vector<PairCoupling> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto [xi, yi] = geometry.position(i);
            const auto [xj, yj] = geometry.position(j);
            const double d2 = (xi - xj) * (xi - xj) + (yi - yj) * (yi - yj);
            if (d2 > cutoff2) continue;
            pairs.push_back({i, j, v0 / (d2 * d2 * d2)});
        }
    return pairs;
}

} // namespace kzc::rydberg
