#include "kzc/est/defects.hpp"

#include <stdexcept>

namespace kzc::est {

namespace {

DefectResult from_counts(long broken, long total) {
    DefectResult res;
    if (broken == 0) {
        res.infinite = true;
        return res;
    }
    res.density = static_cast<double>(broken) / static_cast<double>(total);
    res.length = 1.0 / res.density;
    return res;
}

} // namespace

DefectResult defect_length_2d(std::span<const std::int8_t> spins, int nx, int ny,
                              Channel channel) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("defect_length_2d: lattice must be at least 2x2");
    if (spins.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
        throw std::invalid_argument("defect_length_2d: spin count does not match dimensions");

    // In the staggered channel an aligned bond is the broken one.
    const int broken_sign = channel == Channel::ferromagnetic ? -1 : +1;

    long broken = 0;
    for (int y = 0; y < ny; ++y) {
        const int yn = y + 1 == ny ? 0 : y + 1;
        for (int x = 0; x < nx; ++x) {
            const int xn = x + 1 == nx ? 0 : x + 1;
            const int s = spins[static_cast<std::size_t>(y) * nx + x];
            const int right = spins[static_cast<std::size_t>(y) * nx + xn];
            const int down = spins[static_cast<std::size_t>(yn) * nx + x];
            if (s * right == broken_sign) ++broken;
            if (s * down == broken_sign) ++broken;
        }
    }
    const long total = 2L * nx * ny;
    return from_counts(broken, total);
}

DefectResult defect_length_1d(std::span<const std::int8_t> spins) {
    const std::size_t n = spins.size();
    if (n < 2) throw std::invalid_argument("defect_length_1d: chain must have >= 2 sites");

    long kinks = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + 1 == n ? 0 : i + 1;
        if (spins[i] * spins[j] < 0) ++kinks;
    }
    return from_counts(kinks, static_cast<long>(n));
}

} // namespace kzc::est
