#include "kzc/ising2d/lattice.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kzc::ising2d {

SpinLattice::SpinLattice(int lx, int ly, std::uint64_t seed)
    : lx_(lx), ly_(ly), rng_(seed) {
    if (lx < 2 || ly < 2)
        throw std::invalid_argument("SpinLattice: dimensions must be >= 2");
    const std::size_t n = static_cast<std::size_t>(lx) * static_cast<std::size_t>(ly);
    s_.assign(n, 1);
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), 0);
}

SpinLattice SpinLattice::random(int lx, int ly, std::uint64_t seed) {
    SpinLattice lat(lx, ly, seed);
    for (auto& s : lat.s_) s = (lat.rng_.next() >> 63) ? 1 : -1;
    return lat;
}

SpinLattice SpinLattice::all_up(int lx, int ly, std::uint64_t seed) {
    return SpinLattice(lx, ly, seed);
}

SpinLattice SpinLattice::embedded_domain(int lx, int ly, std::uint64_t seed, int x0, int y0,
                                         int w, int h) {
    if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > lx || y0 + h > ly)
        throw std::invalid_argument("SpinLattice: embedded domain outside the lattice");
    SpinLattice lat(lx, ly, seed);
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x)
            lat.s_[static_cast<std::size_t>(y) * lx + x] = -1;
    return lat;
}

void SpinLattice::glauber_sweep(double temperature) {
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw std::invalid_argument("glauber_sweep: temperature must be finite and >= 0");

    // Flip probability by (dE/4 + 2), dE in {-8, -4, 0, 4, 8}.
    double lut[5];
    if (temperature == 0.0) {
        lut[0] = 1.0;
        lut[1] = 1.0;
        lut[2] = 0.5;
        lut[3] = 0.0;
        lut[4] = 0.0;
    } else {
        for (int j = 0; j < 5; ++j)
            lut[j] = 1.0 / (1.0 + std::exp(4.0 * (j - 2) / temperature));
    }

    const std::size_t n = s_.size();
    // Fresh uniform permutation (Fisher-Yates on the previous one).
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = rng_.below(i + 1);
        std::swap(perm_[i], perm_[j]);
    }

    const int lx = lx_;
    const int ly = ly_;
    for (std::size_t u = 0; u < n; ++u) {
        const int idx = perm_[u];
        const int x = idx % lx;
        const int y = idx / lx;
        const int xl = x == 0 ? lx - 1 : x - 1;
        const int xr = x == lx - 1 ? 0 : x + 1;
        const int yu = y == 0 ? ly - 1 : y - 1;
        const int yd = y == ly - 1 ? 0 : y + 1;
        const int row = y * lx;
        const int nn = s_[static_cast<std::size_t>(row) + xl] +
                       s_[static_cast<std::size_t>(row) + xr] +
                       s_[static_cast<std::size_t>(yu) * lx + x] +
                       s_[static_cast<std::size_t>(yd) * lx + x];
        const int half_de = s_[static_cast<std::size_t>(idx)] * nn / 2; // dE = 2 s nn
        // Always draw: the stream position then depends only on the sweep
        // count, not on the trajectory, which keeps replays simple to reason
        // about.
        if (rng_.uniform() < lut[half_de + 2])
            s_[static_cast<std::size_t>(idx)] =
                static_cast<std::int8_t>(-s_[static_cast<std::size_t>(idx)]);
    }
    sweeps_ += 1.0;
}

double SpinLattice::energy_per_site() const {
    long sum = 0;
    for (int y = 0; y < ly_; ++y) {
        const int yd = y == ly_ - 1 ? 0 : y + 1;
        for (int x = 0; x < lx_; ++x) {
            const int xr = x == lx_ - 1 ? 0 : x + 1;
            const int s = s_[static_cast<std::size_t>(y) * lx_ + x];
            sum += s * s_[static_cast<std::size_t>(y) * lx_ + xr];
            sum += s * s_[static_cast<std::size_t>(yd) * lx_ + x];
        }
    }
    return -static_cast<double>(sum) / static_cast<double>(sites());
}

double SpinLattice::magnetization() const {
    long sum = 0;
    for (const auto s : s_) sum += s;
    return static_cast<double>(sum) / static_cast<double>(sites());
}

} // namespace kzc::ising2d
