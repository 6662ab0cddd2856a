#include "kzc/est/correlation.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace kzc::est {

void Field2D::validate() const {
    if (nx < 1 || ny < 1) throw std::invalid_argument("Field2D: dimensions must be >= 1");
    if (v.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
        throw std::invalid_argument("Field2D: value count does not match dimensions");
}

double CorrelationData::s_at(int qx, int qy) const {
    const int ix = ((qx % nx) + nx) % nx;
    const int iy = ((qy % ny) + ny) % ny;
    return s_q[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(ix)];
}

/// FFTW plan plus reusable buffers for one lattice shape. FFTW planning is
/// not thread-safe and ESTIMATE plans are cheap, so each accumulator owns its
/// own plan.
struct StructureFactorAccum::Impl {
    int nx, ny;
    long samples = 0;
    std::vector<double> sum_s;      // running sum of S(q), full grid
    std::vector<double> in;         // FFTW input (row-major ny x nx)
    fftw_complex* out = nullptr;    // r2c output, ny x (nx/2+1)
    fftw_plan plan = nullptr;

    Impl(int nx_, int ny_) : nx(nx_), ny(ny_) {
        const std::size_t n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
        sum_s.assign(n, 0.0);
        in.assign(n, 0.0);
        const std::size_t n_half =
            static_cast<std::size_t>(ny) * (static_cast<std::size_t>(nx) / 2 + 1);
        out = fftw_alloc_complex(n_half);
        if (out == nullptr) throw std::bad_alloc();
        // FFTW's row-major convention is (n0, n1) = (ny, nx) with nx fastest.
        plan = fftw_plan_dft_r2c_2d(ny, nx, in.data(), out, FFTW_ESTIMATE);
        if (plan == nullptr) {
            fftw_free(out);
            throw std::runtime_error("structure factor: FFTW plan creation failed");
        }
    }

    ~Impl() {
        if (plan != nullptr) fftw_destroy_plan(plan);
        if (out != nullptr) fftw_free(out);
    }
};

StructureFactorAccum::StructureFactorAccum(int nx, int ny) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("StructureFactorAccum: dimensions must be >= 1");
    impl_ = std::make_unique<Impl>(nx, ny);
}

StructureFactorAccum::~StructureFactorAccum() = default;
StructureFactorAccum::StructureFactorAccum(StructureFactorAccum&&) noexcept = default;
StructureFactorAccum& StructureFactorAccum::operator=(StructureFactorAccum&&) noexcept = default;

void StructureFactorAccum::add(const Field2D& field) {
    field.validate();
    Impl& im = *impl_;
    if (field.nx != im.nx || field.ny != im.ny)
        throw std::invalid_argument("StructureFactorAccum: field shape mismatch");

    std::memcpy(im.in.data(), field.v.data(), field.v.size() * sizeof(double));
    fftw_execute(im.plan);

    const double norm = 1.0 / (static_cast<double>(im.nx) * static_cast<double>(im.ny));
    const int half = im.nx / 2 + 1;
    // Expand the r2c half grid onto the full grid using S(-q) = S(q).
    for (int qy = 0; qy < im.ny; ++qy) {
        for (int qx = 0; qx < half; ++qx) {
            const fftw_complex& c = im.out[static_cast<std::size_t>(qy) * half + qx];
            const double s = (c[0] * c[0] + c[1] * c[1]) * norm;
            im.sum_s[static_cast<std::size_t>(qy) * im.nx + qx] += s;
            const int mx = (im.nx - qx) % im.nx;
            const int my = (im.ny - qy) % im.ny;
            // Mirror only onto bins outside the half grid: the self-conjugate
            // columns qx = 0 and qx = nx/2 are iterated directly, and writing
            // their mirrors here would double-count them.
            if (mx >= half) im.sum_s[static_cast<std::size_t>(my) * im.nx + mx] += s;
        }
    }
    ++im.samples;
}

long StructureFactorAccum::samples() const { return impl_->samples; }

CorrelationData StructureFactorAccum::mean() const {
    const Impl& im = *impl_;
    if (im.samples == 0)
        throw std::logic_error("StructureFactorAccum: mean() of an empty ensemble");

    CorrelationData data;
    data.nx = im.nx;
    data.ny = im.ny;
    data.samples = im.samples;
    data.s_q.resize(im.sum_s.size());
    const double inv = 1.0 / static_cast<double>(im.samples);
    for (std::size_t i = 0; i < im.sum_s.size(); ++i) data.s_q[i] = im.sum_s[i] * inv;

    // Real-space correlations along the axes: C(r e_x) depends only on the
    // qy-marginal of S(q), so marginalize first and the cosine sums are
    // one-dimensional. Normalization: C(r) = (1/N) sum_q S(q) e^{iq.r}.
    std::vector<double> sx(static_cast<std::size_t>(im.nx), 0.0);
    std::vector<double> sy(static_cast<std::size_t>(im.ny), 0.0);
    for (int qy = 0; qy < im.ny; ++qy)
        for (int qx = 0; qx < im.nx; ++qx) {
            const double s = data.s_q[static_cast<std::size_t>(qy) * im.nx + qx];
            sx[static_cast<std::size_t>(qx)] += s;
            sy[static_cast<std::size_t>(qy)] += s;
        }

    const int r_max = std::min(im.nx, im.ny) / 2;
    data.c_axis.assign(static_cast<std::size_t>(r_max) + 1, 0.0);
    const double inv_n = 1.0 / (static_cast<double>(im.nx) * static_cast<double>(im.ny));
    for (int r = 0; r <= r_max; ++r) {
        double cx = 0.0;
        for (int qx = 0; qx < im.nx; ++qx)
            cx += sx[static_cast<std::size_t>(qx)] *
                  std::cos(2.0 * std::numbers::pi * qx * r / im.nx);
        double cy = 0.0;
        for (int qy = 0; qy < im.ny; ++qy)
            cy += sy[static_cast<std::size_t>(qy)] *
                  std::cos(2.0 * std::numbers::pi * qy * r / im.ny);
        data.c_axis[static_cast<std::size_t>(r)] = 0.5 * (cx + cy) * inv_n;
    }
    return data;
}

CorrelationData structure_factor(const Field2D& field) {
    StructureFactorAccum acc(field.nx, field.ny);
    acc.add(field);
    return acc.mean();
}

XiResult second_moment_xi(const CorrelationData& mean_s, Channel channel) {
    const int nx = mean_s.nx;
    const int ny = mean_s.ny;
    if (nx != ny)
        throw std::invalid_argument("second_moment_xi: requires a square lattice");
    if (nx < 8)
        throw std::invalid_argument("second_moment_xi: lattice must be at least 8 wide");
    if (channel == Channel::staggered && (nx % 2 != 0 || ny % 2 != 0))
        throw std::invalid_argument("second_moment_xi: staggered channel needs even dimensions");
    if (mean_s.s_q.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
        throw std::invalid_argument("second_moment_xi: structure factor grid size mismatch");

    const int ox = channel == Channel::staggered ? nx / 2 : 0;
    const int oy = channel == Channel::staggered ? ny / 2 : 0;
    const double s_peak = mean_s.s_at(ox, oy);
    const double s_off = 0.25 * (mean_s.s_at(ox + 1, oy) + mean_s.s_at(ox - 1, oy) +
                                 mean_s.s_at(ox, oy + 1) + mean_s.s_at(ox, oy - 1));

    XiResult res;
    if (!(s_peak > s_off) || !(s_off > 0.0)) {
        res.status = XiResult::Status::no_peak;
        return res;
    }
    const double q1 = 2.0 * std::numbers::pi / nx;
    res.xi = std::sqrt(s_peak / s_off - 1.0) / q1;
    res.status = res.xi > 0.25 * nx ? XiResult::Status::saturated : XiResult::Status::ok;
    return res;
}

} // namespace kzc::est
