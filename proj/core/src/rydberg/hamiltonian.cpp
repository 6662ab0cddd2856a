#include "kzc/rydberg/hamiltonian.hpp"

#include "kzc/common/parallel.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace kzc::rydberg {

double StateVector::norm() const {
    double sum = 0.0;
    for (const auto& a : amp) sum += std::norm(a);
    return std::sqrt(sum);
}

void StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("StateVector: cannot normalize the zero vector");
    const double inv = 1.0 / n;
    for (auto& a : amp) a *= inv;
}

StateVector product_state(const ArrayGeometry& geometry, std::span<const std::uint8_t> occ) {
    geometry.validate();
    if (occ.size() != static_cast<std::size_t>(geometry.n_sites()))
        throw std::invalid_argument("product_state: occupation list size mismatch");

    std::size_t basis = 0;
    for (std::size_t i = 0; i < occ.size(); ++i)
        if (occ[i] != 0) basis |= std::size_t{1} << i;

    StateVector psi;
    psi.n_sites = geometry.n_sites();
    psi.amp.assign(psi.dim(), {0.0, 0.0});
    psi.amp[basis] = {1.0, 0.0};
    return psi;
}

std::vector<std::uint8_t> checkerboard_pattern(const ArrayGeometry& geometry,
                                               bool even_occupied) {
    geometry.validate();
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(geometry.n_sites()), 0);
    for (int r = 0; r < geometry.rows; ++r)
        for (int c = 0; c < geometry.cols; ++c) {
            const bool even = (r + c) % 2 == 0;
            occ[static_cast<std::size_t>(r) * geometry.cols + c] =
                (even == even_occupied) ? 1 : 0;
        }
    return occ;
}

StateVector prepare_domain_wall(const ArrayGeometry& geometry, const DetuningMask& mask) {
    mask.validate(geometry);
    std::vector<std::uint8_t> occ = checkerboard_pattern(geometry, true);
    for (std::size_t i = 0; i < occ.size(); ++i)
        if (mask.flip[i] != 0) occ[i] ^= 1u;
    return product_state(geometry, occ);
}

RydbergHamiltonian::RydbergHamiltonian(const ArrayGeometry& geometry,
                                       const RydbergParams& params)
    : n_(geometry.n_sites()), pairs_(interaction_pairs(geometry, params)) {
    // Two-body diagonal via bit recursion: stripping the lowest set bit
    // reduces v_diag(s) to v_diag(s') plus the couplings between the
    // stripped site and the remaining occupied ones.
    std::vector<std::vector<std::pair<int, double>>> row(static_cast<std::size_t>(n_));
    for (const auto& pc : pairs_) {
        row[static_cast<std::size_t>(pc.i)].emplace_back(pc.j, pc.v);
        row[static_cast<std::size_t>(pc.j)].emplace_back(pc.i, pc.v);
    }

    v_diag_.assign(dim(), 0.0);
    for (std::size_t s = 1; s < dim(); ++s) {
        const int low = std::countr_zero(s);
        const std::size_t rest = s & (s - 1);
        double v = v_diag_[rest];
        for (const auto& [j, vij] : row[static_cast<std::size_t>(low)])
            if (rest & (std::size_t{1} << j)) v += vij;
        v_diag_[s] = v;
    }
}

void RydbergHamiltonian::apply(std::span<const std::complex<double>> x,
                               std::span<std::complex<double>> y, double omega, double delta,
                               int threads) const {
    if (x.size() != dim() || y.size() != dim())
        throw std::invalid_argument("hamiltonian apply: state size mismatch");
    if (x.data() == y.data())
        throw std::invalid_argument("hamiltonian apply: in-place apply is not supported");

    const double half_omega = 0.5 * omega;
    const int n = n_;
    parallel_chunks(dim(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            const double diag =
                v_diag_[s] - delta * static_cast<double>(std::popcount(s));
            std::complex<double> acc = diag * x[s];
            for (int i = 0; i < n; ++i) acc += half_omega * x[s ^ (std::size_t{1} << i)];
            y[s] = acc;
        }
    });
}

double RydbergHamiltonian::diag_entry(std::size_t state, double delta) const {
    if (state >= dim()) throw std::out_of_range("diag_entry: basis state out of range");
    return v_diag_[state] - delta * static_cast<double>(std::popcount(state));
}

double RydbergHamiltonian::norm_bound(double omega, double delta) const {
    double max_diag = 0.0;
    for (std::size_t s = 0; s < dim(); ++s)
        max_diag = std::max(max_diag, std::abs(diag_entry(s, delta)));
    return max_diag + 0.5 * std::abs(omega) * static_cast<double>(n_);
}

} // namespace kzc::rydberg
