#include "kzc/rydberg/observables.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace kzc::rydberg {

namespace {

void check_state(const StateVector& psi) {
    if (psi.n_sites < 1 || psi.n_sites > 24 || psi.amp.size() != psi.dim())
        throw std::invalid_argument("observables: malformed state vector");
}

} // namespace

std::vector<double> site_densities(const StateVector& psi) {
    check_state(psi);
    std::vector<double> density(static_cast<std::size_t>(psi.n_sites), 0.0);
    for (std::size_t s = 0; s < psi.amp.size(); ++s) {
        const double w = std::norm(psi.amp[s]);
        if (w == 0.0) continue;
        std::size_t bits = s;
        while (bits != 0) {
            const int i = std::countr_zero(bits);
            density[static_cast<std::size_t>(i)] += w;
            bits &= bits - 1;
        }
    }
    return density;
}

double excess_density(const StateVector& psi, std::span<const std::uint8_t> reference) {
    check_state(psi);
    if (reference.size() != static_cast<std::size_t>(psi.n_sites))
        throw std::invalid_argument("excess_density: reference pattern size mismatch");
    const std::vector<double> density = site_densities(psi);
    double sum = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i)
        sum += reference[i] != 0 ? 1.0 - density[i] : density[i];
    return sum / static_cast<double>(psi.n_sites);
}

namespace {

std::size_t even_sublattice_mask(const ArrayGeometry& geometry) {
    std::size_t mask = 0;
    for (int r = 0; r < geometry.rows; ++r)
        for (int c = 0; c < geometry.cols; ++c)
            if ((r + c) % 2 == 0)
                mask |= std::size_t{1} << (static_cast<std::size_t>(r) * geometry.cols + c);
    return mask;
}

} // namespace

double staggered_magnetization(const StateVector& psi, const ArrayGeometry& geometry) {
    check_state(psi);
    geometry.validate();
    if (geometry.n_sites() != psi.n_sites)
        throw std::invalid_argument("staggered_magnetization: geometry does not match state");

    const std::size_t mask_a = even_sublattice_mask(geometry);
    const std::size_t mask_all = (std::size_t{1} << psi.n_sites) - 1;
    const int n = psi.n_sites;
    const int n_a = std::popcount(mask_a);
    const int n_b = n - n_a;

    double sum = 0.0;
    for (std::size_t s = 0; s < psi.amp.size(); ++s) {
        const double w = std::norm(psi.amp[s]);
        if (w == 0.0) continue;
        const int pop_a = std::popcount(s & mask_a);
        const int pop_b = std::popcount(s & mask_all & ~mask_a);
        // sum_i eps_i (n_i - 1/2) = pop_a - pop_b - (n_a - n_b)/2
        const double m =
            2.0 * (pop_a - pop_b - 0.5 * (n_a - n_b)) / static_cast<double>(n);
        sum += w * m;
    }
    return sum;
}

double staggered_m2(const StateVector& psi, const ArrayGeometry& geometry) {
    check_state(psi);
    geometry.validate();
    if (geometry.n_sites() != psi.n_sites)
        throw std::invalid_argument("staggered_m2: geometry does not match state");

    const std::size_t mask_a = even_sublattice_mask(geometry);
    const std::size_t mask_all = (std::size_t{1} << psi.n_sites) - 1;
    const int n = psi.n_sites;
    const int n_a = std::popcount(mask_a);
    const int n_b = n - n_a;

    double sum = 0.0;
    for (std::size_t s = 0; s < psi.amp.size(); ++s) {
        const double w = std::norm(psi.amp[s]);
        if (w == 0.0) continue;
        const int pop_a = std::popcount(s & mask_a);
        const int pop_b = std::popcount(s & mask_all & ~mask_a);
        const double m =
            2.0 * (pop_a - pop_b - 0.5 * (n_a - n_b)) / static_cast<double>(n);
        sum += w * m * m;
    }
    return sum;
}

double energy_expectation(const RydbergHamiltonian& hamiltonian, const StateVector& psi,
                          double omega, double delta, int threads) {
    check_state(psi);
    if (psi.n_sites != hamiltonian.n_sites())
        throw std::invalid_argument("energy_expectation: state does not match Hamiltonian");
    std::vector<std::complex<double>> h_psi(psi.amp.size());
    hamiltonian.apply(psi.amp, h_psi, omega, delta, threads);
    double e = 0.0;
    for (std::size_t s = 0; s < psi.amp.size(); ++s)
        e += psi.amp[s].real() * h_psi[s].real() + psi.amp[s].imag() * h_psi[s].imag();
    return e;
}

} // namespace kzc::rydberg
