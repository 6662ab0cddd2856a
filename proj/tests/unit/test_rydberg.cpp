#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kzc/common/rng.hpp"
#include "kzc/rydberg/evolve.hpp"
#include "kzc/rydberg/geometry.hpp"
#include "kzc/rydberg/hamiltonian.hpp"
#include "kzc/rydberg/observables.hpp"
#include "kzc/rydberg/state_io.hpp"

using namespace kzc;
using namespace kzc::rydberg;

namespace {

std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        std::string tmpl = (std::filesystem::temp_directory_path() / "kzc-ryd-XXXXXX").string();
        if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
        return std::filesystem::path(tmpl);
    }();
    return dir;
}

ArrayGeometry grid(int rows, int cols, double spacing = 1.0) {
    ArrayGeometry g;
    g.rows = rows;
    g.cols = cols;
    g.spacing = spacing;
    return g;
}

/// Independent reference: y = H x computed from the pair list and bit
/// arithmetic alone, no shared code with RydbergHamiltonian::apply.
std::vector<std::complex<double>> apply_reference(const ArrayGeometry& geometry,
                                                  std::span<const PairCoupling> pairs,
                                                  std::span<const std::complex<double>> x,
                                                  double omega, double delta) {
    const int n = geometry.n_sites();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<std::complex<double>> y(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (int i = 0; i < n; ++i)
            if (s >> i & 1) diag -= delta;
        for (const auto& pc : pairs)
            if ((s >> pc.i & 1) && (s >> pc.j & 1)) diag += pc.v;
        std::complex<double> acc = diag * x[s];
        for (int i = 0; i < n; ++i) acc += 0.5 * omega * x[s ^ (std::size_t{1} << i)];
        y[s] = acc;
    }
    return y;
}

StateVector random_state(int n_sites, std::uint64_t seed) {
    StateVector psi;
    psi.n_sites = n_sites;
    psi.amp.resize(std::size_t{1} << n_sites);
    Rng rng(seed);
    for (auto& a : psi.amp) a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    psi.normalize();
    return psi;
}

} // namespace

// ---------------------------------------------------------------------------
// geometry and couplings
// ---------------------------------------------------------------------------

TEST_CASE("sites are laid out row-major on a square grid") {
    const ArrayGeometry g = grid(2, 3, 1.5);
    CHECK(g.n_sites() == 6);
    CHECK(g.position(0) == std::pair{0.0, 0.0});
    CHECK(g.position(2) == std::pair{3.0, 0.0});
    CHECK(g.position(4) == std::pair{1.5, 1.5});
    CHECK_NOTHROW(g.validate());
    CHECK_NOTHROW(grid(4, 6).validate()); // exactly the 24-site cap
    CHECK_THROWS_AS(grid(5, 5).validate(), std::invalid_argument);
    CHECK_THROWS_AS(grid(0, 3).validate(), std::invalid_argument);
    CHECK_THROWS_AS(grid(2, 3, -1.0).validate(), std::invalid_argument);
}

TEST_CASE("interaction shells keep exactly the intended neighbor distances") {
    const ArrayGeometry g = grid(2, 3);
    RydbergParams params;
    params.omega = 1.0;
    params.rb_over_a = 1.1;

    params.shells = 1; // nearest neighbors only: 4 horizontal + 3 vertical
    CHECK(interaction_pairs(g, params).size() == 7);

    params.shells = 2; // adds the 4 diagonals
    const auto pairs = interaction_pairs(g, params);
    CHECK(pairs.size() == 11);

    params.shells = 0; // everything: C(6,2)
    CHECK(interaction_pairs(g, params).size() == 15);

    // V0 = omega (R_b/a)^6 = 1.1^6 on nearest neighbors, V0/8 on diagonals.
    const double v0 = 1.771561;
    bool saw_nn = false, saw_diag = false;
    int prev_i = -1, prev_j = -1;
    for (const auto& pc : pairs) {
        CHECK(pc.i < pc.j);
        CHECK((pc.i > prev_i || (pc.i == prev_i && pc.j > prev_j))); // (i, j) ordered
        prev_i = pc.i;
        prev_j = pc.j;
        if (pc.i == 0 && pc.j == 1) {
            CHECK(pc.v == doctest::Approx(v0).epsilon(1e-12));
            saw_nn = true;
        }
        if (pc.i == 0 && pc.j == 4) {
            CHECK(pc.v == doctest::Approx(v0 / 8.0).epsilon(1e-12));
            saw_diag = true;
        }
    }
    CHECK(saw_nn);
    CHECK(saw_diag);

    // Scaling the lattice constant must not change couplings in shell units.
    params.shells = 2; // back to the list `pairs` was built with
    const auto scaled = interaction_pairs(grid(2, 3, 2.5), params);
    REQUIRE(scaled.size() == pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k)
        CHECK(scaled[k].v == doctest::Approx(pairs[k].v).epsilon(1e-12));
}

// ---------------------------------------------------------------------------
// states and observables
// ---------------------------------------------------------------------------

TEST_CASE("checkerboard product states occupy one sublattice exactly") {
    const ArrayGeometry g = grid(2, 3);
    const auto occ = checkerboard_pattern(g, true);
    CHECK(occ == std::vector<std::uint8_t>{1, 0, 1, 0, 1, 0});
    const StateVector psi = product_state(g, occ);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(psi.amp[0b010101].real() == 1.0);

    const auto dens = site_densities(psi);
    REQUIRE(dens.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(dens[i] == doctest::Approx(occ[i]).epsilon(1e-14));

    CHECK(staggered_magnetization(psi, g) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(staggered_m2(psi, g) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(excess_density(psi, occ) == doctest::Approx(0.0).epsilon(1e-14));

    const auto other = checkerboard_pattern(g, false);
    CHECK(excess_density(psi, other) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(staggered_magnetization(product_state(g, other), g) ==
          doctest::Approx(-1.0).epsilon(1e-14));

    auto one_off = occ;
    one_off[3] = 1;
    CHECK(excess_density(psi, one_off) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("a symmetric superposition has zero mean but unit squared order") {
    const ArrayGeometry g = grid(2, 2);
    StateVector psi;
    psi.n_sites = 4;
    psi.amp.assign(16, {0.0, 0.0});
    const double r = 1.0 / std::sqrt(2.0);
    psi.amp[0b0110] = r; // one checkerboard (sites 1, 2)
    psi.amp[0b1001] = r; // the other (sites 0, 3)
    CHECK(staggered_magnetization(psi, g) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(staggered_m2(psi, g) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("domain preparation inverts the masked region of the checkerboard") {
    const ArrayGeometry g = grid(3, 4);
    const DetuningMask mask = DetuningMask::rectangle(g, 1, 1, 2, 2);
    const StateVector psi = prepare_domain_wall(g, mask);
    const auto dens = site_densities(psi);
    const auto cb = checkerboard_pattern(g, true);
    for (int site = 0; site < 12; ++site) {
        const int row = site / 4, col = site % 4;
        const bool flipped = row >= 1 && row <= 2 && col >= 1 && col <= 2;
        const double want = flipped ? 1.0 - cb[site] : cb[site];
        CHECK(dens[site] == doctest::Approx(want).epsilon(1e-14));
    }
    CHECK_THROWS_AS(DetuningMask::rectangle(g, 2, 2, 2, 2), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Hamiltonian action
// ---------------------------------------------------------------------------

TEST_CASE("matrix-free apply matches an independent bit-arithmetic reference") {
    const ArrayGeometry g = grid(2, 4);
    RydbergParams params;
    params.delta = 1.3;
    params.rb_over_a = 1.2;
    params.shells = 2;
    const RydbergHamiltonian h(g, params);
    CHECK(h.n_sites() == 8);
    CHECK(h.dim() == 256);

    const StateVector x = random_state(8, 7);
    std::vector<std::complex<double>> y(256);
    h.apply(x.amp, y, 0.9, -0.7);
    const auto ref = apply_reference(g, h.pairs(), x.amp, 0.9, -0.7);
    for (std::size_t s = 0; s < 256; ++s) CHECK(std::abs(y[s] - ref[s]) < 1e-13);

    // Hermiticity: <u|H v> = conj(<v|H u>).
    const StateVector u = random_state(8, 8);
    std::vector<std::complex<double>> hu(256);
    h.apply(u.amp, hu, 0.9, -0.7);
    std::complex<double> uhv = 0.0, vhu = 0.0;
    for (std::size_t s = 0; s < 256; ++s) {
        uhv += std::conj(u.amp[s]) * y[s];
        vhu += std::conj(x.amp[s]) * hu[s];
    }
    CHECK(std::abs(uhv - std::conj(vhu)) < 1e-12);

    // Threaded apply is bitwise identical.
    std::vector<std::complex<double>> y3(256);
    h.apply(x.amp, y3, 0.9, -0.7, 3);
    for (std::size_t s = 0; s < 256; ++s) CHECK(y[s] == y3[s]);

    // diag_entry agrees with the reference applied to basis vectors.
    for (std::size_t s : {std::size_t{0}, std::size_t{21}, std::size_t{255}}) {
        std::vector<std::complex<double>> e(256, {0.0, 0.0});
        e[s] = 1.0;
        const auto he = apply_reference(g, h.pairs(), e, 0.9, -0.7);
        CHECK(h.diag_entry(s, -0.7) == doctest::Approx(he[s].real()).epsilon(1e-13));
    }
}

TEST_CASE("the checkerboard diagonal energy is the hand-computed value") {
    // 2x3 checkerboard (3 occupied): no occupied nearest neighbors, two
    // occupied diagonals: E = -3 delta + 2 V0 / 8 with V0 = 1.1^6.
    const ArrayGeometry g = grid(2, 3);
    RydbergParams params; // rb_over_a = 1.1, shells = 2
    const RydbergHamiltonian h(g, params);
    const double delta = 2.0;
    const double expect = -3.0 * delta + 2.0 * 1.771561 / 8.0;
    CHECK(h.diag_entry(0b010101, delta) == doctest::Approx(expect).epsilon(1e-12));
    const StateVector psi = product_state(g, checkerboard_pattern(g, true));
    CHECK(energy_expectation(h, psi, 1.0, delta) == doctest::Approx(expect).epsilon(1e-12));
}

// ---------------------------------------------------------------------------
// time evolution
// ---------------------------------------------------------------------------

TEST_CASE("a single driven atom Rabi-oscillates exactly") {
    const ArrayGeometry g = grid(1, 1);
    const RydbergHamiltonian h(g, RydbergParams{});
    StateVector psi = product_state(g, std::vector<std::uint8_t>{0});

    SUBCASE("resonant drive") {
        const DriveSchedule sched = DriveSchedule::constant(1.0, 0.0, 0.0, 6.0);
        const std::vector<double> times{1.0, 2.5, 6.0};
        std::size_t idx = 0;
        evolve(h, sched, psi, times, [&](const StateVector& s) {
            const double p1 = std::norm(s.amp[1]);
            CHECK(p1 == doctest::Approx(std::pow(std::sin(s.time / 2.0), 2)).epsilon(1e-7));
            CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
            ++idx;
        });
        CHECK(idx == 3);
        CHECK(psi.time == 6.0);
    }

    SUBCASE("detuned drive") {
        // H = [[0, 1/2], [1/2, -delta]]: generalized Rabi frequency
        // sqrt(1 + delta^2), visiting P1_max = 1 / (1 + delta^2).
        const double delta = 1.3;
        const double omega_r = std::sqrt(1.0 + delta * delta);
        const DriveSchedule sched = DriveSchedule::constant(1.0, delta, 0.0, 5.0);
        const std::vector<double> times{1.0, 3.0, 5.0};
        evolve(h, sched, psi, times, [&](const StateVector& s) {
            const double want =
                std::pow(std::sin(omega_r * s.time / 2.0) / omega_r, 2);
            CHECK(std::norm(s.amp[1]) == doctest::Approx(want).epsilon(1e-7));
        });
    }
}

TEST_CASE("a slow detuning sweep follows the instantaneous ground state") {
    // Landau-Zener channel closed: p_excited = exp(-pi omega^2 / |ddelta/dt|)
    // = e^(-5 pi) here, so starting in the exact dressed ground state the
    // final density must match the adiabatic value.
    const ArrayGeometry g = grid(1, 1);
    const RydbergHamiltonian h(g, RydbergParams{});

    // Ground state of [[0, 1/2], [1/2, -delta0]] at delta0 = -6.
    const double delta0 = -6.0;
    const double e_gs = 0.5 * (-delta0 - std::hypot(delta0, 1.0));
    StateVector psi;
    psi.n_sites = 1;
    psi.amp = {std::complex<double>(0.5, 0.0), std::complex<double>(e_gs, 0.0)};
    psi.normalize();

    DriveSchedule sched;
    sched.segments.push_back({0.0, 60.0, 1.0, 1.0, delta0, 6.0}); // |ddelta/dt| = 0.2
    std::vector<double> dens_end;
    evolve(h, sched, psi, std::vector<double>{60.0},
           [&](const StateVector& s) { dens_end = site_densities(s); });
    const double delta_f = 6.0;
    const double n_ground = 0.5 * (1.0 + delta_f / std::hypot(delta_f, 1.0));
    REQUIRE(dens_end.size() == 1);
    CHECK(dens_end[0] == doctest::Approx(n_ground).epsilon(2e-3));
}

TEST_CASE("constant-drive evolution conserves norm and energy") {
    const ArrayGeometry g = grid(2, 3);
    RydbergParams params;
    params.delta = 1.8;
    const RydbergHamiltonian h(g, params);
    StateVector psi = product_state(g, checkerboard_pattern(g, true));
    const double e0 = energy_expectation(h, psi, 1.0, 1.8);
    const DriveSchedule sched = DriveSchedule::constant(1.0, 1.8, 0.0, 8.0);
    const std::vector<double> times{2.0, 8.0};
    evolve(h, sched, psi, times, [&](const StateVector& s) {
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(energy_expectation(h, s, 1.0, 1.8) == doctest::Approx(e0).epsilon(1e-8));
    });
}

TEST_CASE("evolution agrees between thread counts bit for bit") {
    const ArrayGeometry g = grid(2, 3);
    const RydbergHamiltonian h(g, RydbergParams{});
    const DriveSchedule sched = DriveSchedule::constant(1.0, 0.5, 0.0, 3.0);

    const auto run = [&](int threads) {
        StateVector psi = product_state(g, checkerboard_pattern(g, true));
        EvolveOptions opts;
        opts.threads = threads;
        std::vector<std::complex<double>> out;
        evolve(h, sched, psi, std::vector<double>{3.0},
               [&](const StateVector& s) { out = s.amp; }, opts);
        return out;
    };
    const auto a = run(1);
    const auto b = run(3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("evolve validates its inputs") {
    const ArrayGeometry g = grid(1, 2);
    const RydbergHamiltonian h(g, RydbergParams{});
    const DriveSchedule sched = DriveSchedule::constant(1.0, 0.0, 0.0, 1.0);

    StateVector wrong = random_state(3, 1);
    CHECK_THROWS_AS(evolve(h, sched, wrong, {}, [](const StateVector&) {}),
                    std::invalid_argument);

    StateVector late = random_state(2, 1);
    late.time = 0.5;
    CHECK_THROWS_AS(evolve(h, sched, late, {}, [](const StateVector&) {}),
                    std::invalid_argument);

    StateVector ok = random_state(2, 1);
    const std::vector<double> outside{2.0};
    CHECK_THROWS_AS(evolve(h, sched, ok, outside, [](const StateVector&) {}),
                    std::invalid_argument);

    DriveSchedule gap;
    gap.segments.push_back({0.0, 1.0, 1.0, 1.0, 0.0, 0.0});
    gap.segments.push_back({1.5, 2.0, 1.0, 1.0, 0.0, 0.0});
    CHECK_THROWS_AS(gap.validate(), std::invalid_argument);

    DriveSchedule negative_omega;
    negative_omega.segments.push_back({0.0, 1.0, -1.0, -1.0, 0.0, 0.0});
    CHECK_THROWS_AS(negative_omega.validate(), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// checkpoints
// ---------------------------------------------------------------------------

TEST_CASE("state checkpoints round-trip exactly") {
    StateVector psi = random_state(4, 99);
    psi.time = 3.75;
    const auto path = scratch_dir() / "state.kzry";
    write_state(path, psi);
    const StateVector back = read_state(path);
    CHECK(back.n_sites == 4);
    CHECK(back.time == 3.75);
    REQUIRE(back.amp.size() == 16);
    for (std::size_t i = 0; i < 16; ++i) CHECK(back.amp[i] == psi.amp[i]);
}

TEST_CASE("corrupt checkpoints are rejected") {
    StateVector psi = random_state(3, 5);
    const auto good = scratch_dir() / "good.kzry";
    write_state(good, psi);

    const auto bad_magic = scratch_dir() / "bad.kzry";
    std::filesystem::copy_file(good, bad_magic,
                               std::filesystem::copy_options::overwrite_existing);
    {
        std::fstream f(bad_magic, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(1);
        f.put('!');
    }
    CHECK_THROWS_AS(read_state(bad_magic), std::runtime_error);

    const auto cut = scratch_dir() / "cut.kzry";
    {
        std::ifstream in(good, std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
        std::ofstream out(cut, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 9));
    }
    CHECK_THROWS_AS(read_state(cut), std::runtime_error);
    CHECK_THROWS_AS(read_state(scratch_dir() / "missing.kzry"), std::runtime_error);
}
