// Microbenchmarks for the kernels that dominate wall time: Monte Carlo
// sweeps, structure-factor accumulation, defect counting, free-fermion ramp
// integration, many-body Hamiltonian application, and the scaling-function
// evaluators. Run with --benchmark_min_time=... to tighten statistics.

#include <benchmark/benchmark.h>

#include "kzc/est/correlation.hpp"
#include "kzc/est/defects.hpp"
#include "kzc/ising2d/lattice.hpp"
#include "kzc/rydberg/evolve.hpp"
#include "kzc/scaling/functions.hpp"
#include "kzc/tfim/ramp.hpp"

#include <complex>
#include <vector>

namespace {

void BM_GlauberSweep(benchmark::State& state) {
    const int l = static_cast<int>(state.range(0));
    auto lattice = kzc::ising2d::SpinLattice::random(l, l, 42);
    for (auto _ : state) lattice.glauber_sweep(kzc::ising2d::kTc);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(l) * l);
}
BENCHMARK(BM_GlauberSweep)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_StructureFactor(benchmark::State& state) {
    const int l = static_cast<int>(state.range(0));
    const auto lattice = kzc::ising2d::SpinLattice::random(l, l, 42);
    kzc::est::Field2D field{l, l, std::vector<double>(lattice.spins().begin(),
                                                      lattice.spins().end())};
    for (auto _ : state) benchmark::DoNotOptimize(kzc::est::structure_factor(field));
}
BENCHMARK(BM_StructureFactor)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_DefectLength2D(benchmark::State& state) {
    const int l = static_cast<int>(state.range(0));
    const auto lattice = kzc::ising2d::SpinLattice::random(l, l, 42);
    for (auto _ : state)
        benchmark::DoNotOptimize(kzc::est::defect_length_2d(lattice.spins(), l, l,
                                                            kzc::est::Channel::ferromagnetic));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(l) * l);
}
BENCHMARK(BM_DefectLength2D)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_TfimRamp(benchmark::State& state) {
    kzc::tfim::ChainSpec spec;
    spec.L = static_cast<int>(state.range(0));
    spec.tau = 50.0;
    for (auto _ : state) benchmark::DoNotOptimize(kzc::tfim::ramp_simulate(spec));
    state.SetItemsProcessed(state.iterations() * state.range(0) / 2); // momentum modes
}
BENCHMARK(BM_TfimRamp)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_RydbergApply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const kzc::rydberg::ArrayGeometry geom{4, n / 4, 1.0};
    const kzc::rydberg::RydbergHamiltonian ham(geom, {});
    std::vector<std::complex<double>> x(ham.dim(), {1.0, 0.5}), y(ham.dim());
    for (auto _ : state) {
        ham.apply(x, y, 1.0, 1.5);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ham.dim()));
}
BENCHMARK(BM_RydbergApply)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_RydbergEvolveUnit(benchmark::State& state) {
    using namespace kzc::rydberg;
    const ArrayGeometry geom{4, 4, 1.0};
    const RydbergHamiltonian ham(geom, {1.0, 2.0, 1.1, 2});
    const auto schedule = DriveSchedule::constant(1.0, 2.0, 0.0, 1.0);
    const std::vector<double> no_snaps;
    for (auto _ : state) {
        StateVector psi = prepare_domain_wall(geom, DetuningMask::rectangle(geom, 1, 1, 2, 2));
        evolve(ham, schedule, psi, no_snaps, [](const StateVector&) {});
        benchmark::DoNotOptimize(psi.amp.data());
    }
}
BENCHMARK(BM_RydbergEvolveUnit)->Unit(benchmark::kMillisecond);

void BM_EvalF(benchmark::State& state) {
    kzc::scaling::ScalingModel m;
    m.exponents = kzc::scaling::builtin_exponents().at("ising-2+1d");
    m.amplitudes = {{"f_minus", 1.0}, {"f_plus", 0.8}, {"f_inf", 2.0}};
    m.x_c = 0.8;
    double acc = 0.0;
    for (auto _ : state) {
        for (int i = 0; i < 1000; ++i)
            acc += kzc::scaling::eval_F(m, -2.0 + 0.05 * i, 0.9);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_EvalF);

} // namespace

BENCHMARK_MAIN();
