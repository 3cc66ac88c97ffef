#include "jostlab/jost.hpp"
#include "jostlab/oracle.hpp"
#include "jostlab/propagator.hpp"
#include "jostlab/scattering.hpp"
#include "jostlab/wavefunction.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace jostlab;

namespace {

SampledPotential square_well() {
    return build_potential(PotentialSpec::square_well(1.0, 1.0), SpatialGrid::desk_default());
}

void BM_JostSolve(benchmark::State& state) {
    const auto V = square_well();
    JostOptions o;
    o.scheme = state.range(0) == 0 ? JostScheme::magnus4 : JostScheme::volterra_trapezoid;
    const JostSolver solver(V, o);
    for (auto _ : state) benchmark::DoNotOptimize(solver.solve(2.0, Direction::plus));
}
BENCHMARK(BM_JostSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ScatteringTable(benchmark::State& state) {
    const auto V = square_well();
    std::vector<double> lambdas(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < lambdas.size(); ++i) lambdas[i] = 0.05 + 10.0 * i / lambdas.size();
    for (auto _ : state) benchmark::DoNotOptimize(scattering_table(V, lambdas));
}
BENCHMARK(BM_ScatteringTable)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_FreeResolventApply(benchmark::State& state) {
    const SpatialGrid g = SpatialGrid::desk_default();
    const auto psi = InitialState::gaussian().sample(g);
    for (auto _ : state) benchmark::DoNotOptimize(apply_free_resolvent(g, 3.0, psi));
}
BENCHMARK(BM_FreeResolventApply)->Unit(benchmark::kMicrosecond);

void BM_Born(benchmark::State& state) {
    const auto V = square_well();
    const auto psi = InitialState::gaussian().sample(V.grid());
    const int K = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(born_resolvent(V, 4.0, psi, psi, K));
}
BENCHMARK(BM_Born)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_EvolveAc(benchmark::State& state) {
    const auto V = square_well();
    const auto psi = InitialState::gaussian().sample(V.grid());
    const CutoffSpec cutoff = CutoffSpec::for_potential(V);
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(evolve_ac(V, psi, t, cutoff));
}
BENCHMARK(BM_EvolveAc)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_OracleDecompose(benchmark::State& state) {
    const SpatialGrid g(-40.0, 40.0, static_cast<std::size_t>(state.range(0)));
    const auto H = discretize(PotentialSpec::square_well(1.0, 1.0), g);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(H));
}
BENCHMARK(BM_OracleDecompose)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
