#include <benchmark/benchmark.h>

#include "rydberg/beam.hpp"
#include "rydberg/lifetime.hpp"
#include "rydberg/numerics.hpp"
#include "rydberg/stark.hpp"

using namespace rydberg;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_StarkSweep(benchmark::State& state) {
    const auto basis = make_stark_basis(species::sodium(), HalfInteger(1), 33, 40);
    const auto fields = linspace(0.0, 10.0, 50);
    const StarkOperator op(basis, mode(state));
    for (auto _ : state) benchmark::DoNotOptimize(stark_map(op, fields, mode(state)));
    state.counters["states"] = static_cast<double>(basis.states.size());
}
BENCHMARK(BM_StarkSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StarkOperator(benchmark::State& state) {
    const auto basis = make_stark_basis(species::sodium(), HalfInteger(1), 33, 40);
    for (auto _ : state) benchmark::DoNotOptimize(StarkOperator(basis, mode(state)));
}
BENCHMARK(BM_StarkOperator)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BeamMonteCarlo(benchmark::State& state) {
    const auto cfg = default_beam_config(TransitionKind::one_photon);
    const auto drive = default_beam_drive(TransitionKind::one_photon);
    const auto det = linspace(-500e3, 500e3, 21);
    for (auto _ : state) benchmark::DoNotOptimize(beam_monte_carlo(cfg, drive, det, 2000, 1, mode(state)));
}
BENCHMARK(BM_BeamMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DecayChannels(benchmark::State& state) {
    const auto s = RydbergState(species::sodium(), 30, 1, HalfInteger(1));
    for (auto _ : state) {
        WavefunctionCache cache;
        benchmark::DoNotOptimize(decay_channels(s, 300.0, 5, cache, mode(state)));
    }
}
BENCHMARK(BM_DecayChannels)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
