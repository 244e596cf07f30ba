/**
 * Serial reference vs OpenMP sweep on the default operating point.
 */

#include <benchmark/benchmark.h>

#include "coopdstc/config_io.hpp"
#include "coopdstc/sweep.hpp"

namespace {

coopdstc::SimConfig bench_config(std::int64_t packets)
{
    auto c = coopdstc::parse_config("snr=4:12:4");
    c.packets = static_cast<int>(packets);
    return c;
}

void BM_SweepSerial(benchmark::State& state)
{
    const auto config = bench_config(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(coopdstc::run_sweep_serial(config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 3);
}

void BM_SweepOpenMP(benchmark::State& state)
{
    const auto config = bench_config(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(coopdstc::run_sweep(config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 3);
}

} // namespace

BENCHMARK(BM_SweepSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepOpenMP)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
