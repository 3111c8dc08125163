#include <benchmark/benchmark.h>

#include "crnoma/analysis.hpp"
#include "crnoma/ladder.hpp"
#include "crnoma/rng.hpp"
#include "crnoma/schedule.hpp"
#include "crnoma/simulate.hpp"

namespace {

using namespace crnoma;

SystemParams bench_params(int users) {
  SystemParams p;
  p.rate_bpcu = 1.0;
  p.snr_linear = 100.0;  // 20 dB
  p.num_secondary = users;
  p.slots_per_frame = 8;
  p.slot_seconds = 2.0;
  return p;
}

void BM_BuildLadder(benchmark::State& state) {
  const SystemParams p = bench_params(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_ladder(p, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_BuildLadder)->Arg(8)->Arg(50);

void BM_SupportedLevels(benchmark::State& state) {
  RngStream stream(1);
  const SystemParams p = bench_params(8);
  const double eps = p.epsilon();
  for (auto _ : state) {
    const double budget = p.snr_linear * stream.exponential() / eps - 1.0;
    benchmark::DoNotOptimize(supported_levels_from_budget(eps, budget));
  }
}
BENCHMARK(BM_SupportedLevels);

void BM_KPmf(benchmark::State& state) {
  const SystemParams p = bench_params(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(k_pmf(p, 1e-12));
  }
}
BENCHMARK(BM_KPmf);

void BM_SumRateClosedForm(benchmark::State& state) {
  const SystemParams p = bench_params(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sum_rate_closed_form(p));
  }
}
BENCHMARK(BM_SumRateClosedForm)->Arg(8)->Arg(64);

void BM_AoiClosedForm(benchmark::State& state) {
  const SystemParams p = bench_params(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aoi_crnoma(p));
  }
}
BENCHMARK(BM_AoiClosedForm)->Arg(3)->Arg(8)->Arg(64);

void BM_ScheduleRandom(benchmark::State& state) {
  const SystemParams p = bench_params(8);
  const SnrLadder ladder = build_ladder(p, 8);
  RngStream stream(1);
  std::vector<ChannelGain> users(8);
  for (auto& u : users) u = sample_channel(stream);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        schedule_random(ladder, p.snr_linear, 5, users, stream));
  }
}
BENCHMARK(BM_ScheduleRandom);

void BM_SimulateSumRate(benchmark::State& state) {
  const SystemParams p = bench_params(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_sum_rate(p, Scheduler::random, state.range(0), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateSumRate)->Arg(1 << 14);

void BM_SimulateAoi(benchmark::State& state) {
  const SystemParams p = bench_params(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_aoi(p, AoiScheme::crnoma, state.range(0), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateAoi)->Arg(1 << 12);

}  // namespace

BENCHMARK_MAIN();
