#include <benchmark/benchmark.h>

#include "spikeloom/experiments.hpp"

using namespace spikeloom;

static void BM_Calibration(benchmark::State& state) {
  const NeuronSpec spec = blocks::default_block_neuron();
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate(spec, 1.2));
  }
}
BENCHMARK(BM_Calibration);

static void BM_DraftMemoryTick(benchmark::State& state) {
  Circuit circuit;
  auto pm = blocks::build_pacemaker(circuit, 5, 20);
  auto dm = memory::build_draft_memory(circuit, pm);
  auto scenario = stream::primes_demo_scenario(stream::CodeScheme::Binary);
  stream::schedule_stream(circuit, stream::compile_stream(scenario.ops, scenario.scheme, pm));

  Simulator sim(circuit);
  std::int64_t ticks = 0;
  for (auto _ : state) {
    sim.step();
    ++ticks;
  }
  state.SetItemsProcessed(ticks * static_cast<std::int64_t>(circuit.neuron_count()));
}
BENCHMARK(BM_DraftMemoryTick)->Unit(benchmark::kMicrosecond);

static void BM_PrimesDemoBinary(benchmark::State& state) {
  const auto scenario = stream::primes_demo_scenario(stream::CodeScheme::Binary);
  for (auto _ : state) {
    auto result = experiments::run_scenario(scenario);
    benchmark::DoNotOptimize(result.report.mismatches);
  }
}
BENCHMARK(BM_PrimesDemoBinary)->Unit(benchmark::kMillisecond);

static void BM_SelectorTruthtable(benchmark::State& state) {
  for (auto _ : state) {
    auto result = experiments::run_selector_truthtable(2);
    benchmark::DoNotOptimize(result.matches);
  }
}
BENCHMARK(BM_SelectorTruthtable)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
