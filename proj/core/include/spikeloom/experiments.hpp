#pragma once

#include <cstdint>
#include <vector>

#include "spikeloom/blocks.hpp"
#include "spikeloom/engine.hpp"
#include "spikeloom/memory.hpp"
#include "spikeloom/oracle.hpp"
#include "spikeloom/stream.hpp"

namespace spikeloom::experiments {

struct RunOptions {
  NeuronSpec neuron = blocks::default_block_neuron();
  int phases = 5;
  int delta_t_ms = 20;
  double drive_margin = 1.2;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::int64_t start_cycle = 1;
};

/// Build pacemaker + draft memory, schedule the scenario, simulate, and diff
/// the answer neurons against the reference memory.
struct ScenarioRun {
  Circuit circuit;
  blocks::PacemakerHandle pm;
  memory::DraftMemoryHandle dm;
  stream::CompiledStream compiled;
  Raster raster;
  oracle::Report report;
};

ScenarioRun run_scenario(const stream::Scenario& scenario, const RunOptions& options = {});

/// Exhaustive simulated truth table, one combination per pacemaker cycle.
struct TruthRow {
  unsigned controls = 0;
  unsigned inputs = 0;   // input mask (selector) or single input bit (decoder)
  unsigned expected = 0;  // oracle output (bit for selector, mask for decoder)
  unsigned simulated = 0;
  bool match = false;
};

struct TruthTableResult {
  std::vector<TruthRow> rows;
  int matches = 0;
  bool all_match = false;
  bool one_hot_ok = true;   // at most one C_j / Y_j per cycle
  bool timing_ok = true;    // outputs only on their designated phase onsets
  double elapsed_seconds = 0.0;
};

TruthTableResult run_selector_truthtable(int omega, const RunOptions& options = {});
TruthTableResult run_decoder_truthtable(int omega, const RunOptions& options = {});

/// All 16 two-variable Boolean functions realized by input tying; each
/// function is evaluated on all four control combinations.
struct FunctionGeneratorResult {
  int functions_checked = 0;
  int evaluations = 0;
  int matches = 0;
  bool all_match = false;
};

FunctionGeneratorResult run_function_generator_suite(const RunOptions& options = {});

/// Repeat the primes demo scenario across seeds for each sigma; a run passes when
/// every transaction matches the oracle.
struct SweepRow {
  double sigma = 0.0;
  int runs = 0;
  int full_passes = 0;
  std::int64_t tx_total = 0;
  std::int64_t tx_passed = 0;
  double tx_pass_rate() const { return tx_total == 0 ? 1.0 : double(tx_passed) / double(tx_total); }
  bool full_pass() const { return runs > 0 && full_passes == runs; }
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ascending sigma
  double sigma_star = 0.0;     // largest tested sigma passing across all seeds
  bool baseline_pass = false;  // sigma = 0 row fully passes
  bool monotone = true;        // tx pass rate non-increasing within tolerance
  double monotone_tolerance = 0.1;
};

SweepResult run_noise_sweep(const stream::Scenario& scenario, const std::vector<double>& sigmas,
                            int seeds, const RunOptions& base = {});

}  // namespace spikeloom::experiments
