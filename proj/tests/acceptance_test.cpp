// Acceptance suite: one case per criterion, each printing a PASS/FAIL line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

#include "spikeloom/experiments.hpp"

using namespace spikeloom;
using stream::Attribute;
using stream::CodeScheme;
using stream::OpKind;
using stream::StreamOp;

namespace {

void verdict(int criterion, const char* name, bool ok) {
  std::printf("[acceptance] %d %-28s %s\n", criterion, name, ok ? "PASS" : "FAIL");
  std::fflush(stdout);
  CHECK_MESSAGE(ok, "criterion ", criterion, " (", name, ") failed");
}

experiments::ScenarioRun run_demo(CodeScheme scheme) {
  return experiments::run_scenario(stream::primes_demo_scenario(scheme));
}

// Answer events per retrieved value across the demo run.
struct AnswerSets {
  std::set<int> pi, npi;
  bool in_window = true;
};

AnswerSets collect_answers(const experiments::ScenarioRun& result) {
  AnswerSets sets;
  const std::int64_t period = result.pm.period_ms();
  for (const auto& slot : result.compiled.slots) {
    if (slot.op.op != OpKind::Retrieve) continue;
    if (result.raster.spiked_in(result.dm.pi_ans, slot.phi1_ms, slot.phi1_ms + period)) {
      sets.pi.insert(slot.op.value);
    }
    if (result.raster.spiked_in(result.dm.npi_ans, slot.phi1_ms, slot.phi1_ms + period)) {
      sets.npi.insert(slot.op.value);
    }
  }
  return sets;
}

}  // namespace

TEST_CASE("criterion 1: selector truth-table equivalence") {
  const auto result = experiments::run_selector_truthtable(2);
  const bool ok = result.all_match && result.rows.size() == 64 && result.one_hot_ok &&
                  result.timing_ok && result.elapsed_seconds < 10.0;
  verdict(1, "selector 64/64 vs oracle", ok);
  CHECK(result.matches == 64);
  CHECK(result.elapsed_seconds < 10.0);
}

TEST_CASE("criterion 2: decoder equivalence and one-hot output") {
  const auto result = experiments::run_decoder_truthtable(2);
  const bool ok =
      result.all_match && result.rows.size() == 8 && result.one_hot_ok && result.timing_ok;
  verdict(2, "decoder 8/8 vs oracle", ok);
}

TEST_CASE("criterion 3: function generator covers all 16 Boolean functions") {
  const auto result = experiments::run_function_generator_suite();
  const bool ok = result.functions_checked == 16 && result.evaluations == 64 && result.all_match;
  verdict(3, "function generator 16x4", ok);
}

TEST_CASE("criterion 4: primes demo reproduction in binary") {
  const auto result = run_demo(CodeScheme::Binary);
  const auto sets = collect_answers(result);
  const std::set<int> want_pi{3, 7, 2, 5, 11, 13};
  const std::set<int> want_npi{0, 8, 4, 1, 12, 6, 9};
  const bool ok = result.report.pass() && sets.pi == want_pi && sets.npi == want_npi;
  verdict(4, "primes binary, 0 mismatches", ok);
  CHECK(result.report.mismatches == 0);
  CHECK(sets.pi == want_pi);
  CHECK(sets.npi == want_npi);
}

TEST_CASE("criterion 5: primes demo reproduction in gray code") {
  const auto result = run_demo(CodeScheme::Gray);
  const auto sets = collect_answers(result);
  const std::set<int> want_pi{3, 7, 2, 5, 11, 13};
  const std::set<int> want_npi{0, 8, 4, 1, 12, 6, 9};
  const bool cells_swapped =
      memory::cell_index(stream::encode_value(2, CodeScheme::Gray)) == 3 &&
      memory::cell_index(stream::encode_value(3, CodeScheme::Gray)) == 2;
  const bool ok =
      result.report.pass() && sets.pi == want_pi && sets.npi == want_npi && cells_swapped;
  verdict(5, "primes gray, cells swapped", ok);
  CHECK(result.report.mismatches == 0);
  CHECK(cells_swapped);
}

TEST_CASE("criterion 6: memory properties over 200 random op sequences") {
  std::mt19937 gen(2024);
  std::uniform_int_distribution<int> value(0, 15);
  std::uniform_int_distribution<int> length(8, 48);
  std::uniform_int_distribution<int> pick(0, 99);

  int sequences_checked = 0;
  int double_retrieves_checked = 0;
  bool all_match = true;
  bool reads_non_destructive = true;

  for (int trial = 0; trial < 200 && all_match; ++trial) {
    const CodeScheme scheme = trial % 2 ? CodeScheme::Gray : CodeScheme::Binary;
    stream::Scenario sc;
    sc.scheme = scheme;
    const int len = length(gen);
    while (static_cast<int>(sc.ops.size()) < len) {
      StreamOp op;
      op.value = value(gen);
      const int p = pick(gen);
      if (p < 45) {
        op.op = OpKind::Store;
        op.attribute = pick(gen) < 50 ? Attribute::Prime : Attribute::NonPrime;
      } else if (p < 80) {
        op.op = OpKind::Retrieve;
      } else {
        op.op = OpKind::Erase;
      }
      sc.ops.push_back(op);
      // Bias toward double retrieves so non-destructive reads are exercised.
      if (op.op == OpKind::Retrieve && pick(gen) < 30 &&
          static_cast<int>(sc.ops.size()) < len) {
        sc.ops.push_back(op);
      }
    }

    const auto result = experiments::run_scenario(sc);
    ++sequences_checked;
    if (!result.report.pass()) all_match = false;

    for (std::size_t i = 1; i < sc.ops.size(); ++i) {
      const auto& prev = sc.ops[i - 1];
      const auto& cur = sc.ops[i];
      if (prev.op == OpKind::Retrieve && cur.op == OpKind::Retrieve &&
          prev.value == cur.value) {
        ++double_retrieves_checked;
        const auto& a = result.report.rows[i - 1];
        const auto& b = result.report.rows[i];
        if (a.observed_pi != b.observed_pi || a.observed_npi != b.observed_npi) {
          reads_non_destructive = false;
        }
      }
    }
  }

  const bool ok = all_match && reads_non_destructive && sequences_checked == 200 &&
                  double_retrieves_checked > 50;
  verdict(6, "200 random sequences vs oracle", ok);
  CHECK(all_match);
  CHECK(reads_non_destructive);
  CHECK(double_retrieves_checked > 50);
}

TEST_CASE("criterion 7: pacemaker timing and trapped-spike phase bookkeeping") {
  Circuit c;
  const auto pm = blocks::build_pacemaker(c, 5, 20);
  const Raster raster = run(c, 1201);
  const auto phi1 = raster.times_of(pm.phase_neurons[0]);
  bool timing_ok = phi1.size() >= 11;
  for (std::size_t i = 1; i < phi1.size(); ++i) {
    if (phi1[i] - phi1[i - 1] != 100) timing_ok = false;
  }

  // Trapped-spike phases against the bookkeeping function, n = 5 and n = 4.
  bool phases_ok = true;
  for (int phases : {5, 4}) {
    Circuit cc;
    const auto cpm = blocks::build_pacemaker(cc, phases, 20);
    const auto cell = memory::build_memory_cell(cc, cpm, 1);
    cc.schedule_spike(cell.enable, cpm.onset(1, 3));
    cc.schedule_spike(cell.m_in, cpm.onset(1, 3));
    cc.schedule_spike(cell.bit_in[0], cpm.onset(1, 3));
    const Raster r = run(cc, cpm.phi1(14));
    const auto a_times = r.times_of(cell.a[0]);
    if (a_times.size() < 10) {
      phases_ok = false;
      continue;
    }
    const int store_phase =
        static_cast<int>(((a_times[0] - cpm.t0) % cpm.period_ms()) / cpm.delta_t_ms) + 1;
    for (std::size_t k = 0; k < a_times.size(); ++k) {
      const int got =
          static_cast<int>(((a_times[k] - cpm.t0) % cpm.period_ms()) / cpm.delta_t_ms) + 1;
      if (got != memory::trapped_a_phase(store_phase, static_cast<int>(k), phases)) {
        phases_ok = false;
      }
    }
  }

  verdict(7, "pacemaker 100 ms + phase drift", timing_ok && phases_ok);
  CHECK(timing_ok);
  CHECK(phases_ok);
}

TEST_CASE("criterion 8: noise robustness with a nonzero tolerated sigma") {
  const std::vector<double> sigmas{0.0, 0.005, 0.01, 0.02, 0.03, 0.05, 0.08, 0.13, 0.2, 0.35};
  const auto scenario = stream::primes_demo_scenario(CodeScheme::Binary);
  const auto sweep = experiments::run_noise_sweep(scenario, sigmas, 10);

  bool sorted = true;
  for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
    if (sweep.rows[i].sigma < sweep.rows[i - 1].sigma) sorted = false;
  }
  const bool ok = sweep.baseline_pass && sweep.sigma_star > 0.0 && sweep.monotone && sorted;
  std::printf("[acceptance]   sweep:");
  for (const auto& row : sweep.rows) {
    std::printf(" %.3f->%.2f", row.sigma, row.tx_pass_rate());
  }
  std::printf("  sigma*=%.3f\n", sweep.sigma_star);
  verdict(8, "noise sweep, sigma* > 0", ok);
  CHECK(sweep.baseline_pass);
  CHECK(sweep.sigma_star > 0.0);
  CHECK(sweep.monotone);
}

TEST_CASE("criterion 9: AND fan-in guard") {
  Circuit c;
  bool rejected = false;
  try {
    blocks::build_and_gate(c, 5);
  } catch (const BuildError&) {
    rejected = true;
  }

  Circuit gate_circuit;
  const auto gate = blocks::build_and_gate(gate_circuit, 4);
  for (NeuronId in : gate.inputs) gate_circuit.schedule_spike(in, 10);
  std::int64_t t = 100;
  for (int skip = 0; skip < 4; ++skip, t += 50) {
    for (int i = 0; i < 4; ++i) {
      if (i != skip) gate_circuit.schedule_spike(gate.inputs[static_cast<std::size_t>(i)], t);
    }
  }
  const Raster raster = run(gate_circuit, t + 60);
  const bool fires_on_four =
      raster.times_of(gate.output) ==
      std::vector<std::int64_t>{10 + gate_circuit.delta_t_ms()};

  verdict(9, "AND gate fan-in limit", rejected && fires_on_four);
  CHECK(rejected);
  CHECK(fires_on_four);
}
