#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spikeloom/experiments.hpp"
#include "spikeloom/raster_io.hpp"

namespace {

using namespace spikeloom;

struct CommonOptions {
  std::string model = "lif";
  int phases = 5;
  int delta_t = 20;
  double margin = 1.2;
  double sigma = 0.0;
  std::uint64_t seed = 1;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->configurable();
  cmd->fallthrough();
  cmd->add_option("--model", opt.model, "Neuron model: lif or sm")
      ->envname("SPIKELOOM_MODEL")
      ->check(CLI::IsMember({"lif", "sm"}));
  cmd->add_option("--phases", opt.phases, "Pacemaker phase count")->envname("SPIKELOOM_PHASES");
  cmd->add_option("--delta-t", opt.delta_t, "Base propagation delay in ms")
      ->envname("SPIKELOOM_DELTA_T");
  cmd->add_option("--margin", opt.margin, "Synaptic drive margin over theta")
      ->envname("SPIKELOOM_MARGIN");
  cmd->add_option("--sigma", opt.sigma, "Synaptic noise std as a fraction of theta")
      ->envname("SPIKELOOM_SIGMA");
  cmd->add_option("--seed", opt.seed, "RNG seed")->envname("SPIKELOOM_SEED");
}

experiments::RunOptions to_run_options(const CommonOptions& opt) {
  experiments::RunOptions run;
  run.neuron = opt.model == "sm" ? NeuronSpec::simple_model() : blocks::default_block_neuron();
  run.phases = opt.phases;
  run.delta_t_ms = opt.delta_t;
  run.drive_margin = opt.margin;
  run.sigma = opt.sigma;
  run.seed = opt.seed;
  return run;
}

stream::Scenario load_with_override(const std::string& path, const std::string& code_flag) {
  stream::Scenario scenario = stream::load_scenario(path);
  if (code_flag == "binary") scenario.scheme = stream::CodeScheme::Binary;
  if (code_flag == "gray") scenario.scheme = stream::CodeScheme::Gray;
  return scenario;
}

int cmd_run(const std::string& scenario_path, const std::string& code_flag,
            const CommonOptions& common, const std::string& out_raster,
            const std::string& out_svg, const std::string& report_path) {
  stream::Scenario scenario;
  try {
    scenario = load_with_override(scenario_path, code_flag);
  } catch (const stream::ParseError& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return 2;
  }

  auto result = experiments::run_scenario(scenario, to_run_options(common));

  if (!out_raster.empty()) write_csv_file(out_raster, result.raster);
  if (!out_svg.empty()) {
    SvgOptions svg;
    for (NeuronId id : result.dm.address) svg.stream_rows.insert(id);
    for (NeuronId id : {result.dm.m_in, result.dm.r_in, result.dm.e_in, result.dm.npi_in,
                        result.dm.pi_in}) {
      svg.stream_rows.insert(id);
    }
    for (NeuronId id : result.pm.phase_neurons) svg.stream_rows.insert(id);
    svg.top_rows = {result.dm.npi_ans, result.dm.pi_ans};
    write_svg_file(out_svg, result.raster, svg);
  }

  std::ostringstream report_text;
  result.report.write(report_text);
  if (report_path.empty()) {
    std::cout << report_text.str();
  } else {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "cannot open report file: " << report_path << "\n";
      return 2;
    }
    out << report_text.str();
    std::cout << (result.report.pass() ? "all transactions PASS" : "MISMATCHES FOUND") << " ("
              << result.report.rows.size() << " transactions, report written to " << report_path
              << ")\n";
  }
  return result.report.pass() ? 0 : 1;
}

int cmd_truthtable(const std::string& block, int omega, const CommonOptions& common) {
  const auto options = to_run_options(common);
  experiments::TruthTableResult result;
  if (block == "selector") {
    result = experiments::run_selector_truthtable(omega, options);
    std::cout << "S I(mask) expected simulated\n";
  } else {
    result = experiments::run_decoder_truthtable(omega, options);
    std::cout << "S I expected(mask) simulated(mask)\n";
  }
  for (const auto& row : result.rows) {
    std::cout << row.controls << ' ' << row.inputs << ' ' << row.expected << ' ' << row.simulated
              << (row.match ? "" : "  <-- MISMATCH") << '\n';
  }
  std::cout << result.matches << '/' << result.rows.size() << " match"
            << (result.one_hot_ok ? "" : ", one-hot violated")
            << (result.timing_ok ? "" : ", phase timing violated") << " ("
            << result.elapsed_seconds << " s)\n";
  return result.all_match && result.one_hot_ok && result.timing_ok ? 0 : 1;
}

int cmd_sweep(const std::string& scenario_path, const std::string& code_flag,
              const CommonOptions& common, const std::vector<double>& sigmas, int seeds) {
  stream::Scenario scenario;
  if (scenario_path.empty()) {
    scenario = stream::primes_demo_scenario(
        code_flag == "gray" ? stream::CodeScheme::Gray : stream::CodeScheme::Binary);
  } else {
    try {
      scenario = load_with_override(scenario_path, code_flag);
    } catch (const stream::ParseError& e) {
      std::cerr << scenario_path << ": " << e.what() << "\n";
      return 2;
    }
  }

  auto result = experiments::run_noise_sweep(scenario, sigmas, seeds, to_run_options(common));
  std::cout << "sigma full_pass_runs/runs tx_pass_rate\n";
  for (const auto& row : result.rows) {
    std::printf("%.4f %d/%d %.4f\n", row.sigma, row.full_passes, row.runs, row.tx_pass_rate());
  }
  std::printf("sigma_star=%.4f (largest tested sigma passing across all %d seeds)\n",
              result.sigma_star, seeds);
  std::cout << "degradation " << (result.monotone ? "monotone" : "NOT monotone")
            << " within tolerance " << result.monotone_tolerance << "\n";
  return result.baseline_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spikeloom: spiking-assembly blocks and draft-memory simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file ([run]/[truthtable]/[sweep] sections)");

  CommonOptions run_common;
  std::string run_scenario_path, run_code = "file", run_out_raster, run_out_svg, run_report;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario against the draft memory");
  run_cmd->add_option("--scenario", run_scenario_path, "Scenario file")
      ->envname("SPIKELOOM_SCENARIO")
      ->required();
  run_cmd->add_option("--code", run_code, "Override the scenario's code scheme")
      ->envname("SPIKELOOM_CODE")
      ->check(CLI::IsMember({"binary", "gray", "file"}));
  run_cmd->add_option("--out-raster", run_out_raster, "Raster CSV output path")
      ->envname("SPIKELOOM_OUT_RASTER");
  run_cmd->add_option("--out-svg", run_out_svg, "Raster SVG output path")
      ->envname("SPIKELOOM_OUT_SVG");
  run_cmd->add_option("--report", run_report, "Oracle comparison report path (default stdout)")
      ->envname("SPIKELOOM_REPORT");
  add_common_flags(run_cmd, run_common);

  CommonOptions tt_common;
  std::string tt_block = "selector";
  int tt_omega = 2;
  auto* tt_cmd = app.add_subcommand("truthtable", "Exhaustively compare a block with its oracle");
  tt_cmd->add_option("block", tt_block, "Block to check")
      ->check(CLI::IsMember({"selector", "decoder"}));
  tt_cmd->add_option("--omega", tt_omega, "Control input count");
  add_common_flags(tt_cmd, tt_common);

  CommonOptions sweep_common;
  std::string sweep_scenario_path, sweep_code = "binary";
  std::vector<double> sweep_sigmas{0.0, 0.005, 0.01, 0.02, 0.03, 0.05, 0.08, 0.13, 0.2, 0.35, 0.5};
  int sweep_seeds = 10;
  auto* sweep_cmd = app.add_subcommand("sweep", "Noise sweep over the primes demo scenario");
  sweep_cmd->add_option("--scenario", sweep_scenario_path, "Scenario file (default: built-in primes demo)")
      ->envname("SPIKELOOM_SCENARIO");
  sweep_cmd->add_option("--code", sweep_code, "Code scheme for the built-in scenario")
      ->envname("SPIKELOOM_CODE")
      ->check(CLI::IsMember({"binary", "gray", "file"}));
  sweep_cmd->add_option("--sigmas", sweep_sigmas, "Noise levels to test")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep_seeds, "Seeds per noise level");
  add_common_flags(sweep_cmd, sweep_common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_scenario_path, run_code, run_common, run_out_raster, run_out_svg,
                     run_report);
    }
    if (tt_cmd->parsed()) {
      return cmd_truthtable(tt_block, tt_omega, tt_common);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_scenario_path, sweep_code, sweep_common, sweep_sigmas, sweep_seeds);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
