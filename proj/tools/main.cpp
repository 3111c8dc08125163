#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crnoma/ladder.hpp"
#include "harness.hpp"

namespace {

using crnoma::cli::ConfigError;
using crnoma::cli::ExperimentConfig;
using crnoma::cli::OutputFormat;
using crnoma::cli::ResultTable;

struct CliState {
  ExperimentConfig config;
  std::vector<std::string> snr_specs;
  std::string scheduler = "random";
  std::string convention = "paper";
  std::string format = "csv";
  std::string config_path;
};

// Flags shared by the run subcommands; `ladder` registers the subset it
// uses.  Enum-valued flags arrive as strings and are parsed afterwards so
// errors carry the field name.
void add_common_options(CLI::App* sub, CliState& state, bool monte_carlo) {
  sub->add_option("--rate", state.config.rate_bpcu,
                  "Target rate R in bits per channel use");
  if (monte_carlo) {
    sub->add_option("--snr-db", state.snr_specs,
                    "Transmit SNR grid point in dB, or a range a:b:step; "
                    "repeatable");
    sub->add_option("--users", state.config.num_secondary,
                    "Number of secondary users M");
    sub->add_option("--slots", state.config.slots_per_frame,
                    "Slots per TDMA frame N");
    sub->add_option("--slot-seconds", state.config.slot_seconds,
                    "Slot duration T in seconds");
    sub->add_option("--trials", state.config.trials,
                    "Monte Carlo trials per grid point");
    sub->add_option("--super-frames", state.config.super_frames,
                    "Super-frames per AoI run");
    sub->add_option("--seed", state.config.seed, "Master RNG seed");
    sub->add_option("--scheduler", state.scheduler,
                    "Secondary-user scheduler: random|greedy");
    sub->add_option("--convention", state.convention,
                    "AoI averaging convention: paper|trapezoid");
    sub->add_option("--workers", state.config.workers,
                    "Worker threads (does not affect results)");
  } else {
    sub->add_option("--levels", state.config.ladder_levels,
                    "Number of ladder levels to print");
  }
  sub->add_option("--config", state.config_path,
                  "Config file with 'key = value' lines; command-line flags "
                  "take precedence");
  sub->add_option("--out", state.config.output_path,
                  "Output file path (default: stdout)");
  sub->add_option("--format", state.format, "Output format: csv|json");
}

std::vector<std::string> keys_set_on_cli(const CLI::App& sub) {
  static const std::vector<std::pair<std::string, std::string>> kFlagToKey = {
      {"--rate", "rate"},           {"--snr-db", "snr-db"},
      {"--users", "users"},         {"--slots", "slots"},
      {"--slot-seconds", "slot-seconds"}, {"--trials", "trials"},
      {"--super-frames", "super-frames"}, {"--seed", "seed"},
      {"--scheduler", "scheduler"}, {"--convention", "convention"},
      {"--out", "out"},             {"--format", "format"},
      {"--workers", "workers"},     {"--levels", "levels"},
  };
  std::vector<std::string> keys;
  for (const auto& [flag, key] : kFlagToKey) {
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) keys.push_back(key);
  }
  return keys;
}

void finalize_config(const CLI::App& sub, CliState& state) {
  state.config.scheduler = crnoma::cli::parse_scheduler(state.scheduler);
  state.config.convention = crnoma::cli::parse_convention(state.convention);
  state.config.format = crnoma::cli::parse_format(state.format);
  if (!state.snr_specs.empty()) {
    state.config.snr_db_grid.clear();
    for (const auto& spec : state.snr_specs) {
      const auto values = crnoma::cli::parse_snr_spec(spec);
      state.config.snr_db_grid.insert(state.config.snr_db_grid.end(),
                                      values.begin(), values.end());
    }
  }
  if (!state.config_path.empty()) {
    crnoma::cli::apply_config_file(state.config, state.config_path,
                                   keys_set_on_cli(sub));
  }
}

void write_output(const std::string& body, const ExperimentConfig& config) {
  if (config.output_path.empty()) {
    std::fputs(body.c_str(), stdout);
  }
}

void run_table(const ResultTable& table, const ExperimentConfig& config) {
  if (config.output_path.empty()) {
    write_output(config.format == OutputFormat::csv
                     ? crnoma::cli::to_csv(table)
                     : crnoma::cli::to_json(table),
                 config);
  } else {
    crnoma::cli::emit(table, config.format, config.output_path);
  }
}

// The ladder table has its own schema: one row per level with the prefix
// sum and the rate the level actually realizes.
void run_ladder(const ExperimentConfig& config) {
  config.validate();
  crnoma::SystemParams params;
  params.rate_bpcu = config.rate_bpcu;
  const crnoma::SnrLadder ladder =
      crnoma::build_ladder(params, config.ladder_levels);

  std::string body;
  const bool csv = config.format == OutputFormat::csv;
  if (csv) body = "k,level,eta,rate_check_bpcu\n";
  else body = "[\n";
  for (int k = 1; k <= ladder.size(); ++k) {
    const double level = ladder.level(k);
    const double rate_check = std::log2(1.0 + level / (1.0 + ladder.prefix(k - 1)));
    if (csv) {
      body += std::to_string(k) + ',' + crnoma::cli::format_number(level) +
              ',' + crnoma::cli::format_number(ladder.prefix(k)) + ',' +
              crnoma::cli::format_number(rate_check) + '\n';
    } else {
      body += "  {\"k\":" + std::to_string(k) +
              ",\"level\":" + crnoma::cli::format_number(level) +
              ",\"eta\":" + crnoma::cli::format_number(ladder.prefix(k)) +
              ",\"rate_check_bpcu\":" + crnoma::cli::format_number(rate_check) +
              (k < ladder.size() ? "},\n" : "}\n");
    }
  }
  if (!csv) body += "]\n";

  if (config.output_path.empty()) {
    std::fputs(body.c_str(), stdout);
    return;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("ladder: cannot open '" + config.output_path +
                             "' for writing");
  }
  out << body;
  out.flush();
  if (!out) {
    throw std::runtime_error("ladder: write to '" + config.output_path +
                             "' failed");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "CR-NOMA uplink toolkit: SNR-ladder construction, supported-user "
      "statistics, outage sum-rate, and age-of-information experiments with "
      "matched analytic and Monte Carlo columns"};
  app.require_subcommand(1);

  CliState state;
  CLI::App* ladder = app.add_subcommand(
      "ladder", "Print the receive-SNR ladder for a target rate");
  add_common_options(ladder, state, /*monte_carlo=*/false);
  CLI::App* kdist = app.add_subcommand(
      "kdist", "Supported-level count: analytic pmf and mean vs Monte Carlo");
  add_common_options(kdist, state, /*monte_carlo=*/true);
  CLI::App* sumrate = app.add_subcommand(
      "sumrate", "Secondary sum-rate vs Monte Carlo across the SNR grid");
  add_common_options(sumrate, state, /*monte_carlo=*/true);
  CLI::App* aoi = app.add_subcommand(
      "aoi", "Average AoI of TDMA with and without the NOMA add-on");
  add_common_options(aoi, state, /*monte_carlo=*/true);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    finalize_config(*sub, state);
    if (sub == ladder) {
      run_ladder(state.config);
    } else if (sub == kdist) {
      run_table(crnoma::cli::run_kdist(state.config), state.config);
    } else if (sub == sumrate) {
      run_table(crnoma::cli::run_sumrate(state.config), state.config);
    } else {
      run_table(crnoma::cli::run_aoi(state.config), state.config);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
