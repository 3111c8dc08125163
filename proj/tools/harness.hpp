#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnoma/analysis.hpp"
#include "crnoma/simulate.hpp"

namespace crnoma::cli {

enum class OutputFormat { csv, json };

const char* to_string(OutputFormat format);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One experiment run: a SNR grid plus everything needed to reproduce the
/// output byte for byte.
struct ExperimentConfig {
  double rate_bpcu = 1.0;
  std::vector<double> snr_db_grid = {0, 5, 10, 15, 20, 25, 30};
  int num_secondary = 8;
  int slots_per_frame = 8;
  double slot_seconds = 2.0;
  std::int64_t trials = 1000000;
  std::int64_t super_frames = 100000;
  std::uint64_t seed = 1;
  Scheduler scheduler = Scheduler::random;
  AoiConvention convention = AoiConvention::ratio;
  std::string output_path;  // empty: write to stdout
  OutputFormat format = OutputFormat::csv;
  int workers = 1;
  int ladder_levels = 10;  // `ladder` subcommand only
  double pmf_tol = 1e-12;  // truncation tolerance for analytic K statistics

  /// Throws ConfigError listing every out-of-domain field by name.
  void validate() const;

  SystemParams params_at(double snr_db) const;
};

/// P = 10^(dB/10).
double db_to_linear(double snr_db);

/// One output record.  Absent values (no analytic form, undefined standard
/// error) serialize as an empty CSV field / JSON null.
struct ResultRow {
  std::string metric_name;
  double snr_db = 0.0;
  std::optional<double> analytic;
  std::optional<double> mc;
  std::optional<double> mc_stderr;
  std::string scheduler;   // empty when not applicable
  std::string convention;  // empty when not applicable
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
};

using ResultTable = std::vector<ResultRow>;

inline constexpr const char* kCsvHeader =
    "metric_name,snr_db,analytic,mc,stderr,scheduler,convention,seed,trials";

/// Analytic E{K} and pmf against their Monte Carlo estimates.  Emits one
/// k_mean row per grid point plus k_pmf_<n> rows over the union of the
/// analytic and empirical supports.
ResultTable run_kdist(const ExperimentConfig& config);

/// Secondary sum-rate.  The analytic column is filled for the random
/// scheduler only; no closed form exists for greedy.
ResultTable run_sumrate(const ExperimentConfig& config);

/// aoi_tdma and aoi_crnoma rows, analytic and Monte Carlo both evaluated
/// under the configured convention.
ResultTable run_aoi(const ExperimentConfig& config);

/// Canonical order: (metric_name with numeric-aware compare, snr_db).
void sort_rows(ResultTable& table);

/// Shortest representation that round-trips, capped at 17 significant
/// digits.
std::string format_number(double value);

std::string to_csv(const ResultTable& table);
std::string to_json(const ResultTable& table);

/// Writes the table to a file.  Refuses empty tables (no file is created)
/// and surfaces I/O failures with the path in the message.
void emit(const ResultTable& table, OutputFormat format,
          const std::string& path);

/// Inverse of to_csv, for round-trip checks.
ResultTable parse_csv(const std::string& text);

/// "12", "-3.5", or "a:b:step" expanded inclusively.
std::vector<double> parse_snr_spec(const std::string& spec);

Scheduler parse_scheduler(const std::string& value);
AoiConvention parse_convention(const std::string& value);
OutputFormat parse_format(const std::string& value);

/// Applies `key = value` lines to the config, skipping keys the command
/// line already set.  Keys mirror the long flag names.  Unknown keys and
/// malformed values raise ConfigError naming the key.
void apply_config_file(ExperimentConfig& config, const std::string& path,
                       const std::vector<std::string>& cli_set_keys);

}  // namespace crnoma::cli
