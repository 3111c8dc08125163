#include "harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace crnoma::cli {

namespace {

std::optional<double> defined(double value) {
  if (std::isnan(value)) return std::nullopt;
  return value;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Compares digit runs by value so k_pmf_2 sorts before k_pmf_10.
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t ia = i;
      std::size_t jb = j;
      while (ia < a.size() && is_digit(a[ia])) ++ia;
      while (jb < b.size() && is_digit(b[jb])) ++jb;
      const std::string_view da(a.data() + i, ia - i);
      const std::string_view db(b.data() + j, jb - j);
      const auto va = da.substr(da.find_first_not_of('0') == std::string_view::npos
                                    ? da.size() - 1
                                    : da.find_first_not_of('0'));
      const auto vb = db.substr(db.find_first_not_of('0') == std::string_view::npos
                                    ? db.size() - 1
                                    : db.find_first_not_of('0'));
      if (va.size() != vb.size()) return va.size() < vb.size();
      if (va != vb) return va < vb;
      i = ia;
      j = jb;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

double parse_double_field(std::string_view text, const std::string& field) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(field + ": expected a number, got '" + std::string(text) +
                      "'");
  }
  return value;
}

std::int64_t parse_int_field(std::string_view text, const std::string& field) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(field + ": expected an integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_uint_field(std::string_view text, const std::string& field) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(field + ": expected an unsigned integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

const char* to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

double db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

SystemParams ExperimentConfig::params_at(double snr_db) const {
  SystemParams p;
  p.rate_bpcu = rate_bpcu;
  p.snr_linear = db_to_linear(snr_db);
  p.num_secondary = num_secondary;
  p.slots_per_frame = slots_per_frame;
  p.slot_seconds = slot_seconds;
  return p;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> errors;
  if (!(rate_bpcu > 0.0) || !std::isfinite(rate_bpcu)) {
    errors.push_back("rate: must be a positive finite number");
  }
  if (snr_db_grid.empty()) {
    errors.push_back("snr-db: grid must be nonempty");
  }
  for (const double db : snr_db_grid) {
    if (!std::isfinite(db)) {
      errors.push_back("snr-db: values must be finite");
      break;
    }
  }
  if (num_secondary < 1) errors.push_back("users: must be >= 1");
  if (slots_per_frame < 1) errors.push_back("slots: must be >= 1");
  if (!(slot_seconds > 0.0) || !std::isfinite(slot_seconds)) {
    errors.push_back("slot-seconds: must be a positive finite number");
  }
  if (trials < 1) errors.push_back("trials: must be >= 1");
  if (super_frames < 1) errors.push_back("super-frames: must be >= 1");
  if (workers < 1) errors.push_back("workers: must be >= 1");
  if (ladder_levels < 1) errors.push_back("levels: must be >= 1");
  if (!(pmf_tol > 0.0 && pmf_tol < 1.0)) {
    errors.push_back("tol: must lie in (0, 1)");
  }
  if (!errors.empty()) {
    std::string joined = "invalid configuration: ";
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (i > 0) joined += "; ";
      joined += errors[i];
    }
    throw ConfigError(joined);
  }
}

ResultTable run_kdist(const ExperimentConfig& config) {
  config.validate();
  ResultTable rows;
  for (const double snr_db : config.snr_db_grid) {
    const SystemParams params = config.params_at(snr_db);
    const KMean analytic = k_mean(params, config.pmf_tol);
    const KPmf analytic_pmf = k_pmf(params, config.pmf_tol);
    const KSimulation sim =
        simulate_k(params, config.trials, config.seed, config.workers);

    rows.push_back({"k_mean", snr_db, analytic.mean, sim.mean.mean,
                    defined(sim.mean.std_error), "", "", config.seed,
                    config.trials});

    const int n_max =
        std::max(analytic_pmf.truncation_index, sim.pmf.truncation_index);
    for (int n = 0; n <= n_max; ++n) {
      const double freq = sim.pmf.prob(n);
      const double binom_se =
          std::sqrt(freq * (1.0 - freq) / static_cast<double>(config.trials));
      rows.push_back({"k_pmf_" + std::to_string(n), snr_db,
                      analytic_pmf.prob(n), freq, binom_se, "", "",
                      config.seed, config.trials});
    }
  }
  sort_rows(rows);
  return rows;
}

ResultTable run_sumrate(const ExperimentConfig& config) {
  config.validate();
  ResultTable rows;
  for (const double snr_db : config.snr_db_grid) {
    const SystemParams params = config.params_at(snr_db);
    std::optional<double> analytic;
    if (config.scheduler == Scheduler::random) {
      analytic = sum_rate_closed_form(params);
    }
    const Estimate mc = simulate_sum_rate(params, config.scheduler,
                                          config.trials, config.seed,
                                          config.workers);
    rows.push_back({"sum_rate", snr_db, analytic, mc.mean,
                    defined(mc.std_error), crnoma::to_string(config.scheduler),
                    "", config.seed, config.trials});
  }
  sort_rows(rows);
  return rows;
}

ResultTable run_aoi(const ExperimentConfig& config) {
  config.validate();
  const char* convention = crnoma::to_string(config.convention);
  ResultTable rows;
  for (const double snr_db : config.snr_db_grid) {
    const SystemParams params = config.params_at(snr_db);
    const double tdma_analytic = aoi_tdma(params, config.convention);
    const AoiClosedForm crnoma_analytic =
        aoi_crnoma(params, config.convention);
    const AoiSimulation tdma_sim =
        simulate_aoi(params, AoiScheme::tdma, config.super_frames, config.seed,
                     config.workers);
    const AoiSimulation crnoma_sim =
        simulate_aoi(params, AoiScheme::crnoma, config.super_frames,
                     config.seed, config.workers);
    const Estimate& tdma_mc = tdma_sim.estimate(config.convention);
    const Estimate& crnoma_mc = crnoma_sim.estimate(config.convention);
    rows.push_back({"aoi_tdma", snr_db, tdma_analytic, tdma_mc.mean,
                    defined(tdma_mc.std_error), "", convention, config.seed,
                    config.super_frames});
    rows.push_back({"aoi_crnoma", snr_db, crnoma_analytic.value_seconds,
                    crnoma_mc.mean, defined(crnoma_mc.std_error), "",
                    convention, config.seed, config.super_frames});
  }
  sort_rows(rows);
  return rows;
}

void sort_rows(ResultTable& table) {
  std::stable_sort(table.begin(), table.end(),
                   [](const ResultRow& a, const ResultRow& b) {
                     if (a.metric_name != b.metric_name) {
                       return natural_less(a.metric_name, b.metric_name);
                     }
                     return a.snr_db < b.snr_db;
                   });
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string to_csv(const ResultTable& table) {
  std::string out = kCsvHeader;
  out += '\n';
  const auto field = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  for (const ResultRow& row : table) {
    out += row.metric_name;
    out += ',';
    out += format_number(row.snr_db);
    out += ',';
    out += field(row.analytic);
    out += ',';
    out += field(row.mc);
    out += ',';
    out += field(row.mc_stderr);
    out += ',';
    out += row.scheduler;
    out += ',';
    out += row.convention;
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += std::to_string(row.trials);
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultTable& table) {
  // Keys and value layout mirror the CSV columns exactly.
  std::string out = "[\n";
  const auto field = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("null");
  };
  for (std::size_t i = 0; i < table.size(); ++i) {
    const ResultRow& row = table[i];
    out += "  {\"metric_name\":\"" + row.metric_name + "\"";
    out += ",\"snr_db\":" + format_number(row.snr_db);
    out += ",\"analytic\":" + field(row.analytic);
    out += ",\"mc\":" + field(row.mc);
    out += ",\"stderr\":" + field(row.mc_stderr);
    out += ",\"scheduler\":\"" + row.scheduler + "\"";
    out += ",\"convention\":\"" + row.convention + "\"";
    out += ",\"seed\":" + std::to_string(row.seed);
    out += ",\"trials\":" + std::to_string(row.trials);
    out += i + 1 < table.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  return out;
}

void emit(const ResultTable& table, OutputFormat format,
          const std::string& path) {
  if (table.empty()) {
    throw std::runtime_error("emit: refusing to write an empty table to '" +
                             path + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("emit: cannot open '" + path + "' for writing");
  }
  out << (format == OutputFormat::csv ? to_csv(table) : to_json(table));
  out.flush();
  if (!out) {
    throw std::runtime_error("emit: write to '" + path + "' failed");
  }
}

ResultTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) {
    throw std::runtime_error("parse_csv: missing or unexpected header row");
  }
  ResultTable table;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 9) {
      throw std::runtime_error("parse_csv: expected 9 fields, got " +
                               std::to_string(fields.size()));
    }
    const auto opt = [&](const std::string& s,
                         const char* name) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_double_field(s, name);
    };
    ResultRow row;
    row.metric_name = fields[0];
    row.snr_db = parse_double_field(fields[1], "snr_db");
    row.analytic = opt(fields[2], "analytic");
    row.mc = opt(fields[3], "mc");
    row.mc_stderr = opt(fields[4], "stderr");
    row.scheduler = fields[5];
    row.convention = fields[6];
    row.seed = parse_uint_field(fields[7], "seed");
    row.trials = parse_int_field(fields[8], "trials");
    table.push_back(std::move(row));
  }
  return table;
}

std::vector<double> parse_snr_spec(const std::string& spec) {
  const std::string text = trim(spec);
  if (text.empty()) throw ConfigError("snr-db: empty value");
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    return {parse_double_field(trim(parts[0]), "snr-db")};
  }
  if (parts.size() != 3) {
    throw ConfigError("snr-db: expected a number or start:stop:step, got '" +
                      text + "'");
  }
  const double start = parse_double_field(trim(parts[0]), "snr-db");
  const double stop = parse_double_field(trim(parts[1]), "snr-db");
  const double step = parse_double_field(trim(parts[2]), "snr-db");
  if (!(step > 0.0)) throw ConfigError("snr-db: range step must be positive");
  if (stop < start) {
    throw ConfigError("snr-db: range stop must be >= start");
  }
  std::vector<double> values;
  // Half-a-step slack so stop lands in the grid despite rounding.
  const auto count = static_cast<std::int64_t>((stop - start) / step + 0.5);
  for (std::int64_t i = 0; i <= count; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + step * 1e-9) break;
    values.push_back(v);
  }
  return values;
}

Scheduler parse_scheduler(const std::string& value) {
  if (value == "random") return Scheduler::random;
  if (value == "greedy") return Scheduler::greedy;
  throw ConfigError("scheduler: expected random|greedy, got '" + value + "'");
}

AoiConvention parse_convention(const std::string& value) {
  if (value == "paper") return AoiConvention::ratio;
  if (value == "trapezoid") return AoiConvention::trapezoid;
  throw ConfigError("convention: expected paper|trapezoid, got '" + value +
                    "'");
}

OutputFormat parse_format(const std::string& value) {
  if (value == "csv") return OutputFormat::csv;
  if (value == "json") return OutputFormat::json;
  throw ConfigError("format: expected csv|json, got '" + value + "'");
}

void apply_config_file(ExperimentConfig& config, const std::string& path,
                       const std::vector<std::string>& cli_set_keys) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path + "'");
  }
  const auto overridden = [&](const std::string& key) {
    return std::find(cli_set_keys.begin(), cli_set_keys.end(), key) !=
           cli_set_keys.end();
  };
  std::vector<double> file_grid;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) +
                        " is not 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (overridden(key)) continue;

    if (key == "rate") {
      config.rate_bpcu = parse_double_field(value, key);
    } else if (key == "snr-db") {
      for (const auto& piece : split(value, ',')) {
        const auto expanded = parse_snr_spec(piece);
        file_grid.insert(file_grid.end(), expanded.begin(), expanded.end());
      }
    } else if (key == "users") {
      config.num_secondary = static_cast<int>(parse_int_field(value, key));
    } else if (key == "slots") {
      config.slots_per_frame = static_cast<int>(parse_int_field(value, key));
    } else if (key == "slot-seconds") {
      config.slot_seconds = parse_double_field(value, key);
    } else if (key == "trials") {
      config.trials = parse_int_field(value, key);
    } else if (key == "super-frames") {
      config.super_frames = parse_int_field(value, key);
    } else if (key == "seed") {
      config.seed = parse_uint_field(value, key);
    } else if (key == "scheduler") {
      config.scheduler = parse_scheduler(value);
    } else if (key == "convention") {
      config.convention = parse_convention(value);
    } else if (key == "out") {
      config.output_path = value;
    } else if (key == "format") {
      config.format = parse_format(value);
    } else if (key == "workers") {
      config.workers = static_cast<int>(parse_int_field(value, key));
    } else if (key == "levels") {
      config.ladder_levels = static_cast<int>(parse_int_field(value, key));
    } else {
      throw ConfigError("config: unknown key '" + key + "' in " + path);
    }
  }
  if (!file_grid.empty()) config.snr_db_grid = std::move(file_grid);
}

}  // namespace crnoma::cli
