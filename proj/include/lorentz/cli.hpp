// Experiment driver behind the `lorentz` command line tool.
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace lorentz::cli {

enum class ParamKind { Real, Integer, Slope, RealList };

struct ParamSpec {
  std::string name;
  std::string fallback;  // default as text, empty when the parameter is optional
  std::string help;
  ParamKind kind = ParamKind::Real;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = false, hi_open = false;
};

struct ExperimentSpec {
  std::string name;
  std::string help;
  std::string out_ext;  // extension of the main output
  std::vector<ParamSpec> params;

  const ParamSpec* find(const std::string& key) const;
};

/// Every experiment with its documented parameters and defaults.
const std::vector<ExperimentSpec>& experiment_specs();
const ExperimentSpec& experiment_spec(const std::string& name);

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  unsigned threads = 1;                         // resolved, always >= 1
  std::map<std::string, std::string> params;    // resolved text of every set parameter
  std::string out_path;
  bool timing = false;                          // add wall time to the report

  bool has(const std::string& key) const { return params.count(key) != 0; }
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
};

/// Decimal number or one of the named slopes sqrt2m1, golden, pi-3, e-2.
double parse_slope(const std::string& text);

/// Flat `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

/**
 * Parses `argv` (subcommand first). Values from `--config FILE` are applied
 * first and explicit flags override them. Throws Error(UsageError) for
 * unknown keys or out-of-range values.
 */
ExperimentConfig parse_config(int argc, const char* const* argv);

/// Range and consistency checks of a config; throws Error(UsageError).
void validate(const ExperimentConfig& cfg);

struct Check {
  std::string name;
  bool passed;
  double value;
  double threshold;
};

struct RunReport {
  nlohmann::json json;
  std::vector<std::string> outputs;
  std::vector<Check> checks;

  bool passed() const;
};

/// Runs the experiment, writes its outputs and the report `<stem>.report.json`.
RunReport run_experiment(const ExperimentConfig& cfg);

/// Whole program: exit code 0 on success, 2 when a built-in check fails, 1 on error.
int run_main(int argc, const char* const* argv);

}  // namespace lorentz::cli
