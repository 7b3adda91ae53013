#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fhtd/baselines.hpp"
#include "fhtd/csv.hpp"
#include "fhtd/forecast.hpp"
#include "fhtd/tsdgp.hpp"

namespace fhtd {

enum class ExperimentKind { table1, table2, table_s5, custom, example21, example22, example31, forecast };

std::string kind_name(ExperimentKind kind);

struct ExampleParams {
  double a = 0.3;
  int n = 10000;
  /// Covariate count for the OGA path part of example 2.1 (0 skips it).
  int p = 0;
  int k = 2;
  int grid_points = 25;
};

struct ForecastSetup {
  std::string csv_path;
  CsvDatasetSpec columns;
  ForecastConfig settings;
};

/// Everything a run needs. Built from a preset and/or a JSON file; command
/// line flags override seed, reps, threads and outputs afterwards.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::table1;
  std::string name;
  std::vector<SizeTier> tiers;
  /// DGP of a custom experiment; its n, p and candidate lags form the one tier.
  std::optional<DgpSpec> dgp;
  int reps = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  /// q, when set, overrides floor(2 n^{1/4}); c, d, K, eta, threshold mode
  /// apply to the greedy selectors.
  FhtdConfig greedy;
  std::optional<int> q;
  LassoConfig lasso;
  ExampleParams example;
  ForecastSetup forecast;
  /// Output file stem; "<stem>.md" and "<stem>.csv" are written when set.
  std::string out;
  /// A method failing in more than this share of replications fails the run.
  double max_failure_rate = 0.01;

  /// Throws Error("InvalidConfig").
  void validate() const;
};

/// Named presets: ex41, ex41-n200, ex41-n400, ex41-n800 (likewise ex42 and
/// ex_s5 with their tiers), table1/table2/table_s5 as aliases of the full
/// tables, example21, example22, example31.
std::vector<std::string> preset_names();
/// Throws Error("UnknownPreset").
ExperimentConfig preset(const std::string& name);

/// Parses a JSON config. A "preset" key seeds the defaults; relative data
/// paths are resolved against `base_dir`. Unknown keys are errors.
/// Throws Error("ConfigParse") or Error("InvalidConfig").
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");

/// Reads a config file, or returns the preset when `path_or_preset` names one
/// and no such file exists.
ExperimentConfig load_config(const std::string& path_or_preset);

std::string dgp_to_json(const DgpSpec& spec);
/// Throws Error("ConfigParse") or the spec's own validation errors.
DgpSpec dgp_from_json(const std::string& text);

}  // namespace fhtd
