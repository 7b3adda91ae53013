#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fhtd/config.hpp"
#include "fhtd/metrics.hpp"

namespace fhtd {

/// Header plus rows of already formatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_markdown(const Table& table);
/// RFC-4180 output; cells are quoted only when needed.
std::string to_csv(const Table& table);

struct MethodResult {
  Method method = Method::fhtd;
  /// Tally over the replications where the method succeeded.
  SelectionTally tally;
  std::int64_t failures = 0;
};

struct TierResult {
  SizeTier tier;
  int q = 0;
  std::vector<MethodResult> methods;
};

struct SimulationReport {
  std::string title;
  std::vector<Method> methods;
  std::vector<TierResult> tiers;
  /// Failure messages of the first few failed replications.
  std::vector<std::string> failure_notes;
};

/// Simulates every tier, runs each configured method on every replication
/// (replication r uses seed ^ r) and tallies. Results do not depend on the
/// thread count.
SimulationReport run_simulation(const ExperimentConfig& config);

/// Four rows (E, SS, TP, FP) per tier with one column per method; the
/// CSV carries n, p, r, q, metric first.
std::string simulation_markdown(const SimulationReport& report);
Table simulation_csv_table(const SimulationReport& report);

/// True when some method failed in more than `max_rate` of the replications.
bool excessive_failures(const SimulationReport& report, double max_rate);

Table example_table(const ExperimentConfig& config);
Table forecast_table(const ForecastReport& report);
Table forecast_windows_table(const ForecastReport& report, const std::vector<std::string>& dates = {});

/// Runs a config end to end, writing Markdown to `out` (and files when
/// config.out is set) and diagnostics to `err`. Returns the process exit
/// code: 0 success, 2 runtime failure.
int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fhtd
