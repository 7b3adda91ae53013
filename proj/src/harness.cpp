#include "fhtd/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fhtd/examples.hpp"
#include "fhtd/parallel.hpp"
#include "fhtd/rng.hpp"

namespace fhtd {
namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string fixed2(double v) { return fmt("%.2f", v); }
std::string general(double v) { return std::isnan(v) ? "NA" : fmt("%.6g", v); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("IoError", "cannot write '" + path + "'");
  f << content;
  if (!f) throw Error("IoError", "write to '" + path + "' failed");
}

Builtin builtin_of(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::table1: return Builtin::ex41;
    case ExperimentKind::table2: return Builtin::ex42;
    default: return Builtin::ex_s5;
  }
}

struct Outcome {
  bool ok = false;
  SelectionTally tally;
  std::string message;
};

}  // namespace

std::string to_markdown(const Table& table) {
  std::ostringstream os;
  os << '|';
  for (const auto& h : table.header) os << ' ' << h << " |";
  os << "\n|";
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i == 0 ? "---|" : "---:|");
  os << '\n';
  for (const auto& row : table.rows) {
    os << '|';
    for (const auto& cell : row) os << ' ' << cell << " |";
    os << '\n';
  }
  return os.str();
}

std::string to_csv(const Table& table) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + '"';
  };
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cell(cells[i]);
    os << "\r\n";
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return os.str();
}

SimulationReport run_simulation(const ExperimentConfig& config) {
  config.validate();
  SimulationReport report;
  report.title = config.name.empty() ? kind_name(config.kind) : config.name;
  report.methods = config.methods;
  const std::size_t m = config.methods.size();

  std::vector<std::pair<SizeTier, DgpSpec>> work;
  if (config.kind == ExperimentKind::custom) {
    const DgpSpec& d = *config.dgp;
    work.push_back({SizeTier{d.n, d.covariates.p, d.candidate_lags}, d});
  } else {
    for (const auto& tier : config.tiers) work.push_back({tier, builtin_spec(builtin_of(config.kind), tier)});
  }

  for (const auto& [tier, spec] : work) {
    FhtdConfig greedy = config.greedy;
    greedy.q = config.q.value_or(default_ar_lags(spec.n));

    std::vector<std::vector<Outcome>> outcomes(static_cast<std::size_t>(config.reps), std::vector<Outcome>(m));
    parallel_for(config.reps, config.threads, [&](int rep) {
      auto& row = outcomes[static_cast<std::size_t>(rep)];
      const std::uint64_t seed = replication_seed(config.seed, static_cast<std::uint64_t>(rep));
      try {
        const Dataset data = simulate(spec, seed);
        const LagDesign design = LagDesign::from_dataset(data, greedy.q);
        for (std::size_t i = 0; i < m; ++i) {
          try {
            const SelectedModel model = select_model(config.methods[i], design, greedy, config.lasso);
            tally(data.true_Q, data.true_J, model.Q_hat, model.J_hat, row[i].tally);
            row[i].ok = true;
          } catch (const std::exception& e) {
            row[i].message = method_name(config.methods[i]) + ", replication " + std::to_string(rep) + ": " + e.what();
          }
        }
      } catch (const std::exception& e) {
        for (auto& o : row) o.message = "simulation, replication " + std::to_string(rep) + ": " + e.what();
      }
    });

    TierResult result;
    result.tier = tier;
    result.q = greedy.q;
    for (std::size_t i = 0; i < m; ++i) {
      MethodResult mr;
      mr.method = config.methods[i];
      for (const auto& row : outcomes) {
        if (row[i].ok) {
          mr.tally.merge(row[i].tally);
        } else {
          ++mr.failures;
          if (report.failure_notes.size() < 10) report.failure_notes.push_back(row[i].message);
        }
      }
      result.methods.push_back(mr);
    }
    report.tiers.push_back(std::move(result));
  }
  return report;
}

std::string simulation_markdown(const SimulationReport& report) {
  Table t;
  t.header.push_back("");
  for (Method m : report.methods) t.header.push_back(method_name(m));
  if (!report.methods.empty()) {
    for (const auto& tier : report.tiers) {
      std::vector<std::string> label(t.header.size());
      label[0] = "*(n, p\\*, p, r, q) = (" + std::to_string(tier.tier.n) + ", " +
                 std::to_string(tier.tier.p * tier.tier.r) + ", " + std::to_string(tier.tier.p) + ", " +
                 std::to_string(tier.tier.r) + ", " + std::to_string(tier.q) + ")*";
      t.rows.push_back(label);
      for (const char* metric : {"E", "SS", "TP", "FP"}) {
        std::vector<std::string> row{metric};
        for (const auto& mr : tier.methods) {
          const std::string name = metric;
          if (name == "E") row.push_back(std::to_string(mr.tally.e_count));
          if (name == "SS") row.push_back(std::to_string(mr.tally.ss_count));
          if (name == "TP") row.push_back(fixed2(mr.tally.tp_mean()));
          if (name == "FP") row.push_back(fixed2(mr.tally.fp_mean()));
        }
        t.rows.push_back(row);
      }
    }
  }
  std::ostringstream os;
  os << "## " << report.title << "\n\n" << to_markdown(t);
  bool any = false;
  for (const auto& tier : report.tiers) {
    for (const auto& mr : tier.methods) {
      if (mr.failures == 0) continue;
      if (!any) os << "\nFailed replications:\n";
      any = true;
      os << "- n = " << tier.tier.n << ", " << method_name(mr.method) << ": " << mr.failures << "\n";
    }
  }
  return os.str();
}

Table simulation_csv_table(const SimulationReport& report) {
  Table t;
  t.header = {"n", "p", "r", "q", "metric"};
  for (Method m : report.methods) t.header.push_back(method_name(m));
  if (report.methods.empty()) return t;
  for (const auto& tier : report.tiers) {
    for (const std::string metric : {"E", "SS", "TP", "FP"}) {
      std::vector<std::string> row{std::to_string(tier.tier.n), std::to_string(tier.tier.p),
                                   std::to_string(tier.tier.r), std::to_string(tier.q), metric};
      for (const auto& mr : tier.methods) {
        if (metric == "E") row.push_back(std::to_string(mr.tally.e_count));
        if (metric == "SS") row.push_back(std::to_string(mr.tally.ss_count));
        if (metric == "TP") row.push_back(fixed2(mr.tally.tp_mean()));
        if (metric == "FP") row.push_back(fixed2(mr.tally.fp_mean()));
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

bool excessive_failures(const SimulationReport& report, double max_rate) {
  for (const auto& tier : report.tiers) {
    for (const auto& mr : tier.methods) {
      const double total = static_cast<double>(mr.failures + mr.tally.reps);
      if (total > 0 && static_cast<double>(mr.failures) / total > max_rate) return true;
    }
  }
  return false;
}

Table example_table(const ExperimentConfig& config) {
  config.validate();
  const auto& ex = config.example;
  Table t;
  switch (config.kind) {
    case ExperimentKind::example21: {
      const auto s = example21_stats(ex.a, ex.n, ex.p, config.reps, config.seed, config.threads);
      t.header = {"statistic", "estimate", "limit"};
      t.rows.push_back({"mean (F1 - F2)/n", general(s.mean_scaled_gap), general((1 + 2 * ex.a) / (1 - ex.a * ex.a))});
      if (ex.p > 0) {
        t.rows.push_back({"first OGA pick is y_{t-1}", general(s.first_pick_rate), ex.a > -0.5 ? "1" : "0"});
        t.rows.push_back({"y_{t-2} absent from OGA path", general(s.y2_missed_rate), "1"});
      }
      break;
    }
    case ExperimentKind::example22: {
      const auto s = example22_stats(ex.n, config.reps, config.seed, ex.grid_points, config.threads);
      t.header = {"lambda", "correct_selection_rate"};
      for (std::size_t i = 0; i < s.lambdas.size(); ++i) t.rows.push_back({general(s.lambdas[i]), general(s.correct_rate[i])});
      break;
    }
    case ExperimentKind::example31: {
      const auto s = example31_mspe(ex.k, ex.n, config.reps, config.seed, config.threads);
      t.header = {"predictor", "n(MSPE - sigma^2)", "limit"};
      t.rows.push_back({"all " + std::to_string(ex.k) + " lags", general(s.full_order), std::to_string(2 * ex.k)});
      t.rows.push_back({"lag " + std::to_string(ex.k) + " only", general(s.single_lag), "2"});
      t.rows.push_back({"ratio", general(s.ratio()), std::to_string(ex.k)});
      break;
    }
    default:
      throw Error("InvalidConfig", "example_table needs an example config");
  }
  return t;
}

Table forecast_table(const ForecastReport& report) {
  Table t;
  t.header = {"method", "RMSE", "MAE", "DM statistic vs FHTD", "DM p-value vs FHTD"};
  for (const auto& s : report.summary) {
    std::vector<std::string> row{method_name(s.method), general(s.rmse), general(s.mae)};
    if (s.dm_vs_fhtd) {
      row.push_back(general(s.dm_vs_fhtd->statistic));
      row.push_back(general(s.dm_vs_fhtd->p_value));
    } else {
      row.push_back("");
      row.push_back("");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table forecast_windows_table(const ForecastReport& report, const std::vector<std::string>& dates) {
  Table t;
  t.header = {"index", "actual"};
  if (!dates.empty()) t.header.insert(t.header.begin() + 1, "date");
  for (Method m : report.methods) t.header.push_back(method_name(m));
  for (const auto& rec : report.records) {
    std::vector<std::string> row{std::to_string(rec.target_index), general(rec.actual)};
    if (!dates.empty()) row.insert(row.begin() + 1, dates.at(static_cast<std::size_t>(rec.target_index)));
    for (double p : rec.predicted) row.push_back(general(p));
    t.rows.push_back(std::move(row));
  }
  return t;
}

int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    switch (config.kind) {
      case ExperimentKind::table1:
      case ExperimentKind::table2:
      case ExperimentKind::table_s5:
      case ExperimentKind::custom: {
        const SimulationReport report = run_simulation(config);
        const std::string md = simulation_markdown(report);
        out << md;
        if (!config.out.empty()) {
          write_file(config.out + ".md", md);
          write_file(config.out + ".csv", to_csv(simulation_csv_table(report)));
        }
        for (const auto& note : report.failure_notes) err << "failure: " << note << "\n";
        if (excessive_failures(report, config.max_failure_rate)) {
          err << "error: a method failed in more than " << config.max_failure_rate * 100 << "% of replications\n";
          return 2;
        }
        return 0;
      }
      case ExperimentKind::example21:
      case ExperimentKind::example22:
      case ExperimentKind::example31: {
        const Table t = example_table(config);
        const std::string md = "## " + kind_name(config.kind) + "\n\n" + to_markdown(t);
        out << md;
        if (!config.out.empty()) {
          write_file(config.out + ".md", md);
          write_file(config.out + ".csv", to_csv(t));
        }
        return 0;
      }
      case ExperimentKind::forecast: {
        const LoadedSeries data = load_csv(config.forecast.csv_path, config.forecast.columns);
        ForecastConfig fc = config.forecast.settings;
        fc.methods = config.methods;
        fc.greedy = config.greedy;
        fc.lasso = config.lasso;
        fc.threads = config.threads;
        const ForecastReport report = rolling_forecast(data.y, data.x, fc);
        const Table t = forecast_table(report);
        const std::string md = "## forecast: " + config.forecast.columns.y_column + " (" +
                               std::to_string(report.records.size()) + " windows)\n\n" + to_markdown(t);
        out << md;
        if (!config.out.empty()) {
          write_file(config.out + ".md", md);
          write_file(config.out + ".csv", to_csv(t));
          write_file(config.out + "_windows.csv", to_csv(forecast_windows_table(report, data.dates)));
        }
        return 0;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace fhtd
