// Acceptance runner: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ...] [--data-dir DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fhtd/examples.hpp"
#include "fhtd/harness.hpp"
#include "oracle.hpp"
#include "properties.hpp"

using namespace fhtd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string data_dir = FHTD_SOURCE_DIR "/data";

std::string f3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const MethodResult& find(const TierResult& tier, Method m) {
  for (const auto& r : tier.methods)
    if (r.method == m) return r;
  throw Error("Internal", "method missing from report");
}

TierResult run_table(const std::string& preset_name, int reps) {
  ExperimentConfig config = preset(preset_name);
  config.reps = reps;
  config.seed = 2023;
  return run_simulation(config).tiers.at(0);
}

// Accumulates sub-checks into a single outcome.
struct Checks {
  bool ok = true;
  std::ostringstream text;
  void add(const std::string& label, double value, bool passed) {
    ok = ok && passed;
    text << label << "=" << f3(value) << (passed ? "" : "(!)") << " ";
  }
  Outcome done(double secs) {
    text << "time=" << f3(secs) << "s";
    return {ok, text.str()};
  }
};

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(404);
  double worst = 0;
  for (int inst = 0; inst < 500; ++inst) {
    const int cols = std::uniform_int_distribution<int>(2, 12)(rng);
    const int rows = std::uniform_int_distribution<int>(cols + 2, 50)(rng);
    const int q = std::uniform_int_distribution<int>(0, std::min(2, cols - 1))(rng);
    const auto d = oracle::random_design(rng, rows, cols, q);
    std::vector<int> order(static_cast<std::size_t>(cols));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int steps = std::uniform_int_distribution<int>(1, cols)(rng);

    std::vector<int> active;
    ActiveFit fit(d, active);
    Eigen::VectorXd fsr, oga;
    for (int s = 0; s < steps; ++s) {
      fit.fsr_scores(fsr);
      fit.oga_scores(oga);
      for (int id = 0; id < cols; ++id) {
        if (fit.is_active(id)) continue;
        worst = std::max(worst, oracle::rel_diff(fsr[id], oracle::fsr_score(d, active, id)));
        worst = std::max(worst, oracle::rel_diff(oga[id], oracle::oga_score(d, active, id)));
      }
      const int next = order[static_cast<std::size_t>(s)];
      fit.append(next);
      active.push_back(next);
      worst = std::max(worst, oracle::rel_diff(fit.rss(), oracle::rss(d, active)));
    }
    const OlsResult ols = ols_solve(d, active);
    const Eigen::VectorXd ref = oracle::ols(oracle::gather(d, active), d.response());
    for (Eigen::Index k = 0; k < ref.size(); ++k) worst = std::max(worst, oracle::rel_diff(ols.coef[k], ref[k]));
    worst = std::max(worst, oracle::rel_diff(ols.rss, oracle::rss(d, active)));
  }
  const double secs = seconds_since(start);
  Checks c;
  c.add("max_rel_diff", worst, worst <= 1e-7);
  c.add("seconds", secs, secs < 10.0);
  return c.done(secs);
}

Outcome table1() {
  const auto start = std::chrono::steady_clock::now();
  const auto tier = run_table("ex41-n400", 200);
  const auto& f = find(tier, Method::fhtd).tally;
  Checks c;
  c.add("FHTD_SS", f.ss_rate(), f.ss_rate() >= 0.97);
  c.add("FHTD_E", f.e_rate(), f.e_rate() >= 0.85);
  c.add("FHTD_TP", f.tp_mean(), f.tp_mean() >= 12.7);
  c.add("FHTD_FP", f.fp_mean(), f.fp_mean() <= 0.4);
  for (Method m : {Method::lasso, Method::alasso}) {
    const auto& t = find(tier, m).tally;
    c.add(method_name(m) + "_TP", t.tp_mean(), t.tp_mean() <= 1.5);
    c.add(method_name(m) + "_E", t.e_rate(), t.e_count == 0);
  }
  const auto& a = find(tier, Method::ar_oga3).tally;
  c.add("AR-OGA-3_E", a.e_rate(), a.e_rate() <= 0.25);
  return c.done(seconds_since(start));
}

Outcome table2() {
  const auto start = std::chrono::steady_clock::now();
  const auto tier = run_table("ex42-n400", 200);
  const auto& f = find(tier, Method::fhtd).tally;
  Checks c;
  c.add("FHTD_SS", f.ss_rate(), f.ss_rate() >= 0.97);
  c.add("FHTD_E", f.e_rate(), f.e_rate() >= 0.75);
  for (Method m : kAllMethods) {
    if (m == Method::fhtd) continue;
    const auto& t = find(tier, m).tally;
    c.add(method_name(m) + "_E", t.e_rate(), t.e_count == 0);
  }
  return c.done(seconds_since(start));
}

Outcome table_s3() {
  const auto start = std::chrono::steady_clock::now();
  const auto tier = run_table("ex_s5-n800", 200);
  const auto& f = find(tier, Method::fhtd).tally;
  Checks c;
  c.add("FHTD_E", f.e_rate(), f.e_rate() >= 0.85);
  c.add("FHTD_SS", f.ss_rate(), f.ss_rate() >= 0.97);
  return c.done(seconds_since(start));
}

Outcome example21() {
  const auto start = std::chrono::steady_clock::now();
  const double a = 0.3;
  const double limit = (1 + 2 * a) / (1 - a * a);
  const auto gap = example21_stats(a, 10000, 0, 200, 21);
  const auto path = example21_stats(a, 500, 1000, 200, 22);
  Checks c;
  c.add("mean_gap", gap.mean_scaled_gap, std::abs(gap.mean_scaled_gap - limit) <= 0.15 * limit);
  c.add("first_pick", path.first_pick_rate, path.first_pick_rate >= 0.95);
  c.add("y2_missed", path.y2_missed_rate, path.y2_missed_rate >= 0.9);
  return c.done(seconds_since(start));
}

Outcome example22() {
  const auto start = std::chrono::steady_clock::now();
  const auto s = example22_stats(2000, 500, 31);
  const double worst = *std::max_element(s.correct_rate.begin(), s.correct_rate.end());
  Checks c;
  c.add("max_correct_rate", worst, worst <= 0.6);
  return c.done(seconds_since(start));
}

Outcome example31() {
  const auto start = std::chrono::steady_clock::now();
  const auto s = example31_mspe(2, 2000, 5000, 41);
  Checks c;
  c.add("full_order", s.full_order, true);
  c.add("single_lag", s.single_lag, true);
  c.add("ratio", s.ratio(), s.ratio() >= 1.5 && s.ratio() <= 2.5);
  return c.done(seconds_since(start));
}

std::vector<double> min_eigs(int n, std::uint64_t seed) {
  SizeTier tier{};
  for (const auto& t : published_tiers(Builtin::ex41))
    if (t.n == n) tier = t;
  const auto spec = builtin_spec(Builtin::ex41, tier);
  const auto data = simulate(spec, seed);
  const auto design = LagDesign::from_dataset(data, FhtdConfig::defaults_for(n).q);
  auto exo = design.exogenous_columns();
  std::mt19937_64 rng(seed + 1);
  std::vector<double> out;
  for (int rep = 0; rep < 100; ++rep) {
    std::shuffle(exo.begin(), exo.end(), rng);
    const std::vector<ColumnId> J(exo.begin(), exo.begin() + 10);
    out.push_back(min_eig_diag(design, J));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome eigen_diagnostic() {
  const auto start = std::chrono::steady_clock::now();
  const auto e400 = min_eigs(400, 51);
  const auto e800 = min_eigs(800, 52);
  Checks c;
  c.add("min_400", e400.front(), e400.front() > 0);
  c.add("min_800", e800.front(), e800.front() > 0);
  c.add("p5_400", e400[4], true);
  c.add("p5_800", e800[4], e800[4] >= 0.5 * e400[4]);
  return c.done(seconds_since(start));
}

Outcome invariants() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, std::function<std::string()>>> suites{
      {"fsr_scale_invariance", [] { return props::fsr_scale_invariance(10, 61); }},
      {"projection_idempotence", [] { return props::projection_idempotence(100, 62); }},
      {"pythagorean", [] { return props::pythagorean(100, 63); }},
      {"ddt_monotone", [] { return props::ddt_monotone(20, 64); }},
      {"lasso_kkt", [] { return props::lasso_kkt(50, 65); }},
      {"tally_associativity", [] { return props::tally_associativity(200, 66); }},
      {"thread_determinism", [] { return props::thread_determinism(6); }},
  };
  Outcome out{true, ""};
  for (const auto& [name, run] : suites) {
    const std::string msg = run();
    if (!msg.empty()) {
      out.pass = false;
      out.detail += name + ": " + msg + "; ";
    }
  }
  if (out.pass) out.detail = "7 suites ok ";
  out.detail += "time=" + f3(seconds_since(start)) + "s";
  return out;
}

Outcome forecasting() {
  const auto start = std::chrono::steady_clock::now();
  Checks c;

  // Type-I error of the DM test on equal-accuracy pairs.
  std::mt19937_64 rng(71);
  std::normal_distribution<double> z;
  int rejections = 0;
  std::vector<double> a(216), b(216);
  for (int pair = 0; pair < 2000; ++pair) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = z(rng);
      b[i] = z(rng);
    }
    if (dm_test(a, b).p_value < 0.05) ++rejections;
  }
  const double size = rejections / 2000.0;
  c.add("dm_size", size, size >= 0.02 && size <= 0.08);

  // Random walk: FHTD forecasts have RMSE close to the innovation scale.
  const int total = 300;
  Eigen::VectorXd y(total);
  Eigen::MatrixXd x(total, 4);
  double level = 0;
  for (int t = 0; t < total; ++t) {
    level += z(rng);
    y[t] = level;
    for (int j = 0; j < 4; ++j) x(t, j) = z(rng);
  }
  ForecastConfig rw;
  rw.train_size = 200;
  rw.q = 4;
  rw.r = 4;
  rw.methods = {Method::fhtd};
  const double rw_rmse = rolling_forecast(y, x, rw).summary.at(0).rmse;
  c.add("random_walk_rmse", rw_rmse, rw_rmse > 0.8 && rw_rmse < 1.25);

  // Bundled housing-like data, all six methods.
  const ExperimentConfig config = load_config(data_dir + "/housing_like.json");
  const LoadedSeries data = load_csv(config.forecast.csv_path, config.forecast.columns);
  ForecastConfig fc = config.forecast.settings;
  fc.methods = config.methods;
  fc.greedy = config.greedy;
  fc.lasso = config.lasso;
  const auto report = rolling_forecast(data.y, data.x, fc);
  bool finite = report.summary.size() == 6;
  for (const auto& s : report.summary) {
    finite = finite && std::isfinite(s.rmse) && std::isfinite(s.mae);
    c.add(method_name(s.method) + "_rmse", s.rmse, std::isfinite(s.rmse) && std::isfinite(s.mae));
  }
  c.add("methods", static_cast<double>(report.summary.size()), finite);
  return c.done(seconds_since(start));
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<std::string, std::function<Outcome()>>> all{
      {1, {"oracle equivalence", oracle_equivalence}},
      {2, {"ex41 (400, 200, 5)", table1}},
      {3, {"ex42 (400, 200, 5)", table2}},
      {4, {"ex_s5 (800, 250, 4)", table_s3}},
      {5, {"example21 OGA failure", example21}},
      {6, {"example22 LASSO inconsistency", example22}},
      {7, {"example31 MSPE constants", example31}},
      {8, {"minimum eigenvalue diagnostic", eigen_diagnostic}},
      {9, {"invariant suites", invariants}},
      {10, {"forecast pipeline", forecasting}},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--data-dir" && i + 1 < argc) {
      data_dir = argv[++i];
    } else {
      try {
        selected.push_back(std::stoi(arg));
      } catch (const std::exception&) {
        std::cerr << "usage: acceptance [criterion ...] [--data-dir DIR]\n";
        return 2;
      }
    }
  }
  if (selected.empty())
    for (const auto& [id, entry] : criteria()) selected.push_back(id);

  int failed = 0;
  for (int id : selected) {
    const auto it = criteria().find(id);
    if (it == criteria().end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << it->second.first << ": " << o.detail << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
