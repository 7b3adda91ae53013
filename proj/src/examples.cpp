#include "fhtd/examples.hpp"

#include <cmath>
#include <limits>

#include "fhtd/baselines.hpp"
#include "fhtd/parallel.hpp"
#include "fhtd/rng.hpp"
#include "fhtd/tsdgp.hpp"

namespace fhtd {
namespace {

void check_reps(int reps, int n) {
  if (reps < 1) throw Error("InvalidConfig", "replications must be >= 1");
  if (n < 10) throw Error("InvalidConfig", "sample size must be >= 10");
}

}  // namespace

Example21Stats example21_stats(double a, int n, int p, int reps, std::uint64_t seed, int threads) {
  check_reps(reps, n);
  if (!(std::abs(a) < 1.0)) throw Error("InvalidConfig", "example 2.1 needs |a| < 1");
  if (p < 0) throw Error("InvalidConfig", "p must be >= 0");
  const DgpSpec spec = builtin_spec(Builtin::ex21, SizeTier{n, p, 1}, a);

  std::vector<double> gap(static_cast<std::size_t>(reps));
  std::vector<int> first(static_cast<std::size_t>(reps));
  std::vector<int> missed(static_cast<std::size_t>(reps));
  parallel_for(reps, threads, [&](int rep) {
    const Dataset data = simulate(spec, replication_seed(seed, static_cast<std::uint64_t>(rep)));
    const LagDesign design = LagDesign::from_dataset(data, 2);
    const auto& y = design.response();
    const double f1 = std::pow(y.dot(design.column(0)), 2) / design.column_norm2(0);
    const double f2 = std::pow(y.dot(design.column(1)), 2) / design.column_norm2(1);
    gap[static_cast<std::size_t>(rep)] = (f1 - f2) / n;
    if (p == 0) return;
    FhtdConfig config;
    config.q = 2;
    const SelectionPath path = oga_path(design, config, false);
    bool has_y2 = false;
    for (const auto& step : path.steps) has_y2 = has_y2 || step.column == 1;
    first[static_cast<std::size_t>(rep)] = !path.steps.empty() && path.steps.front().column == 0;
    missed[static_cast<std::size_t>(rep)] = !has_y2;
  });

  Example21Stats out;
  double g = 0.0;
  int f = 0;
  int m = 0;
  for (int rep = 0; rep < reps; ++rep) {
    g += gap[static_cast<std::size_t>(rep)];
    f += first[static_cast<std::size_t>(rep)];
    m += missed[static_cast<std::size_t>(rep)];
  }
  out.mean_scaled_gap = g / reps;
  if (p == 0) {
    out.first_pick_rate = std::numeric_limits<double>::quiet_NaN();
    out.y2_missed_rate = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.first_pick_rate = static_cast<double>(f) / reps;
    out.y2_missed_rate = static_cast<double>(m) / reps;
  }
  return out;
}

Example22Stats example22_stats(int n, int reps, std::uint64_t seed, int grid_points, int threads) {
  check_reps(reps, n);
  if (grid_points < 2) throw Error("InvalidConfig", "the lambda grid needs at least two points");
  const DgpSpec spec = builtin_spec(Builtin::ex22, SizeTier{n, 1, 1});

  LassoConfig config;
  config.standardize = false;
  config.intercept = false;
  const double hi = std::pow(static_cast<double>(n), 1.5);
  const double lo = std::pow(static_cast<double>(n), 0.5);
  for (int i = 0; i < grid_points; ++i) {
    config.lambda_grid.push_back(hi * std::pow(lo / hi, static_cast<double>(i) / (grid_points - 1)));
  }

  const auto g = static_cast<std::size_t>(grid_points);
  std::vector<std::vector<char>> hits(static_cast<std::size_t>(reps), std::vector<char>(g, 0));
  parallel_for(reps, threads, [&](int rep) {
    const Dataset data = simulate(spec, replication_seed(seed, static_cast<std::uint64_t>(rep)));
    const LagDesign design = LagDesign::from_dataset(data, 2);
    const LassoFit fit = lasso_path(design.columns(), design.response(), config, 2);
    for (std::size_t i = 0; i < g; ++i) {
      const auto& b = fit.coefficients[i];
      hits[static_cast<std::size_t>(rep)][i] = b[0] != 0.0 && b[1] == 0.0 && b[2] != 0.0;
    }
  });

  Example22Stats out;
  out.lambdas = config.lambda_grid;
  out.correct_rate.assign(g, 0.0);
  for (const auto& row : hits) {
    for (std::size_t i = 0; i < g; ++i) out.correct_rate[i] += row[i];
  }
  for (double& r : out.correct_rate) r /= reps;
  return out;
}

Example31Stats example31_mspe(int k, int n, int reps, std::uint64_t seed, int threads) {
  check_reps(reps, n);
  if (k < 1 || 2 * k >= n) throw Error("InvalidConfig", "example 3.1 needs 1 <= k < n/2");
  const DgpSpec spec = builtin_spec(Builtin::ex31, SizeTier{n, 0, 1}, k);

  std::vector<double> full(static_cast<std::size_t>(reps));
  std::vector<double> single(static_cast<std::size_t>(reps));
  parallel_for(reps, threads, [&](int rep) {
    const Dataset data = simulate(spec, replication_seed(seed, static_cast<std::uint64_t>(rep)));
    const LagDesign design = LagDesign::from_dataset(data, k);
    const auto& y = data.y;
    const double target = y[n - k];  // y_{n+1-k}, 0-based

    std::vector<ColumnId> all = design.ar_columns();
    const OlsResult f = ols_solve(design, all);
    double pred = 0.0;
    for (int i = 1; i <= k; ++i) pred += f.coef[i - 1] * y[n - i];
    const ColumnId last = design.ar_column(k);
    const OlsResult s = ols_solve(design, std::span<const ColumnId>(&last, 1));
    const double pred_single = s.coef[0] * y[n - k];

    full[static_cast<std::size_t>(rep)] = (pred - target) * (pred - target);
    single[static_cast<std::size_t>(rep)] = (pred_single - target) * (pred_single - target);
  });

  Example31Stats out;
  for (int rep = 0; rep < reps; ++rep) {
    out.full_order += full[static_cast<std::size_t>(rep)];
    out.single_lag += single[static_cast<std::size_t>(rep)];
  }
  out.full_order *= static_cast<double>(n) / reps;
  out.single_lag *= static_cast<double>(n) / reps;
  return out;
}

}  // namespace fhtd
