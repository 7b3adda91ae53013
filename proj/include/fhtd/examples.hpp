#pragma once

#include <cstdint>
#include <vector>

namespace fhtd {

struct Example21Stats {
  /// Mean of (F1 - F2) / n over replications.
  double mean_scaled_gap = 0.0;
  /// Share of replications whose first OGA pick is y_{t-1}; NaN when p = 0.
  double first_pick_rate = 0.0;
  /// Share of replications whose 40-step OGA path never contains y_{t-2}.
  double y2_missed_rate = 0.0;
};

/// y_t = (1 + a) y_{t-1} - a y_{t-2} + e_t with p irrelevant white-noise
/// covariates. F_i = (y'o_i)^2 / ||o_i||^2 with o_i the lag-i column over
/// t = 3..n. With p = 0 the OGA path statistics are skipped.
Example21Stats example21_stats(double a, int n, int p, int reps, std::uint64_t seed, int threads = 1);

struct Example22Stats {
  std::vector<double> lambdas;
  /// Per lambda, share of replications where the LASSO keeps y_{t-1} and
  /// x_{t-1} and drops y_{t-2}.
  std::vector<double> correct_rate;
};

/// y_t = y_{t-1} + x_{t-1} + e_t; unstandardized LASSO on
/// {y_{t-1}, y_{t-2}, x_{t-1}} over a geometric grid of `grid_points`
/// lambdas spanning [n^{1/2}, n^{3/2}].
Example22Stats example22_stats(int n, int reps, std::uint64_t seed, int grid_points = 25, int threads = 1);

struct Example31Stats {
  /// n (MSPE - sigma^2) for the least-squares predictor on all k lags.
  double full_order = 0.0;
  /// The same for the predictor using y_{t-k} only.
  double single_lag = 0.0;
  double ratio() const { return full_order / single_lag; }
};

/// y_t = y_{t-k} + e_t with standard normal errors. The excess MSPE of a
/// predictor is estimated by n * mean((y_hat - y_{n+1-k})^2), the conditional
/// mean of y_{n+1} being y_{n+1-k}.
Example31Stats example31_mspe(int k, int n, int reps, std::uint64_t seed, int threads = 1);

}  // namespace fhtd
