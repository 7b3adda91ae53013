#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fhtd/baselines.hpp"
#include "fhtd/metrics.hpp"

namespace fhtd {

struct ForecastConfig {
  /// Time points in each training window.
  int train_size = 0;
  /// Number of one-step-ahead forecasts, taken from the end of the sample.
  /// Unset: every point after the first training window.
  std::optional<int> test_size;
  int q = 1;
  /// Lags per exogenous series.
  int r = 1;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::vector<double> c_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  std::vector<double> d_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  /// Trailing share of each training window used to tune c and d.
  double validation_fraction = 0.2;
  bool intercept = false;
  /// Tune c and d in the first window only and reuse them afterwards.
  bool freeze_tuning = false;
  /// K, eta and threshold mode for the greedy selectors; c, d come from tuning.
  FhtdConfig greedy;
  LassoConfig lasso;
  int threads = 1;

  void validate(int total_points, int num_series) const;
};

struct ForecastRecord {
  /// 0-based time index of the forecast target.
  int target_index = 0;
  double actual = 0.0;
  /// One entry per configured method.
  std::vector<double> predicted;
  std::vector<double> abs_error;
  /// Tuned (c, d) per method; zero for the LASSO family.
  std::vector<std::pair<double, double>> tuned;
};

struct ForecastSummary {
  Method method = Method::fhtd;
  double rmse = 0.0;
  double mae = 0.0;
  /// DM test of this method against FHTD when FHTD is among the methods.
  std::optional<DmResult> dm_vs_fhtd;
};

struct ForecastReport {
  std::vector<Method> methods;
  std::vector<ForecastRecord> records;
  std::vector<ForecastSummary> summary;
};

/// Rolling-window one-step-ahead forecasts of y from its own lags and lags of
/// the columns of x. For FHTD and AR-OGA-3, c (and d for FHTD) are picked on
/// the grid by the RMSE of predictions for the last validation_fraction of
/// the window from a model fitted on the rest; the model is then refitted on
/// the full window. The LASSO family is tuned by BIC inside each fit. Throws
/// Error("WindowTooSmall") when a window cannot support the design.
ForecastReport rolling_forecast(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const ForecastConfig& config);

/// Prediction of y[t] from the model's lags of y and x (0-based t).
double predict_at(const SelectedModel& model, const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int t);

}  // namespace fhtd
