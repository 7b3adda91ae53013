#include "fhtd/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fhtd/parallel.hpp"

namespace fhtd {
namespace {

LagDesign window_design(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int start, int len, int q, int r) {
  return LagDesign::from_series(y.segment(start, len), x.middleRows(start, len), q, r);
}

FhtdConfig with_cd(const ForecastConfig& config, double c, double d) {
  FhtdConfig out = config.greedy;
  out.q = config.q;
  out.c = c;
  out.d = d;
  out.penalty_weight.reset();
  return out;
}

bool tunable(Method m) { return m == Method::fhtd || m == Method::ar_oga3; }

// Picks (c, d) by validation RMSE; ties go to the earlier grid point.
std::pair<double, double> tune(Method method, const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int start,
                               const ForecastConfig& config) {
  const int fit_len = static_cast<int>(std::floor((1.0 - config.validation_fraction) * config.train_size));
  const LagDesign raw = window_design(y, x, start, fit_len, config.q, config.r);
  const LagDesign sel = config.intercept ? raw.demeaned() : raw;
  const FhtdConfig first = with_cd(config, config.c_grid.front(), config.d_grid.front());
  const SelectionPath path = method == Method::fhtd ? fsr_path(sel, first) : oga_path(sel, first, true);

  const std::vector<double> only_d{config.d_grid.front()};
  const auto& d_grid = method == Method::fhtd ? config.d_grid : only_d;
  double best = std::numeric_limits<double>::infinity();
  std::pair<double, double> choice{config.c_grid.front(), method == Method::fhtd ? config.d_grid.front() : 0.0};
  for (double c : config.c_grid) {
    const FhtdConfig cfg_c = with_cd(config, c, d_grid.front());
    const SelectionPath p = with_penalty(path, sel.n(), cfg_c.hdic_weight(sel.num_exogenous()));
    for (double d : d_grid) {
      const FhtdConfig cfg = with_cd(config, c, d);
      SelectedModel model = method == Method::fhtd ? fhtd_from_path(sel, p, cfg) : oga3_from_path(sel, p, cfg);
      if (config.intercept) model = refit_with_intercept(raw, model);
      double sse = 0.0;
      for (int t = start + fit_len; t < start + config.train_size; ++t) {
        const double e = y[t] - predict_at(model, y, x, t);
        sse += e * e;
      }
      if (sse < best) {
        best = sse;
        choice = {c, method == Method::fhtd ? d : 0.0};
      }
    }
  }
  return choice;
}

}  // namespace

void ForecastConfig::validate(int total_points, int num_series) const {
  if (q < 1) throw Error("InvalidConfig", "forecast q must be >= 1");
  if (r < 1) throw Error("InvalidConfig", "forecast r must be >= 1");
  if (methods.empty()) throw Error("InvalidConfig", "no forecasting methods configured");
  if (c_grid.empty() || d_grid.empty()) throw Error("InvalidConfig", "tuning grids must be non-empty");
  for (double v : c_grid) {
    if (!(v > 0.0)) throw Error("InvalidConfig", "c grid values must be > 0");
  }
  for (double v : d_grid) {
    if (!(v > 0.0)) throw Error("InvalidConfig", "d grid values must be > 0");
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw Error("InvalidConfig", "validation fraction must lie in (0, 1)");
  }
  const int tests = test_size.value_or(total_points - train_size);
  if (train_size < 1 || tests < 1 || train_size + tests > total_points) {
    throw Error("WindowTooSmall", "need train_size + test_size <= " + std::to_string(total_points) +
                                      " with both positive");
  }
  const int lag = std::max(q, num_series > 0 ? r : 0);
  const int fit_len = static_cast<int>(std::floor((1.0 - validation_fraction) * train_size));
  const int p_star = num_series * r;
  const int need = q + std::min(greedy.K, std::max(p_star, 1));
  if (fit_len - lag <= need || train_size - fit_len < 1) {
    throw Error("WindowTooSmall", "training window of " + std::to_string(train_size) +
                                      " points leaves too few rows for q + K = " + std::to_string(need));
  }
}

double predict_at(const SelectedModel& model, const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int t) {
  double pred = model.has_intercept ? model.intercept : 0.0;
  Eigen::Index k = 0;
  for (int lag : model.Q_hat) pred += model.final_coef[k++] * y[t - lag];
  for (const auto& key : model.J_hat) pred += model.final_coef[k++] * x(t - key.lag, key.series - 1);
  return pred;
}

ForecastReport rolling_forecast(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const ForecastConfig& config) {
  if (x.rows() != y.size()) throw Error("InvalidInput", "response and covariates differ in length");
  const int total = static_cast<int>(y.size());
  config.validate(total, static_cast<int>(x.cols()));
  const int tests = config.test_size.value_or(total - config.train_size);
  const std::size_t m = config.methods.size();

  ForecastReport report;
  report.methods = config.methods;
  report.records.resize(static_cast<std::size_t>(tests));

  std::vector<std::pair<double, double>> frozen(m);
  auto run_window = [&](int w, bool use_frozen) {
    const int target = total - tests + w;
    const int start = target - config.train_size;
    const LagDesign design = window_design(y, x, start, config.train_size, config.q, config.r);
    ForecastRecord& rec = report.records[static_cast<std::size_t>(w)];
    rec.target_index = target;
    rec.actual = y[target];
    rec.predicted.resize(m);
    rec.abs_error.resize(m);
    rec.tuned.assign(m, {0.0, 0.0});
    for (std::size_t i = 0; i < m; ++i) {
      const Method method = config.methods[i];
      FhtdConfig cfg = with_cd(config, config.greedy.c, config.greedy.d);
      if (tunable(method)) {
        rec.tuned[i] = use_frozen ? frozen[i] : tune(method, y, x, start, config);
        cfg = with_cd(config, rec.tuned[i].first, method == Method::fhtd ? rec.tuned[i].second : config.greedy.d);
      }
      const SelectedModel model = select_model(method, design, cfg, config.lasso, config.intercept);
      rec.predicted[i] = predict_at(model, y, x, target);
      rec.abs_error[i] = std::abs(rec.actual - rec.predicted[i]);
      if (!std::isfinite(rec.predicted[i])) {
        throw Error("NonFinite", method_name(method) + " produced a non-finite forecast for index " +
                                     std::to_string(target));
      }
    }
  };

  int first = 0;
  if (config.freeze_tuning) {
    run_window(0, false);
    frozen = report.records.front().tuned;
    first = 1;
  }
  parallel_for(tests - first, config.threads, [&](int i) { run_window(first + i, config.freeze_tuning); });

  std::optional<std::size_t> fhtd_index;
  for (std::size_t i = 0; i < m; ++i) {
    if (config.methods[i] == Method::fhtd) fhtd_index = i;
  }
  std::vector<std::vector<double>> errors(m);
  for (const auto& rec : report.records) {
    for (std::size_t i = 0; i < m; ++i) errors[i].push_back(rec.actual - rec.predicted[i]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    ForecastSummary s;
    s.method = config.methods[i];
    s.rmse = rmse(errors[i]);
    s.mae = mae(errors[i]);
    if (fhtd_index && *fhtd_index != i && errors[i].size() >= 10) {
      s.dm_vs_fhtd = dm_test(errors[i], errors[*fhtd_index]);
    }
    report.summary.push_back(s);
  }
  return report;
}

}  // namespace fhtd
