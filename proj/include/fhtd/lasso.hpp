#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fhtd {

/// Settings of the coordinate-descent LASSO. The objective is
///   sum_t (y_t - b0 - x_t' beta)^2 + lambda * sum_j pf_j |beta_j|
/// on the (optionally standardized) columns, without a 1/(2n) factor.
struct LassoConfig {
  /// Strictly decreasing; when empty a geometric grid of `n_lambda` points
  /// from lambda_max down to lambda_max * lambda_min_ratio is used.
  std::vector<double> lambda_grid;
  int n_lambda = 100;
  /// Unset: 0.01 when rows < columns, else 1e-4.
  std::optional<double> lambda_min_ratio;
  /// On generated grids, end the path early once the fraction of deviance
  /// explained passes 0.999, improves by less than 1e-5 relative, or the
  /// model has as many nonzeros as rows (at least 5 lambdas are kept).
  bool early_stop = true;
  int max_iter = 10000;
  /// Convergence on the largest coefficient change in standardized units.
  double tol = 1e-7;
  bool standardize = true;
  /// When false the first `ar_columns` columns passed to lasso_path are unpenalized.
  bool penalize_ar = true;
  bool intercept = false;

  void validate() const;
};

struct LassoFit {
  std::vector<double> lambdas;
  /// Coefficients on the original column scale, one vector per lambda.
  std::vector<Eigen::VectorXd> coefficients;
  /// Coefficients on the standardized scale the penalty acts on.
  std::vector<Eigen::VectorXd> std_coefficients;
  std::vector<double> intercepts;
  std::vector<std::vector<int>> active;
  std::vector<double> rss;
  std::vector<double> bic;
  std::vector<bool> converged;
  /// Largest violation of the subgradient optimality conditions per lambda,
  /// in standardized per-observation units.
  std::vector<double> kkt_violation;
  int chosen = 0;
  /// Set by adaptive_lasso when stage one selects nothing.
  bool all_zero_first_stage = false;

  const Eigen::VectorXd& chosen_coefficients() const { return coefficients[static_cast<std::size_t>(chosen)]; }
  double chosen_intercept() const { return intercepts[static_cast<std::size_t>(chosen)]; }
};

/// Weighted LASSO path with per-column penalty factors (0 = unpenalized,
/// empty = all ones). BIC(lambda) = n log(rss/n) + log(n) * df, df = number of
/// nonzero coefficients; the chosen index is the BIC argmin.
LassoFit weighted_lasso_path(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                             const LassoConfig& config, std::span<const double> penalty_factors);

/// LASSO path; the first `ar_columns` columns are unpenalized iff
/// `config.penalize_ar` is false.
LassoFit lasso_path(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                    const LassoConfig& config, int ar_columns = 0);

/// Two-stage adaptive LASSO. Stage one is lasso_path (AR block unpenalized iff
/// !config.penalize_ar); stage two penalizes each surviving column by
/// 1/|beta_j^{(1)}| on the standardized scale, all columns penalized, and
/// drops columns that stage one set to zero.
LassoFit adaptive_lasso(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                        const LassoConfig& config, int ar_columns = 0);

}  // namespace fhtd
