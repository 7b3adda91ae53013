#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fhtd/projection.hpp"
#include "fhtd/types.hpp"

namespace fhtd {

enum class ThresholdMode {
  /// d * min{(q + s0)^{1/2}, s0_under^{1/2} q^{1/2}} / n^{1/2}
  simulation,
  /// max{q^{3/2}/n^{1/2}, min{(q + s0)^{1/2}, s0_under^{1/2} q^{1/eta}}} * d_tilde / n^{1/2}
  theoretical,
};

struct FhtdConfig {
  int q = 0;
  int K = 40;
  double eta = 2.0;
  double c = 0.5;
  double d = 0.5;
  ThresholdMode threshold_mode = ThresholdMode::simulation;
  /// Slowly diverging d~_n for the theoretical threshold; log(log(n)) if unset.
  std::optional<double> d_tilde;
  /// Overrides the HDIC penalty w_{n,p}; c * p*^{1/eta} if unset.
  std::optional<double> penalty_weight;

  /// q = floor(2 n^{1/4}) and the remaining defaults.
  static FhtdConfig defaults_for(int n);
  /// Throws Error("InvalidConfig").
  void validate(int p_star) const;
  double hdic_weight(int p_star) const;
};

/// n log(rss / n) + w * model_size; -inf when rss <= 0.
double hdic(double n, double rss, int model_size, double w);

/// w = c * p*^{1/eta}.
double hdic_penalty(int p_star, double c, double eta);

struct PathStep {
  ColumnId column = 0;
  double score = 0.0;
  double rss = 0.0;
  double hdic = 0.0;
};

struct SelectionPath {
  /// Columns coerced into the model before the greedy steps.
  std::vector<ColumnId> base;
  std::vector<PathStep> steps;
  /// Set when the path stopped before K because no eligible candidate remained.
  bool exhausted = false;

  std::vector<ColumnId> chosen(int m) const;
};

enum class GreedyRule { fsr, oga };

/// Greedy forward selection: start from `base`, then for m = 1..K append the
/// eligible candidate with the largest score (ties -> lowest column id),
/// recording rss and HDIC(base + chosen) with penalty weight `w` at each step.
SelectionPath greedy_path(const LagDesign& design, std::span<const ColumnId> base,
                          std::span<const ColumnId> candidates, int K, GreedyRule rule, double w);

/// FSR over the exogenous candidates after coercing all q AR lags.
/// Throws Error("InsufficientData") when rows <= q + K and
/// Error("NoEligibleCandidates") when no step can be taken.
SelectionPath fsr_path(const LagDesign& design, const FhtdConfig& config);

/// Copy of `path` with the HDIC of every step recomputed for penalty weight `w`.
SelectionPath with_penalty(const SelectionPath& path, double n, double w);

/// 1-based k of the first HDIC minimum along the path. Throws Error("EmptyPath").
int hdic_stop(const SelectionPath& path);

/// Keeps each removable column whose deletion from fixed + removable raises HDIC.
std::vector<ColumnId> trim(const LagDesign& design, std::span<const ColumnId> fixed,
                           std::span<const ColumnId> removable, double w);

struct DdtResult {
  std::vector<int> Q_hat;       ///< retained AR lags, ascending
  Eigen::VectorXd alpha_hat;    ///< length q
  double threshold = 0.0;
  bool rank_deficient = false;
};

/// Data-driven threshold of the AR coefficients from the OLS fit on [q] + J_hat.
double ddt_threshold(const FhtdConfig& config, int n, int s0, int s0_under);
DdtResult ddt(const LagDesign& design, const FhtdConfig& config, std::span<const ColumnId> J_hat);

struct SelectedModel {
  std::vector<int> Q_hat;
  std::vector<ExoKey> J_hat;
  Eigen::VectorXd alpha_hat;   ///< AR coefficients from the thresholding regression (empty if none)
  /// Refit coefficients ordered as Q_hat then J_hat.
  Eigen::VectorXd final_coef;
  double intercept = 0.0;
  bool has_intercept = false;
  double sigma2_hat = 0.0;
  /// Threshold applied to the AR coefficients; 0 for selectors without one.
  double threshold_used = 0.0;
  bool rank_deficient = false;
  /// Length of the selection path and its HDIC stopping index (0 if unused).
  int path_length = 0;
  int k_hat = 0;

  /// Columns of Q_hat + J_hat in `design`, in final_coef order.
  std::vector<ColumnId> column_ids(const LagDesign& design) const;
};

/// Builds Q_hat/J_hat from a column set and refits by OLS on them.
SelectedModel refit_model(const LagDesign& design, std::span<const ColumnId> columns);

/// Refits the model's columns plus an intercept on `raw`.
SelectedModel refit_with_intercept(const LagDesign& raw, const SelectedModel& model);

/// HDIC stop, Trim and DDT on a precomputed FSR path.
SelectedModel fhtd_from_path(const LagDesign& design, const SelectionPath& path, const FhtdConfig& config);

SelectedModel fhtd_select(const LagDesign& design, const FhtdConfig& config);

/// Centers every variable over the window, selects on the centered data, then
/// refits the selected columns with an intercept on the raw data.
SelectedModel fhtd_select_with_intercept(const LagDesign& design, const FhtdConfig& config);

}  // namespace fhtd
