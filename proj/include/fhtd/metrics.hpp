#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "fhtd/types.hpp"

namespace fhtd {

/// Selection counts over replications. Sums are integers so merging is
/// exact and order-independent.
struct SelectionTally {
  std::int64_t reps = 0;
  std::int64_t e_count = 0;
  std::int64_t ss_count = 0;
  std::int64_t tp_sum = 0;
  std::int64_t fp_sum = 0;

  void merge(const SelectionTally& other);
  double tp_mean() const { return reps ? static_cast<double>(tp_sum) / static_cast<double>(reps) : 0.0; }
  double fp_mean() const { return reps ? static_cast<double>(fp_sum) / static_cast<double>(reps) : 0.0; }
  double e_rate() const { return reps ? static_cast<double>(e_count) / static_cast<double>(reps) : 0.0; }
  double ss_rate() const { return reps ? static_cast<double>(ss_count) / static_cast<double>(reps) : 0.0; }

  bool operator==(const SelectionTally&) const = default;
};

/// Adds one replication: E iff both sets match exactly, SS iff both contain
/// the truth, TP/FP count hits and misses over AR lags and exogenous terms.
void tally(const std::set<int>& true_Q, const std::set<ExoKey>& true_J, std::span<const int> est_Q,
           std::span<const ExoKey> est_J, SelectionTally& out);

double rmse(std::span<const double> errors);
/// Median of the absolute errors.
double mae(std::span<const double> errors);

struct DmResult {
  double statistic = 0.0;
  double p_value = 1.0;
  /// Set when every loss differential is identical.
  bool degenerate = false;
};

/// Diebold-Mariano test on absolute loss, d_t = |a_t| - |b_t|. The variance
/// is the lag-0 autocovariance plus Bartlett-weighted autocovariances up to
/// `bartlett_lags`; the p-value is two-sided normal. Throws
/// Error("InvalidInput") for unequal lengths or fewer than 10 points.
DmResult dm_test(std::span<const double> errors_a, std::span<const double> errors_b, int bartlett_lags = 0);

}  // namespace fhtd
