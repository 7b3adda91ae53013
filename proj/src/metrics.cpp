#include "fhtd/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace fhtd {

void SelectionTally::merge(const SelectionTally& other) {
  reps += other.reps;
  e_count += other.e_count;
  ss_count += other.ss_count;
  tp_sum += other.tp_sum;
  fp_sum += other.fp_sum;
}

void tally(const std::set<int>& true_Q, const std::set<ExoKey>& true_J, std::span<const int> est_Q,
           std::span<const ExoKey> est_J, SelectionTally& out) {
  const std::set<int> q(est_Q.begin(), est_Q.end());
  const std::set<ExoKey> j(est_J.begin(), est_J.end());
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  for (int lag : q) (true_Q.count(lag) ? tp : fp) += 1;
  for (const auto& key : j) (true_J.count(key) ? tp : fp) += 1;
  const bool covers = std::includes(q.begin(), q.end(), true_Q.begin(), true_Q.end()) &&
                      std::includes(j.begin(), j.end(), true_J.begin(), true_J.end());
  out.reps += 1;
  out.tp_sum += tp;
  out.fp_sum += fp;
  if (covers) out.ss_count += 1;
  if (covers && fp == 0) out.e_count += 1;
}

double rmse(std::span<const double> errors) {
  if (errors.empty()) return 0.0;
  double s = 0.0;
  for (double e : errors) s += e * e;
  return std::sqrt(s / static_cast<double>(errors.size()));
}

double mae(std::span<const double> errors) {
  if (errors.empty()) return 0.0;
  std::vector<double> a;
  a.reserve(errors.size());
  for (double e : errors) a.push_back(std::abs(e));
  std::sort(a.begin(), a.end());
  const std::size_t m = a.size() / 2;
  return a.size() % 2 ? a[m] : 0.5 * (a[m - 1] + a[m]);
}

DmResult dm_test(std::span<const double> errors_a, std::span<const double> errors_b, int bartlett_lags) {
  if (errors_a.size() != errors_b.size()) throw Error("InvalidInput", "DM test needs equal-length error series");
  if (errors_a.size() < 10) throw Error("InvalidInput", "DM test needs at least 10 forecast errors");
  if (bartlett_lags < 0) throw Error("InvalidInput", "Bartlett lag count must be >= 0");
  const std::size_t w = errors_a.size();
  std::vector<double> d(w);
  for (std::size_t t = 0; t < w; ++t) d[t] = std::abs(errors_a[t]) - std::abs(errors_b[t]);

  DmResult out;
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(w);
  // loss differences constant up to rounding
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  const double tol = 1e-12 * std::max({1.0, std::abs(*lo), std::abs(*hi)});
  if (*hi - *lo <= tol) {
    out.degenerate = true;
    out.statistic = 0.0;
    out.p_value = std::abs(mean) <= tol ? 1.0 : 0.0;
    return out;
  }

  auto autocov = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t t = k; t < w; ++t) s += (d[t] - mean) * (d[t - k] - mean);
    return s / static_cast<double>(w);
  };
  double var = autocov(0);
  const std::size_t lags = std::min<std::size_t>(static_cast<std::size_t>(bartlett_lags), w - 1);
  for (std::size_t k = 1; k <= lags; ++k) {
    var += 2.0 * (1.0 - static_cast<double>(k) / static_cast<double>(lags + 1)) * autocov(k);
  }
  if (!(var > 0.0)) {
    out.degenerate = true;
    out.p_value = mean == 0.0 ? 1.0 : 0.0;
    return out;
  }
  out.statistic = mean / std::sqrt(var / static_cast<double>(w));
  out.p_value = std::erfc(std::abs(out.statistic) / std::sqrt(2.0));
  return out;
}

}  // namespace fhtd
