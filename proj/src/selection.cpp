#include "fhtd/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace fhtd {

FhtdConfig FhtdConfig::defaults_for(int n) {
  FhtdConfig config;
  config.q = static_cast<int>(std::floor(2.0 * std::pow(static_cast<double>(n), 0.25)));
  return config;
}

void FhtdConfig::validate(int p_star) const {
  if (q < 1) throw Error("InvalidConfig", "q must be >= 1");
  if (K < 1) throw Error("InvalidConfig", "K must be >= 1");
  if (p_star < 0) throw Error("InvalidConfig", "negative candidate count");
  if (!(c > 0.0)) throw Error("InvalidConfig", "c must be > 0");
  if (!(d > 0.0)) throw Error("InvalidConfig", "d must be > 0");
  if (!(eta >= 2.0)) throw Error("InvalidConfig", "eta must be >= 2");
  if (d_tilde && !(*d_tilde > 0.0)) throw Error("InvalidConfig", "d_tilde must be > 0");
  if (penalty_weight && !(*penalty_weight >= 0.0)) throw Error("InvalidConfig", "penalty weight must be >= 0");
}

double FhtdConfig::hdic_weight(int p_star) const {
  return penalty_weight ? *penalty_weight : hdic_penalty(p_star, c, eta);
}

double hdic_penalty(int p_star, double c, double eta) {
  return c * std::pow(static_cast<double>(p_star), 1.0 / eta);
}

double hdic(double n, double rss, int model_size, double w) {
  if (!(rss > 0.0)) return -std::numeric_limits<double>::infinity();
  return n * std::log(rss / n) + w * model_size;
}

std::vector<ColumnId> SelectionPath::chosen(int m) const {
  std::vector<ColumnId> out;
  const int count = std::min<int>(m, static_cast<int>(steps.size()));
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(steps[static_cast<std::size_t>(i)].column);
  return out;
}

SelectionPath greedy_path(const LagDesign& design, std::span<const ColumnId> base,
                          std::span<const ColumnId> candidates, int K, GreedyRule rule, double w) {
  SelectionPath path;
  path.base.assign(base.begin(), base.end());
  ActiveFit fit(design, base);

  std::vector<bool> eligible(static_cast<std::size_t>(design.num_columns()), false);
  for (ColumnId id : candidates) eligible[static_cast<std::size_t>(id)] = true;

  Eigen::VectorXd scores;
  const double n = design.n();
  for (int m = 1; m <= K; ++m) {
    if (rule == GreedyRule::fsr) {
      fit.fsr_scores(scores);
    } else {
      fit.oga_scores(scores);
    }
    ColumnId best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (ColumnId id : candidates) {
      if (!eligible[static_cast<std::size_t>(id)]) continue;
      const double s = scores[id];
      if (s > best_score || (s == best_score && best >= 0 && id < best)) {
        best_score = s;
        best = id;
      }
    }
    if (best < 0 || !std::isfinite(best_score)) {
      path.exhausted = true;
      break;
    }
    fit.append(best);
    eligible[static_cast<std::size_t>(best)] = false;
    const double rss = fit.rss();
    const int size = static_cast<int>(base.size()) + m;
    path.steps.push_back({best, best_score, rss, hdic(n, rss, size, w)});
  }
  return path;
}

SelectionPath fsr_path(const LagDesign& design, const FhtdConfig& config) {
  const int p_star = design.num_exogenous();
  config.validate(p_star);
  if (config.q != design.q()) throw Error("InvalidConfig", "config q differs from the design's AR lag count");
  const int K = std::min(config.K, p_star);
  if (design.rows() <= config.q + K) {
    throw Error("InsufficientData", std::to_string(design.rows()) + " rows cannot support q + K = " +
                                        std::to_string(config.q + K));
  }
  const auto base = design.ar_columns();
  const auto candidates = design.exogenous_columns();
  return greedy_path(design, base, candidates, K, GreedyRule::fsr, config.hdic_weight(p_star));
}

SelectionPath with_penalty(const SelectionPath& path, double n, double w) {
  SelectionPath out = path;
  const int base = static_cast<int>(path.base.size());
  for (std::size_t m = 0; m < out.steps.size(); ++m) {
    out.steps[m].hdic = hdic(n, out.steps[m].rss, base + static_cast<int>(m) + 1, w);
  }
  return out;
}

int hdic_stop(const SelectionPath& path) {
  if (path.steps.empty()) throw Error("EmptyPath", "HDIC stopping needs a non-empty path");
  int best = 0;
  for (int m = 1; m < static_cast<int>(path.steps.size()); ++m) {
    if (path.steps[static_cast<std::size_t>(m)].hdic < path.steps[static_cast<std::size_t>(best)].hdic) best = m;
  }
  return best + 1;
}

std::vector<ColumnId> trim(const LagDesign& design, std::span<const ColumnId> fixed,
                           std::span<const ColumnId> removable, double w) {
  if (removable.empty()) return {};
  const double n = design.n();
  std::vector<ColumnId> full(fixed.begin(), fixed.end());
  full.insert(full.end(), removable.begin(), removable.end());
  const int size = static_cast<int>(full.size());
  const double hdic_full = hdic(n, ols_solve(design, full).rss, size, w);

  std::vector<ColumnId> kept;
  std::vector<ColumnId> loo;
  loo.reserve(full.size());
  for (std::size_t i = 0; i < removable.size(); ++i) {
    loo.assign(fixed.begin(), fixed.end());
    for (std::size_t k = 0; k < removable.size(); ++k) {
      if (k != i) loo.push_back(removable[k]);
    }
    const double hdic_loo = hdic(n, ols_solve(design, loo).rss, size - 1, w);
    if (hdic_loo > hdic_full) kept.push_back(removable[i]);
  }
  return kept;
}

double ddt_threshold(const FhtdConfig& config, int n, int s0, int s0_under) {
  const double q = config.q;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double first = std::sqrt(q + s0);
  if (config.threshold_mode == ThresholdMode::simulation) {
    const double inner = s0_under == 0 ? first : std::min(first, std::sqrt(static_cast<double>(s0_under)) * std::sqrt(q));
    return config.d * inner / root_n;
  }
  const double inner =
      s0_under == 0 ? first : std::min(first, std::sqrt(static_cast<double>(s0_under)) * std::pow(q, 1.0 / config.eta));
  const double d_tilde = config.d_tilde.value_or(std::log(std::log(static_cast<double>(n))));
  return std::max(std::pow(q, 1.5) / root_n, inner) * d_tilde / root_n;
}

DdtResult ddt(const LagDesign& design, const FhtdConfig& config, std::span<const ColumnId> J_hat) {
  std::vector<ColumnId> ids = design.ar_columns();
  ids.insert(ids.end(), J_hat.begin(), J_hat.end());
  const OlsResult fit = ols_solve(design, ids);

  std::set<int> series;
  for (ColumnId id : J_hat) series.insert(design.exo_key(id).series);

  DdtResult out;
  out.rank_deficient = fit.rank_deficient;
  out.alpha_hat = fit.coef.head(design.q());
  out.threshold = ddt_threshold(config, design.n(), static_cast<int>(J_hat.size()), static_cast<int>(series.size()));
  for (int i = 0; i < design.q(); ++i) {
    if (std::abs(out.alpha_hat[i]) >= out.threshold) out.Q_hat.push_back(i + 1);
  }
  return out;
}

std::vector<ColumnId> SelectedModel::column_ids(const LagDesign& design) const {
  std::vector<ColumnId> ids;
  ids.reserve(Q_hat.size() + J_hat.size());
  for (int lag : Q_hat) ids.push_back(design.ar_column(lag));
  for (const auto& key : J_hat) ids.push_back(design.exo_column(key));
  return ids;
}

SelectedModel refit_model(const LagDesign& design, std::span<const ColumnId> columns) {
  SelectedModel model;
  std::vector<ColumnId> sorted(columns.begin(), columns.end());
  std::sort(sorted.begin(), sorted.end());
  for (ColumnId id : sorted) {
    if (design.is_ar(id)) {
      model.Q_hat.push_back(design.ar_lag(id));
    } else {
      model.J_hat.push_back(design.exo_key(id));
    }
  }
  const OlsResult fit = ols_solve(design, sorted);
  model.final_coef = fit.coef;
  model.sigma2_hat = fit.rss / design.n();
  model.rank_deficient = fit.rank_deficient;
  return model;
}

SelectedModel refit_with_intercept(const LagDesign& raw, const SelectedModel& model) {
  SelectedModel out = model;
  const auto ids = model.column_ids(raw);
  Eigen::MatrixXd w(raw.rows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = raw.column(ids[k]);
  const OlsResult fit = ols_solve(w, raw.response(), true);
  out.intercept = fit.coef[0];
  out.has_intercept = true;
  out.final_coef = fit.coef.tail(fit.coef.size() - 1);
  out.sigma2_hat = fit.rss / raw.n();
  out.rank_deficient = model.rank_deficient || fit.rank_deficient;
  return out;
}

SelectedModel fhtd_from_path(const LagDesign& design, const SelectionPath& path, const FhtdConfig& config) {
  const double w = config.hdic_weight(design.num_exogenous());
  std::vector<ColumnId> J_khat;
  int k_hat = 0;
  if (!path.steps.empty()) {
    k_hat = hdic_stop(path);
    J_khat = path.chosen(k_hat);
  }
  const auto ar = design.ar_columns();
  const auto J_hat = trim(design, ar, J_khat, w);
  const DdtResult thresholded = ddt(design, config, J_hat);

  std::vector<ColumnId> final_cols;
  for (int lag : thresholded.Q_hat) final_cols.push_back(design.ar_column(lag));
  final_cols.insert(final_cols.end(), J_hat.begin(), J_hat.end());
  SelectedModel model = refit_model(design, final_cols);
  model.alpha_hat = thresholded.alpha_hat;
  model.threshold_used = thresholded.threshold;
  model.rank_deficient = model.rank_deficient || thresholded.rank_deficient;
  model.path_length = static_cast<int>(path.steps.size());
  model.k_hat = k_hat;
  return model;
}

SelectedModel fhtd_select(const LagDesign& design, const FhtdConfig& config) {
  const SelectionPath path = fsr_path(design, config);
  return fhtd_from_path(design, path, config);
}

SelectedModel fhtd_select_with_intercept(const LagDesign& design, const FhtdConfig& config) {
  const LagDesign centered = design.demeaned();
  return refit_with_intercept(design, fhtd_select(centered, config));
}

}  // namespace fhtd
