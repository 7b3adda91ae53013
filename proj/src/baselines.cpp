#include "fhtd/baselines.hpp"

#include <algorithm>
#include <cctype>

namespace fhtd {

SelectionPath oga_path(const LagDesign& design, const FhtdConfig& config, bool force_ar) {
  const int p_star = design.num_exogenous();
  config.validate(p_star);
  if (config.q != design.q()) throw Error("InvalidConfig", "config q differs from the design's AR lag count");
  const auto base = force_ar ? design.ar_columns() : std::vector<ColumnId>{};
  std::vector<ColumnId> candidates = design.exogenous_columns();
  if (!force_ar) {
    const auto ar = design.ar_columns();
    candidates.insert(candidates.begin(), ar.begin(), ar.end());
  }
  const int K = std::min<int>(config.K, static_cast<int>(candidates.size()));
  if (design.rows() <= static_cast<int>(base.size()) + K) {
    throw Error("InsufficientData", std::to_string(design.rows()) + " rows cannot support the OGA path");
  }
  return greedy_path(design, base, candidates, K, GreedyRule::oga, config.hdic_weight(p_star));
}

SelectedModel oga3_from_path(const LagDesign& design, const SelectionPath& path, const FhtdConfig& config) {
  const double w = config.hdic_weight(design.num_exogenous());
  std::vector<ColumnId> removable = path.base;
  int k_hat = 0;
  if (!path.steps.empty()) {
    k_hat = hdic_stop(path);
    const auto chosen = path.chosen(k_hat);
    removable.insert(removable.end(), chosen.begin(), chosen.end());
  }
  const auto kept = trim(design, {}, removable, w);
  SelectedModel model = refit_model(design, kept);
  model.path_length = static_cast<int>(path.steps.size());
  model.k_hat = k_hat;
  return model;
}

SelectedModel oga3_select(const LagDesign& design, const FhtdConfig& config, bool force_ar) {
  return oga3_from_path(design, oga_path(design, config, force_ar), config);
}

LassoConfig default_lasso_config() { return LassoConfig{}; }

SelectedModel lasso_select(const LagDesign& design, const LassoConfig& config, LassoVariant variant) {
  LassoConfig cfg = config;
  LassoFit fit;
  switch (variant) {
    case LassoVariant::lasso:
      cfg.penalize_ar = true;
      fit = lasso_path(design.columns(), design.response(), cfg, design.q());
      break;
    case LassoVariant::alasso:
      cfg.penalize_ar = true;
      fit = adaptive_lasso(design.columns(), design.response(), cfg, design.q());
      break;
    case LassoVariant::ar_alasso:
      cfg.penalize_ar = false;
      fit = adaptive_lasso(design.columns(), design.response(), cfg, design.q());
      break;
  }

  const Eigen::VectorXd& coef = fit.chosen_coefficients();
  SelectedModel model;
  std::vector<double> values;
  for (ColumnId id = 0; id < design.num_columns(); ++id) {
    if (coef[id] == 0.0) continue;
    if (design.is_ar(id)) {
      model.Q_hat.push_back(design.ar_lag(id));
    } else {
      model.J_hat.push_back(design.exo_key(id));
    }
    values.push_back(coef[id]);
  }
  model.final_coef = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  model.has_intercept = cfg.intercept;
  model.intercept = fit.chosen_intercept();
  model.sigma2_hat = fit.rss[static_cast<std::size_t>(fit.chosen)] / design.n();
  model.path_length = static_cast<int>(fit.lambdas.size());
  return model;
}

std::string method_name(Method method) {
  switch (method) {
    case Method::lasso: return "LASSO";
    case Method::alasso: return "ALasso";
    case Method::oga3: return "OGA-3";
    case Method::ar_alasso: return "AR-ALasso";
    case Method::ar_oga3: return "AR-OGA-3";
    case Method::fhtd: return "FHTD";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  auto lower = [](std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
  };
  const std::string key = lower(name);
  for (Method m : kAllMethods) {
    if (lower(method_name(m)) == key) return m;
  }
  throw Error("UnknownMethod", "unknown method '" + name + "'");
}

SelectedModel select_model(Method method, const LagDesign& design, const FhtdConfig& config,
                           const LassoConfig& lasso, bool intercept) {
  auto greedy = [&](const LagDesign& d) {
    switch (method) {
      case Method::oga3: return oga3_select(d, config, false);
      case Method::ar_oga3: return oga3_select(d, config, true);
      default: return fhtd_select(d, config);
    }
  };
  switch (method) {
    case Method::lasso:
    case Method::alasso:
    case Method::ar_alasso: {
      LassoConfig cfg = lasso;
      cfg.intercept = intercept;
      const LassoVariant variant = method == Method::lasso    ? LassoVariant::lasso
                                   : method == Method::alasso ? LassoVariant::alasso
                                                              : LassoVariant::ar_alasso;
      return lasso_select(design, cfg, variant);
    }
    default:
      if (!intercept) return greedy(design);
      return refit_with_intercept(design, greedy(design.demeaned()));
  }
}

}  // namespace fhtd
