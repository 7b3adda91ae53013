#include "fhtd/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fhtd {
namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error("ConfigParse", where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw Error("ConfigParse", "unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json to_json(const DgpSpec& spec) {
  json ur = {{"a", spec.unit_root.a}, {"b", spec.unit_root.b}, {"psi", spec.unit_root.psi_coeffs}};
  json pairs = json::array();
  for (const auto& c : spec.unit_root.complex_pairs) pairs.push_back({{"theta", c.theta}, {"multiplicity", c.multiplicity}});
  ur["complex"] = pairs;

  json err = std::visit(
      [](const auto& e) -> json {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, GaussianErrors>) {
          return {{"type", "gaussian"}};
        } else if constexpr (std::is_same_v<E, StudentTErrors>) {
          return {{"type", "student_t"}, {"df", e.df}};
        } else {
          return {{"type", "garch11"}, {"omega", e.omega}, {"alpha", e.alpha}, {"beta", e.beta}};
        }
      },
      spec.error);

  json cov = std::visit(
      [](const auto& c) -> json {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, Ar1CommonFactor>) {
          return {{"type", "ar1_common_factor"}, {"rho", c.rho}, {"factor_weight", c.factor_weight}};
        } else if constexpr (std::is_same_v<C, ArmaBanded>) {
          return {{"type", "arma_banded"}, {"ar", c.ar},         {"ma", c.ma},
                  {"band_base", c.band_base},   {"band_width", c.band_width}, {"innov_df", c.innov_df}};
        } else {
          return {{"type", "ma2_arch_pair"},     {"ma_odd", c.ma_odd},         {"ma_even", c.ma_even},
                  {"arch_omega", c.arch_omega}, {"arch_alpha", c.arch_alpha}};
        }
      },
      spec.covariates.kind);
  cov["p"] = spec.covariates.p;

  json beta = json::array();
  for (const auto& [key, value] : spec.beta) beta.push_back({{"series", key.series}, {"lag", key.lag}, {"value", value}});
  return {{"unit_root", ur}, {"error", err},         {"covariates", cov},
          {"beta", beta},    {"n", spec.n},          {"burn_in", spec.burn_in},
          {"candidate_lags", spec.candidate_lags}};
}

DgpSpec dgp_from(const json& j) {
  check_keys(j, {"unit_root", "error", "covariates", "beta", "n", "burn_in", "candidate_lags"}, "dgp");
  DgpSpec spec;
  if (j.contains("unit_root")) {
    const json& u = j.at("unit_root");
    check_keys(u, {"a", "b", "complex", "psi"}, "dgp.unit_root");
    read(u, "a", spec.unit_root.a);
    read(u, "b", spec.unit_root.b);
    read(u, "psi", spec.unit_root.psi_coeffs);
    if (u.contains("complex")) {
      for (const json& c : u.at("complex")) {
        check_keys(c, {"theta", "multiplicity"}, "dgp.unit_root.complex");
        ComplexRootPair pair;
        read(c, "theta", pair.theta);
        read(c, "multiplicity", pair.multiplicity);
        spec.unit_root.complex_pairs.push_back(pair);
      }
    }
  }
  if (j.contains("error")) {
    const json& e = j.at("error");
    const std::string type = e.value("type", "");
    if (type == "gaussian") {
      check_keys(e, {"type"}, "dgp.error");
      spec.error = GaussianErrors{};
    } else if (type == "student_t") {
      check_keys(e, {"type", "df"}, "dgp.error");
      StudentTErrors t;
      read(e, "df", t.df);
      spec.error = t;
    } else if (type == "garch11") {
      check_keys(e, {"type", "omega", "alpha", "beta"}, "dgp.error");
      Garch11Errors g;
      read(e, "omega", g.omega);
      read(e, "alpha", g.alpha);
      read(e, "beta", g.beta);
      spec.error = g;
    } else {
      throw Error("ConfigParse", "dgp.error.type must be gaussian, student_t or garch11");
    }
  }
  if (j.contains("covariates")) {
    const json& c = j.at("covariates");
    const std::string type = c.value("type", "");
    if (type == "ar1_common_factor") {
      check_keys(c, {"type", "p", "rho", "factor_weight"}, "dgp.covariates");
      Ar1CommonFactor k;
      read(c, "rho", k.rho);
      read(c, "factor_weight", k.factor_weight);
      spec.covariates.kind = k;
    } else if (type == "arma_banded") {
      check_keys(c, {"type", "p", "ar", "ma", "band_base", "band_width", "innov_df"}, "dgp.covariates");
      ArmaBanded k;
      read(c, "ar", k.ar);
      read(c, "ma", k.ma);
      read(c, "band_base", k.band_base);
      read(c, "band_width", k.band_width);
      read(c, "innov_df", k.innov_df);
      spec.covariates.kind = k;
    } else if (type == "ma2_arch_pair") {
      check_keys(c, {"type", "p", "ma_odd", "ma_even", "arch_omega", "arch_alpha"}, "dgp.covariates");
      Ma2ArchPair k;
      read(c, "ma_odd", k.ma_odd);
      read(c, "ma_even", k.ma_even);
      read(c, "arch_omega", k.arch_omega);
      read(c, "arch_alpha", k.arch_alpha);
      spec.covariates.kind = k;
    } else {
      throw Error("ConfigParse", "dgp.covariates.type must be ar1_common_factor, arma_banded or ma2_arch_pair");
    }
    read(c, "p", spec.covariates.p);
  }
  if (j.contains("beta")) {
    for (const json& b : j.at("beta")) {
      check_keys(b, {"series", "lag", "value"}, "dgp.beta");
      const ExoKey key{b.at("series").get<int>(), b.at("lag").get<int>()};
      if (spec.beta.count(key)) throw Error("ConfigParse", "duplicate beta entry");
      spec.beta[key] = b.at("value").get<double>();
    }
  }
  read(j, "n", spec.n);
  read(j, "burn_in", spec.burn_in);
  read(j, "candidate_lags", spec.candidate_lags);
  spec.validate();
  return spec;
}

struct TablePreset {
  const char* stem;
  ExperimentKind kind;
  Builtin builtin;
};

constexpr TablePreset kTables[] = {
    {"ex41", ExperimentKind::table1, Builtin::ex41},
    {"ex42", ExperimentKind::table2, Builtin::ex42},
    {"ex_s5", ExperimentKind::table_s5, Builtin::ex_s5},
};

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::table1: return "table1";
    case ExperimentKind::table2: return "table2";
    case ExperimentKind::table_s5: return "table_s5";
    case ExperimentKind::custom: return "custom";
    case ExperimentKind::example21: return "example21";
    case ExperimentKind::example22: return "example22";
    case ExperimentKind::example31: return "example31";
    case ExperimentKind::forecast: return "forecast";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (reps < 1) throw Error("InvalidConfig", "reps must be >= 1");
  if (threads < 1) throw Error("InvalidConfig", "threads must be >= 1");
  if (!(max_failure_rate >= 0.0 && max_failure_rate <= 1.0)) {
    throw Error("InvalidConfig", "max_failure_rate must lie in [0, 1]");
  }
  if (q && *q < 1) throw Error("InvalidConfig", "q must be >= 1");
  FhtdConfig g = greedy;
  g.q = q.value_or(1);
  g.validate(0);
  lasso.validate();
  std::set<Method> seen;
  for (Method m : methods) {
    if (!seen.insert(m).second) throw Error("InvalidConfig", "method " + method_name(m) + " listed twice");
  }
  switch (kind) {
    case ExperimentKind::table1:
    case ExperimentKind::table2:
    case ExperimentKind::table_s5: {
      if (tiers.empty()) throw Error("InvalidConfig", "no size tiers configured");
      const Builtin b = kind == ExperimentKind::table1   ? Builtin::ex41
                        : kind == ExperimentKind::table2 ? Builtin::ex42
                                                         : Builtin::ex_s5;
      const auto ok = published_tiers(b);
      for (const auto& t : tiers) {
        if (std::find(ok.begin(), ok.end(), t) == ok.end()) {
          throw Error("InvalidConfig", "tier (" + std::to_string(t.n) + ", " + std::to_string(t.p) + ", " +
                                           std::to_string(t.r) + ") is not valid for " + kind_name(kind));
        }
      }
      break;
    }
    case ExperimentKind::custom:
      if (!dgp) throw Error("InvalidConfig", "a custom experiment needs a dgp section");
      dgp->validate();
      break;
    case ExperimentKind::example21:
      if (!(std::abs(example.a) < 1.0)) throw Error("InvalidConfig", "example 2.1 needs |a| < 1");
      if (example.n < 10 || example.p < 0) throw Error("InvalidConfig", "example 2.1 needs n >= 10 and p >= 0");
      break;
    case ExperimentKind::example22:
      if (example.n < 10 || example.grid_points < 2) {
        throw Error("InvalidConfig", "example 2.2 needs n >= 10 and at least two grid points");
      }
      break;
    case ExperimentKind::example31:
      if (example.k < 1 || 2 * example.k >= example.n) throw Error("InvalidConfig", "example 3.1 needs 1 <= k < n/2");
      break;
    case ExperimentKind::forecast:
      if (forecast.csv_path.empty()) throw Error("InvalidConfig", "forecast needs a csv path");
      if (forecast.columns.y_column.empty()) throw Error("InvalidConfig", "forecast needs a y column");
      break;
  }
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& t : kTables) {
    names.emplace_back(t.stem);
    for (const auto& tier : published_tiers(t.builtin)) names.push_back(std::string(t.stem) + "-n" + std::to_string(tier.n));
  }
  for (const char* alias : {"table1", "table2", "table_s5", "example21", "example22", "example31"}) names.emplace_back(alias);
  return names;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  const std::string stem = name == "table1" ? "ex41" : name == "table2" ? "ex42" : name == "table_s5" ? "ex_s5" : name;
  for (const auto& t : kTables) {
    const auto tiers = published_tiers(t.builtin);
    if (stem == t.stem) {
      cfg.kind = t.kind;
      cfg.tiers = tiers;
      return cfg;
    }
    for (const auto& tier : tiers) {
      if (stem == std::string(t.stem) + "-n" + std::to_string(tier.n)) {
        cfg.kind = t.kind;
        cfg.tiers = {tier};
        return cfg;
      }
    }
  }
  if (name == "example21") {
    cfg.kind = ExperimentKind::example21;
    cfg.reps = 200;
    cfg.example.n = 10000;
    return cfg;
  }
  if (name == "example22") {
    cfg.kind = ExperimentKind::example22;
    cfg.reps = 500;
    cfg.example.n = 2000;
    return cfg;
  }
  if (name == "example31") {
    cfg.kind = ExperimentKind::example31;
    cfg.reps = 5000;
    cfg.example.n = 2000;
    return cfg;
  }
  throw Error("UnknownPreset", "no preset named '" + name + "'");
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("ConfigParse", std::string("invalid JSON: ") + e.what());
  }
  try {
    check_keys(j, {"preset", "kind", "name", "tiers", "dgp", "reps", "seed", "threads", "methods", "greedy", "lasso",
                   "example", "forecast", "out", "max_failure_rate"},
               "config");
    ExperimentConfig cfg = j.contains("preset") ? preset(j.at("preset").get<std::string>()) : ExperimentConfig{};
    if (j.contains("kind")) {
      const std::string k = j.at("kind").get<std::string>();
      bool found = false;
      for (auto kind : {ExperimentKind::table1, ExperimentKind::table2, ExperimentKind::table_s5, ExperimentKind::custom,
                        ExperimentKind::example21, ExperimentKind::example22, ExperimentKind::example31,
                        ExperimentKind::forecast}) {
        if (kind_name(kind) == k) {
          cfg.kind = kind;
          found = true;
        }
      }
      if (!found) throw Error("ConfigParse", "unknown experiment kind '" + k + "'");
    }
    read(j, "name", cfg.name);
    if (j.contains("tiers")) {
      cfg.tiers.clear();
      for (const json& t : j.at("tiers")) {
        if (!t.is_array() || t.size() != 3) throw Error("ConfigParse", "each tier must be [n, p, r]");
        cfg.tiers.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
      }
    }
    if (j.contains("dgp")) cfg.dgp = dgp_from(j.at("dgp"));
    read(j, "reps", cfg.reps);
    read(j, "seed", cfg.seed);
    read(j, "threads", cfg.threads);
    read(j, "out", cfg.out);
    read(j, "max_failure_rate", cfg.max_failure_rate);
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const json& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("greedy")) {
      const json& g = j.at("greedy");
      check_keys(g, {"q", "K", "eta", "c", "d", "threshold", "d_tilde"}, "greedy");
      if (g.contains("q")) cfg.q = g.at("q").get<int>();
      read(g, "K", cfg.greedy.K);
      read(g, "eta", cfg.greedy.eta);
      read(g, "c", cfg.greedy.c);
      read(g, "d", cfg.greedy.d);
      if (g.contains("d_tilde")) cfg.greedy.d_tilde = g.at("d_tilde").get<double>();
      if (g.contains("threshold")) {
        const std::string mode = g.at("threshold").get<std::string>();
        if (mode == "simulation") {
          cfg.greedy.threshold_mode = ThresholdMode::simulation;
        } else if (mode == "theoretical") {
          cfg.greedy.threshold_mode = ThresholdMode::theoretical;
        } else {
          throw Error("ConfigParse", "greedy.threshold must be simulation or theoretical");
        }
      }
    }
    if (j.contains("lasso")) {
      const json& l = j.at("lasso");
      check_keys(l, {"n_lambda", "lambda_min_ratio", "max_iter", "tol", "standardize", "early_stop"}, "lasso");
      read(l, "n_lambda", cfg.lasso.n_lambda);
      if (l.contains("lambda_min_ratio")) cfg.lasso.lambda_min_ratio = l.at("lambda_min_ratio").get<double>();
      read(l, "max_iter", cfg.lasso.max_iter);
      read(l, "tol", cfg.lasso.tol);
      read(l, "standardize", cfg.lasso.standardize);
      read(l, "early_stop", cfg.lasso.early_stop);
    }
    if (j.contains("example")) {
      const json& e = j.at("example");
      check_keys(e, {"a", "n", "p", "k", "grid_points"}, "example");
      read(e, "a", cfg.example.a);
      read(e, "n", cfg.example.n);
      read(e, "p", cfg.example.p);
      read(e, "k", cfg.example.k);
      read(e, "grid_points", cfg.example.grid_points);
    }
    if (j.contains("forecast")) {
      const json& f = j.at("forecast");
      check_keys(f, {"csv", "date_column", "y", "exogenous", "directives", "train_size", "test_size", "q", "r",
                     "intercept", "freeze_tuning", "c_grid", "d_grid", "validation_fraction"},
                 "forecast");
      auto& fs = cfg.forecast;
      if (f.contains("csv")) fs.csv_path = resolve(f.at("csv").get<std::string>(), base_dir);
      if (f.contains("date_column")) fs.columns.date_column = f.at("date_column").get<std::string>();
      read(f, "y", fs.columns.y_column);
      read(f, "exogenous", fs.columns.exogenous);
      read(f, "directives", fs.columns.directives);
      read(f, "train_size", fs.settings.train_size);
      if (f.contains("test_size")) fs.settings.test_size = f.at("test_size").get<int>();
      read(f, "q", fs.settings.q);
      read(f, "r", fs.settings.r);
      read(f, "intercept", fs.settings.intercept);
      read(f, "freeze_tuning", fs.settings.freeze_tuning);
      read(f, "c_grid", fs.settings.c_grid);
      read(f, "d_grid", fs.settings.d_grid);
      read(f, "validation_fraction", fs.settings.validation_fraction);
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw Error("ConfigParse", std::string("bad config value: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path_or_preset) {
  std::ifstream in(path_or_preset);
  if (!in) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), path_or_preset) != names.end()) return preset(path_or_preset);
    throw Error("ConfigParse", "cannot open config '" + path_or_preset + "' and no preset has that name");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path_or_preset).parent_path();
  return parse_config(ss.str(), dir.empty() ? "." : dir.string());
}

std::string dgp_to_json(const DgpSpec& spec) { return to_json(spec).dump(2); }

DgpSpec dgp_from_json(const std::string& text) {
  try {
    return dgp_from(json::parse(text));
  } catch (const json::exception& e) {
    throw Error("ConfigParse", std::string("bad dgp JSON: ") + e.what());
  }
}

}  // namespace fhtd
