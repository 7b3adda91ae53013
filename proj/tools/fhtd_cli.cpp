#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fhtd/config.hpp"
#include "fhtd/harness.hpp"

namespace {

using fhtd::ExperimentConfig;
using fhtd::ExperimentKind;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> threads;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON config file or preset name")->required();
  sub->add_option("--seed", o.seed, "base seed; replication r uses seed ^ r");
  sub->add_option("--reps", o.reps, "number of replications");
  sub->add_option("--threads", o.threads, "worker threads");
  sub->add_option("--out", o.out, "output stem for .md/.csv files");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg = fhtd::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.reps) cfg.reps = *o.reps;
  if (o.threads) cfg.threads = *o.threads;
  if (o.out) cfg.out = *o.out;
  cfg.validate();
  return cfg;
}

nlohmann::json model_json(const fhtd::SelectedModel& m, const std::vector<std::string>& names) {
  nlohmann::json j;
  j["Q_hat"] = m.Q_hat;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& key : m.J_hat) {
    nlohmann::json t = {{"series", key.series}, {"lag", key.lag}};
    if (key.series >= 1 && static_cast<std::size_t>(key.series) <= names.size()) {
      t["name"] = names[static_cast<std::size_t>(key.series - 1)];
    }
    terms.push_back(t);
  }
  j["J_hat"] = terms;
  j["coefficients"] = std::vector<double>(m.final_coef.data(), m.final_coef.data() + m.final_coef.size());
  if (m.has_intercept) j["intercept"] = m.intercept;
  j["sigma2_hat"] = m.sigma2_hat;
  j["threshold"] = m.threshold_used;
  j["path_length"] = m.path_length;
  j["k_hat"] = m.k_hat;
  j["rank_deficient"] = m.rank_deficient;
  return j;
}

int run_select(const ExperimentConfig& cfg) {
  nlohmann::json doc;
  fhtd::FhtdConfig greedy = cfg.greedy;
  std::optional<fhtd::LagDesign> design;
  std::vector<std::string> names;
  bool intercept = false;

  if (cfg.kind == ExperimentKind::forecast) {
    const auto data = fhtd::load_csv(cfg.forecast.csv_path, cfg.forecast.columns);
    const auto& fs = cfg.forecast.settings;
    greedy.q = fs.q;
    intercept = fs.intercept;
    design = fhtd::LagDesign::from_series(data.y, data.x, fs.q, fs.r);
    names = data.exogenous_names;
    doc["data"] = {{"csv", cfg.forecast.csv_path}, {"rows", data.effective_n()}, {"q", fs.q}, {"r", fs.r}};
  } else if (cfg.kind == ExperimentKind::custom || !cfg.tiers.empty()) {
    fhtd::DgpSpec spec;
    if (cfg.kind == ExperimentKind::custom) {
      spec = *cfg.dgp;
    } else {
      const auto which = cfg.kind == ExperimentKind::table1   ? fhtd::Builtin::ex41
                         : cfg.kind == ExperimentKind::table2 ? fhtd::Builtin::ex42
                                                              : fhtd::Builtin::ex_s5;
      spec = fhtd::builtin_spec(which, cfg.tiers.front());
    }
    const auto data = fhtd::simulate(spec, cfg.seed);
    greedy.q = cfg.q.value_or(fhtd::default_ar_lags(spec.n));
    design = fhtd::LagDesign::from_dataset(data, greedy.q);
    nlohmann::json truth_j = nlohmann::json::array();
    for (const auto& key : data.true_J) truth_j.push_back({{"series", key.series}, {"lag", key.lag}});
    doc["data"] = {{"seed", cfg.seed}, {"n", spec.n}, {"p", spec.covariates.p}, {"q", greedy.q}};
    doc["truth"] = {{"Q", std::vector<int>(data.true_Q.begin(), data.true_Q.end())}, {"J", truth_j}};
  } else {
    std::cerr << "error: select needs a simulation or forecast config\n";
    return kConfigError;
  }

  nlohmann::json models;
  for (auto method : cfg.methods) {
    models[fhtd::method_name(method)] = model_json(fhtd::select_model(method, *design, greedy, cfg.lasso, intercept), names);
  }
  doc["models"] = models;
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out + ".json");
    if (!(f << text)) {
      std::cerr << "error: cannot write " << cfg.out << ".json\n";
      return kRuntimeError;
    }
  }
  return kOk;
}

bool is_config_error(const std::string& code) {
  return code == "ConfigParse" || code == "InvalidConfig" || code == "UnknownPreset" || code == "UnknownMethod" ||
         code == "UnknownTier" || code == "UnknownBuiltin" || code == "InvalidSpec" || code == "InvalidTransform";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FHTD model selection for high-dimensional unit-root ARX models"};
  app.require_subcommand(1);
  Overrides sim, sel, fc, ex;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo selection tables");
  add_common(simulate, sim);
  auto* select = app.add_subcommand("select", "select a model on one dataset and print it as JSON");
  add_common(select, sel);
  auto* forecast = app.add_subcommand("forecast", "rolling-window one-step-ahead forecasts from a CSV");
  add_common(forecast, fc);
  auto* examples = app.add_subcommand("examples", "Monte-Carlo checks of examples 2.1, 2.2 and 3.1");
  add_common(examples, ex);
  auto* presets = app.add_subcommand("presets", "list the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (presets->parsed()) {
    for (const auto& name : fhtd::preset_names()) std::cout << name << "\n";
    return kOk;
  }

  const Overrides& o = simulate->parsed() ? sim : select->parsed() ? sel : forecast->parsed() ? fc : ex;
  ExperimentConfig cfg;
  try {
    cfg = resolve(o);
    const auto k = cfg.kind;
    const bool table = k == ExperimentKind::table1 || k == ExperimentKind::table2 || k == ExperimentKind::table_s5 ||
                       k == ExperimentKind::custom;
    const bool example =
        k == ExperimentKind::example21 || k == ExperimentKind::example22 || k == ExperimentKind::example31;
    if ((simulate->parsed() && !table) || (forecast->parsed() && k != ExperimentKind::forecast) ||
        (examples->parsed() && !example)) {
      std::cerr << "error: config kind '" << fhtd::kind_name(k) << "' does not fit this subcommand\n";
      return kConfigError;
    }
  } catch (const fhtd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  if (select->parsed()) {
    try {
      return run_select(cfg);
    } catch (const fhtd::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return is_config_error(e.code()) ? kConfigError : kRuntimeError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kRuntimeError;
    }
  }
  return fhtd::run_experiment(cfg, std::cout, std::cerr);
}
