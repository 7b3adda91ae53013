#include <doctest.h>

#include "fhtd/baselines.hpp"
#include "oracle.hpp"
#include "properties.hpp"

using namespace fhtd;

TEST_CASE("HDIC and its penalty") {
  CHECK(hdic_penalty(1000, 0.5, 2.0) == doctest::Approx(0.5 * std::sqrt(1000.0)));
  CHECK(hdic(100, 50, 3, 2.0) == doctest::Approx(100 * std::log(0.5) + 6));
  CHECK(hdic(100, 0, 3, 2.0) == -std::numeric_limits<double>::infinity());
  const auto c = FhtdConfig::defaults_for(400);
  CHECK(c.q == 8);
  CHECK(FhtdConfig::defaults_for(200).q == 7);
  CHECK(FhtdConfig::defaults_for(800).q == 10);
  CHECK(FhtdConfig::defaults_for(1500).q == 12);
}

TEST_CASE("HDIC stop takes the first minimum") {
  SelectionPath path;
  for (double h : {5.0, 3.0, 1.0, 1.0, 2.0}) path.steps.push_back({0, 0, 1, h});
  CHECK(hdic_stop(path) == 3);
  CHECK_THROWS_AS(hdic_stop(SelectionPath{}), Error);
}

TEST_CASE("greedy paths match brute force") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = oracle::random_design(rng, 45, 12, 2);
    FhtdConfig config;
    config.q = 2;
    config.K = 6;
    const auto path = fsr_path(d, config);
    const auto ref = oracle::greedy(d, d.ar_columns(), d.exogenous_columns(), 6, true);
    REQUIRE(path.steps.size() == ref.size());
    std::vector<int> active = d.ar_columns();
    for (std::size_t m = 0; m < ref.size(); ++m) {
      CHECK(path.steps[m].column == ref[m]);
      active.push_back(ref[m]);
      CHECK(oracle::rel_diff(path.steps[m].rss, oracle::rss(d, active)) < 1e-8);
    }
    const auto opath = oga_path(d, config, false);
    std::vector<int> all(static_cast<std::size_t>(d.num_columns()));
    std::iota(all.begin(), all.end(), 0);
    const auto oref = oracle::greedy(d, {}, all, 6, false);
    for (std::size_t m = 0; m < oref.size(); ++m) CHECK(opath.steps[m].column == oref[m]);
  }
}

TEST_CASE("Trim keeps exactly the columns whose removal raises HDIC") {
  std::mt19937_64 rng(9);
  const auto d = oracle::random_design(rng, 40, 10, 2);
  const double w = 3.0;
  const std::vector<int> fixed{0, 1};
  const std::vector<int> removable{2, 3, 4, 6, 9};
  const auto kept = trim(d, fixed, removable, w);
  std::vector<int> full = fixed;
  full.insert(full.end(), removable.begin(), removable.end());
  const double h_full = hdic(d.n(), oracle::rss(d, full), 7, w);
  for (int id : removable) {
    std::vector<int> loo;
    for (int c : full)
      if (c != id) loo.push_back(c);
    const bool keep = hdic(d.n(), oracle::rss(d, loo), 6, w) > h_full;
    CHECK(keep == (std::find(kept.begin(), kept.end(), id) != kept.end()));
  }
  // the strong signals 2 (coefficient 3) survive
  CHECK(std::find(kept.begin(), kept.end(), 2) != kept.end());
}

TEST_CASE("DDT thresholds") {
  FhtdConfig c;
  c.q = 8;
  c.d = 0.5;
  CHECK(ddt_threshold(c, 400, 10, 10) == doctest::Approx(0.5 * std::min(std::sqrt(18.0), std::sqrt(10.0) * std::sqrt(8.0)) / 20));
  CHECK(ddt_threshold(c, 400, 0, 0) == doctest::Approx(0.5 * std::sqrt(8.0) / 20));
  c.threshold_mode = ThresholdMode::theoretical;
  const double dt = std::log(std::log(400.0));
  const double inner = std::min(std::sqrt(18.0), std::sqrt(2.0) * std::sqrt(8.0));
  CHECK(ddt_threshold(c, 400, 10, 2) == doctest::Approx(std::max(std::pow(8.0, 1.5) / 20, inner) * dt / 20));
  CHECK(props::ddt_monotone(5, 21) == "");
}

TEST_CASE("FSR path is invariant to column scaling") { CHECK(props::fsr_scale_invariance(4, 31) == ""); }

TEST_CASE("path preconditions") {
  std::mt19937_64 rng(3);
  const auto d = oracle::random_design(rng, 12, 12, 2);
  FhtdConfig config;
  config.q = 2;
  CHECK_THROWS_AS(fsr_path(d, config), Error);
  config.q = 3;
  CHECK_THROWS_AS(fsr_path(d, config), Error);
}

TEST_CASE("FHTD recovers ex41 and penalty rescoring is consistent") {
  const auto spec = builtin_spec(Builtin::ex41, {400, 200, 5});
  const auto data = simulate(spec, 17);
  const auto config = FhtdConfig::defaults_for(400);
  const auto design = LagDesign::from_dataset(data, config.q);
  const auto model = fhtd_select(design, config);
  CHECK(std::set<int>(model.Q_hat.begin(), model.Q_hat.end()) == data.true_Q);
  CHECK(std::set<ExoKey>(model.J_hat.begin(), model.J_hat.end()) == data.true_J);
  CHECK(model.final_coef.size() == 13);
  const auto path = fsr_path(design, config);
  const auto same = with_penalty(path, design.n(), config.hdic_weight(design.num_exogenous()));
  for (std::size_t m = 0; m < path.steps.size(); ++m) CHECK(same.steps[m].hdic == doctest::Approx(path.steps[m].hdic));

  const auto with_icpt = fhtd_select_with_intercept(design, config);
  CHECK(with_icpt.has_intercept);
  CHECK(with_icpt.final_coef.size() == static_cast<Eigen::Index>(with_icpt.Q_hat.size() + with_icpt.J_hat.size()));
}

TEST_CASE("method names round-trip") {
  for (Method m : kAllMethods) CHECK(parse_method(method_name(m)) == m);
  CHECK(parse_method("ar-oga-3") == Method::ar_oga3);
  CHECK_THROWS_AS(parse_method("ridge"), Error);
}
