#include <doctest.h>

#include <cmath>

#include "fhtd/rng.hpp"
#include "fhtd/tsdgp.hpp"

using namespace fhtd;

namespace {

void check_alpha(const Eigen::VectorXd& got, std::vector<double> want) {
  REQUIRE(got.size() == static_cast<Eigen::Index>(want.size()));
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[static_cast<Eigen::Index>(i)] == doctest::Approx(want[i]).epsilon(1e-12));
}

double corr(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd x = a.array() - a.mean();
  const Eigen::VectorXd y = b.array() - b.mean();
  return x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
}

}  // namespace

TEST_CASE("random streams are deterministic and separated by role and index") {
  auto a = make_stream(7, StreamRole::errors);
  auto b = make_stream(7, StreamRole::errors);
  auto c = make_stream(7, StreamRole::covariate, 0);
  auto d = make_stream(7, StreamRole::covariate, 1);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
  CHECK(make_stream(7, StreamRole::covariate, 0)() != d());
  CHECK(replication_seed(5, 3) == (5u ^ 3u));
}

TEST_CASE("characteristic polynomials of the built-in examples") {
  check_alpha(expand_characteristic(builtin_spec(Builtin::ex41, {400, 200, 5}).unit_root), {1, 0, 0, 0.45, 0, -0.45});
  check_alpha(expand_characteristic(builtin_spec(Builtin::ex_s5, {800, 250, 4}).unit_root), {1.6, -0.2, -0.4});
  const double c = 2.0 * std::cos(0.1);
  check_alpha(expand_characteristic(builtin_spec(Builtin::ex42, {400, 200, 5}).unit_root), {0.3 + c, -(1.0 + 0.3 * c), 0.3});
  check_alpha(expand_characteristic(builtin_spec(Builtin::ex31, {100, 0, 1}, 3).unit_root), {0, 0, 1});
  check_alpha(expand_characteristic(builtin_spec(Builtin::ex31, {100, 0, 1}, 4).unit_root), {0, 0, 0, 1});
  check_alpha(expand_characteristic(builtin_spec(Builtin::ex21, {100, 0, 1}, 0.3).unit_root), {1.3, -0.3});
}

TEST_CASE("stationarity of polynomial roots") {
  CHECK(roots_outside_unit_circle({-0.5}));
  CHECK_FALSE(roots_outside_unit_circle({-1.0}));
  CHECK(roots_outside_unit_circle({0.1, -0.7}));
  CHECK(poly_multiply({1, -1}, {1, 1}) == std::vector<double>{1, 0, -1});
}

TEST_CASE("unpublished tiers are rejected") {
  CHECK_THROWS_AS(builtin_spec(Builtin::ex41, {300, 100, 4}), Error);
  try {
    builtin_spec(Builtin::ex42, {400, 201, 5});
  } catch (const Error& e) {
    CHECK(e.code() == "UnknownTier");
  }
  CHECK_THROWS_AS(parse_builtin("ex99"), Error);
}

TEST_CASE("ex41 data reproduce their errors exactly") {
  const auto spec = builtin_spec(Builtin::ex41, {200, 100, 4});
  const auto data = simulate(spec, 42);
  CHECK(data.true_Q == std::set<int>{1, 4, 6});
  CHECK(data.true_J.size() == 10);
  const Eigen::VectorXd alpha = data.alpha_true;
  for (int t = 0; t < data.n(); ++t) {
    double e = data.y[t];
    for (int i = 1; i <= alpha.size(); ++i)
      if (t - i >= 0) e -= alpha[i - 1] * data.y[t - i];
    for (const auto& [key, b] : spec.beta)
      if (t - key.lag >= 0) e -= b * data.x(t - key.lag, key.series - 1);
    REQUIRE(e == doctest::Approx(data.errors[t]).epsilon(1e-9).scale(std::abs(data.y[t]) + 1));
  }
  const auto again = simulate(spec, 42);
  CHECK(again.y == data.y);
  CHECK(simulate(spec, 43).y != data.y);
}

TEST_CASE("zero-beta unit-root DGP is a random walk of its errors") {
  DgpSpec spec;
  spec.unit_root.a = 1;
  spec.error = GaussianErrors{};
  spec.covariates = {Ar1CommonFactor{}, 3};
  spec.n = 300;
  const auto data = simulate(spec, 9);
  CHECK(data.y[0] == doctest::Approx(data.errors[0]));
  for (int t = 1; t < data.n(); ++t) CHECK(data.y[t] - data.y[t - 1] == doctest::Approx(data.errors[t]).epsilon(1e-9));
}

TEST_CASE("ex41 covariates have pairwise correlation near 0.8") {
  auto spec = builtin_spec(Builtin::ex41, {800, 500, 6});
  spec.covariates.p = 6;
  spec.beta.clear();
  spec.n = 20000;
  const auto data = simulate(spec, 5);
  CHECK(corr(data.x.col(0), data.x.col(1)) == doctest::Approx(0.8).epsilon(0.03));
  CHECK(corr(data.x.col(2), data.x.col(5)) == doctest::Approx(0.8).epsilon(0.03));
}

TEST_CASE("GARCH errors match the unconditional variance") {
  auto spec = builtin_spec(Builtin::ex42, {400, 200, 5});
  spec.covariates.p = 1;
  spec.beta.clear();
  spec.n = 100000;
  const auto data = simulate(spec, 3);
  const double var = data.errors.squaredNorm() / data.n();
  CHECK(var == doctest::Approx(0.05 / (1 - 0.05 - 0.9)).epsilon(0.05));
  CHECK(std::abs(data.errors.mean()) < 0.02);
}

TEST_CASE("explosive covariates are reported") {
  auto spec = builtin_spec(Builtin::ex41, {200, 100, 4});
  spec.covariates.kind = Ar1CommonFactor{1.01, 2.0};
  CHECK_THROWS_AS(simulate(spec, 1), Error);
}
