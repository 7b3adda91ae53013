#include <doctest.h>

#include <cmath>
#include <random>

#include "fhtd/metrics.hpp"
#include "properties.hpp"

using namespace fhtd;

namespace {

const std::set<int> kQ{1};
std::set<ExoKey> truth_J() {
  std::set<ExoKey> j;
  for (int s = 1; s <= 12; ++s) j.insert({s, 1});
  return j;
}

}  // namespace

TEST_CASE("tally counts exact, sure-screening, TP and FP") {
  const auto J = truth_J();
  std::vector<ExoKey> est(J.begin(), J.end());
  std::vector<int> q{1};
  SelectionTally t;
  tally(kQ, J, q, est, t);
  CHECK(t.e_count == 1);
  CHECK(t.ss_count == 1);
  CHECK(t.tp_sum == 13);
  CHECK(t.fp_sum == 0);

  est.push_back({40, 2});
  q.push_back(3);
  tally(kQ, J, q, est, t);
  CHECK(t.reps == 2);
  CHECK(t.e_count == 1);
  CHECK(t.ss_count == 2);
  CHECK(t.fp_sum == 2);

  std::vector<ExoKey> missing(J.begin(), J.end());
  missing.erase(missing.begin());
  SelectionTally u;
  tally(kQ, J, std::vector<int>{1}, missing, u);
  CHECK(u.tp_sum == 12);
  CHECK(u.ss_count == 0);
  CHECK(u.e_count == 0);
  CHECK(u.tp_mean() == 12.0);
}

TEST_CASE("tally merge is associative") { CHECK(props::tally_associativity(50, 13) == ""); }

TEST_CASE("RMSE and median absolute error") {
  const std::vector<double> e{3, -4, 0, 1};
  CHECK(rmse(e) == doctest::Approx(std::sqrt(26.0 / 4)));
  CHECK(mae(e) == doctest::Approx(2.0));
  CHECK(mae(std::vector<double>{-5, 1, 2}) == doctest::Approx(2.0));
}

TEST_CASE("Diebold-Mariano test") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  std::vector<double> a(216), b(216);
  for (auto& v : a) v = z(rng);
  const auto same = dm_test(a, a);
  CHECK(same.degenerate);
  CHECK(same.p_value == 1.0);

  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = 1.0 + std::abs(a[i]);
    b[i] = a[i] + 1.0;
  }
  const auto shifted = dm_test(a, b);
  CHECK(shifted.degenerate);
  CHECK(shifted.p_value == 0.0);

  // |b| - |a| ~ N(0.5, 1) gives a statistic near 0.5 * sqrt(216)
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = 1.0;
    b[i] = 1.5 + z(rng);
  }
  const auto r = dm_test(b, a);
  CHECK(r.p_value < 0.01);
  CHECK(r.statistic > 0);
  CHECK(dm_test(b, a, 3).p_value < 0.01);

  CHECK_THROWS_AS(dm_test(std::vector<double>(5, 1.0), std::vector<double>(5, 1.0)), Error);
  CHECK_THROWS_AS(dm_test(std::vector<double>(12, 1.0), std::vector<double>(11, 1.0)), Error);
}
