#pragma once

// Property checks shared by the unit tests and the acceptance binary. Each
// returns an empty string on success and a description of the first
// counterexample otherwise.

#include <random>
#include <set>
#include <string>

#include "fhtd/harness.hpp"
#include "fhtd/rng.hpp"
#include "oracle.hpp"

namespace props {

inline std::string fail(const std::string& what, int trial) { return what + " (trial " + std::to_string(trial) + ")"; }

/// Rescaling any exogenous column leaves the FSR path unchanged.
inline std::string fsr_scale_invariance(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logscale(-3.0, 3.0);
  for (int trial = 0; trial < trials; ++trial) {
    const auto spec = fhtd::builtin_spec(fhtd::Builtin::ex41, {200, 100, 4});
    const auto data = fhtd::simulate(spec, seed + static_cast<std::uint64_t>(trial));
    auto config = fhtd::FhtdConfig::defaults_for(200);
    const auto design = fhtd::LagDesign::from_dataset(data, config.q);
    config.K = 15;
    const auto base = fhtd::fsr_path(design, config);
    std::uniform_int_distribution<int> pick(design.q(), design.num_columns() - 1);
    auto scaled = design;
    for (int k = 0; k < 5; ++k) scaled = scaled.with_scaled_column(pick(rng), std::pow(10.0, logscale(rng)));
    const auto path = fhtd::fsr_path(scaled, config);
    if (path.steps.size() != base.steps.size()) return fail("path lengths differ", trial);
    for (std::size_t m = 0; m < path.steps.size(); ++m) {
      if (path.steps[m].column != base.steps[m].column) return fail("column differs at step " + std::to_string(m + 1), trial);
    }
  }
  return "";
}

/// (I - P) applied twice equals (I - P) applied once, and the basis is orthonormal.
inline std::string projection_idempotence(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < trials; ++trial) {
    const auto d = oracle::random_design(rng, 40, 12, 2);
    std::vector<int> ids{0, 1, 3, 5, 7, 8};
    fhtd::ActiveFit fit(d, ids);
    Eigen::VectorXd v(d.rows());
    for (int i = 0; i < d.rows(); ++i) v[i] = z(rng);
    const Eigen::VectorXd once = fit.residualize(v);
    const Eigen::VectorXd twice = fit.residualize(once);
    if ((once - twice).norm() > 1e-10 * std::max(1.0, v.norm())) return fail("residualize not idempotent", trial);
    const Eigen::MatrixXd b = fit.basis();
    const Eigen::MatrixXd gram = b.transpose() * b;
    if ((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm() > 1e-10) return fail("basis not orthonormal", trial);
  }
  return "";
}

/// ||y||^2 = ||Py||^2 + ||(I - P)y||^2 along a greedy path.
inline std::string pythagorean(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const auto d = oracle::random_design(rng, 50, 12, 3);
    fhtd::ActiveFit fit(d);
    for (int id : {4, 0, 9, 2, 11}) {
      fit.append(id);
      const Eigen::VectorXd fitted = d.response() - fit.residual();
      const double lhs = d.response().squaredNorm();
      const double rhs = fitted.squaredNorm() + fit.rss();
      if (oracle::rel_diff(lhs, rhs) > 1e-10) return fail("Pythagorean identity off", trial);
    }
  }
  return "";
}

/// A larger d never keeps an AR lag that a smaller d drops.
inline std::string ddt_monotone(int trials, std::uint64_t seed) {
  for (int trial = 0; trial < trials; ++trial) {
    const auto spec = fhtd::builtin_spec(fhtd::Builtin::ex42, {200, 100, 4});
    const auto data = fhtd::simulate(spec, seed + static_cast<std::uint64_t>(trial));
    auto config = fhtd::FhtdConfig::defaults_for(200);
    const auto design = fhtd::LagDesign::from_dataset(data, config.q);
    const auto path = fhtd::fsr_path(design, config);
    const auto J = fhtd::trim(design, design.ar_columns(), path.chosen(fhtd::hdic_stop(path)),
                              config.hdic_weight(design.num_exogenous()));
    std::set<int> previous;
    bool first = true;
    for (double d : {0.05, 0.1, 0.3, 0.5, 1.0, 2.0, 5.0, 20.0}) {
      config.d = d;
      const auto r = fhtd::ddt(design, config, J);
      const std::set<int> q(r.Q_hat.begin(), r.Q_hat.end());
      if (!first && !std::includes(previous.begin(), previous.end(), q.begin(), q.end())) {
        return fail("Q_hat grew when d increased to " + std::to_string(d), trial);
      }
      previous = q;
      first = false;
    }
  }
  return "";
}

/// Recomputes the subgradient conditions of every fit on the path from the
/// returned coefficients, in units of x~'r / n on the standardized scale.
inline double kkt_gap(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const fhtd::LassoFit& fit,
                      const std::vector<double>& pf, bool intercept, std::size_t i) {
  const double n = static_cast<double>(x.rows());
  const Eigen::RowVectorXd mean = intercept ? Eigen::RowVectorXd(x.colwise().mean()) : Eigen::RowVectorXd::Zero(x.cols());
  const Eigen::MatrixXd xc = x.rowwise() - mean;
  const Eigen::VectorXd r = y - x * fit.coefficients[i] - Eigen::VectorXd::Constant(x.rows(), fit.intercepts[i]);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double sd = std::sqrt(xc.col(j).squaredNorm() / n);
    if (!(sd > 0.0)) continue;
    const double g = xc.col(j).dot(r) / sd / n;
    const double pen = fit.lambdas[i] * pf[static_cast<std::size_t>(j)] / (2.0 * n);
    const double b = fit.coefficients[i][j];
    const double v = b != 0.0 ? std::abs(g - pen * (b > 0 ? 1.0 : -1.0)) : std::max(0.0, std::abs(g) - pen);
    worst = std::max(worst, v);
  }
  return worst;
}

inline std::string lasso_kkt(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < trials; ++trial) {
    const int rows = 60 + trial % 40;
    const int cols = 20 + (trial * 7) % 80;
    Eigen::MatrixXd x(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) x(i, j) = z(rng) + (j > 0 ? 0.5 * x(i, j - 1) : 0.0);
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) y[i] = 2.0 * x(i, 0) - 1.5 * x(i, 3) + x(i, cols - 1) + z(rng);
    fhtd::LassoConfig config;
    config.intercept = trial % 2 == 0;
    config.penalize_ar = trial % 3 != 0;
    const int ar = 2;
    const auto fit = fhtd::lasso_path(x, y, config, ar);
    std::vector<double> pf(static_cast<std::size_t>(cols), 1.0);
    if (!config.penalize_ar) std::fill(pf.begin(), pf.begin() + ar, 0.0);
    for (std::size_t i = 0; i < fit.lambdas.size(); ++i) {
      if (!fit.converged[i]) return fail("fit " + std::to_string(i) + " not converged", trial);
      const double gap = kkt_gap(x, y, fit, pf, config.intercept, i);
      if (gap > 10.0 * config.tol) return fail("KKT gap " + std::to_string(gap) + " at lambda index " + std::to_string(i), trial);
    }
  }
  return "";
}

/// Merging tallies in any grouping or order gives the same totals.
inline std::string tally_associativity(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 3);
  const std::set<int> tq{1, 4, 6};
  const std::set<fhtd::ExoKey> tj{{1, 1}, {2, 1}, {3, 2}};
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<fhtd::SelectionTally> parts(6);
    for (auto& part : parts) {
      for (int r = 0; r < 5; ++r) {
        std::vector<int> q;
        for (int lag = 1; lag <= 7; ++lag)
          if (coin(rng) > 0) q.push_back(lag);
        std::vector<fhtd::ExoKey> j;
        for (int s = 1; s <= 4; ++s)
          if (coin(rng) > 0) j.push_back({s, 1 + coin(rng) % 2});
        fhtd::tally(tq, tj, q, j, part);
      }
    }
    fhtd::SelectionTally left;
    for (const auto& p : parts) left.merge(p);
    fhtd::SelectionTally a = parts[0], b = parts[2], c = parts[4];
    a.merge(parts[1]);
    b.merge(parts[3]);
    c.merge(parts[5]);
    b.merge(c);
    a.merge(b);
    fhtd::SelectionTally reversed;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) reversed.merge(*it);
    if (!(left == a) || !(left == reversed)) return fail("merge depends on grouping or order", trial);
    if (left.e_count > left.ss_count || left.ss_count > left.reps) return fail("E <= SS <= reps violated", trial);
  }
  return "";
}

/// The CSV table is byte-identical for 1, 2 and 3 worker threads.
inline std::string thread_determinism(int reps) {
  fhtd::ExperimentConfig config = fhtd::preset("ex41-n200");
  config.reps = reps;
  config.seed = 11;
  std::string reference;
  for (int threads : {1, 2, 3}) {
    config.threads = threads;
    const std::string csv = fhtd::to_csv(fhtd::simulation_csv_table(fhtd::run_simulation(config)));
    if (threads == 1) {
      reference = csv;
    } else if (csv != reference) {
      return "CSV differs with " + std::to_string(threads) + " threads";
    }
  }
  return "";
}

}  // namespace props
