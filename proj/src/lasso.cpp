#include "fhtd/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "fhtd/types.hpp"

namespace fhtd {
namespace {

// Coordinate descent on the transformed problem, one lambda at a time with
// warm starts. Each outer iteration is a full sweep followed by an exact
// solve on the current support with its signs fixed; coordinate descent on
// the support's Gram matrix takes over when the exact solve flips a sign.
// Highly collinear unit-root lags make plain coordinate descent crawl, the
// exact solve is what lets those fits reach KKT tolerance.
class CoordinateDescent {
 public:
  CoordinateDescent(Eigen::MatrixXd x, Eigen::VectorXd y, std::vector<double> pf, const LassoConfig& config)
      : x_(std::move(x)), y_(std::move(y)), pf_(std::move(pf)), config_(config) {
    const Eigen::Index p = x_.cols();
    s_ = x_.colwise().squaredNorm().transpose();
    usable_.assign(static_cast<std::size_t>(p), false);
    for (Eigen::Index j = 0; j < p; ++j) usable_[static_cast<std::size_t>(j)] = s_[j] > 0.0;
    beta_ = Eigen::VectorXd::Zero(p);
    r_ = y_;
  }

  Eigen::Index cols() const { return x_.cols(); }
  const Eigen::VectorXd& beta() const { return beta_; }
  const Eigen::VectorXd& residual() const { return r_; }

  bool penalized(Eigen::Index j) const { return pf_[static_cast<std::size_t>(j)] > 0.0; }
  bool usable(Eigen::Index j) const { return usable_[static_cast<std::size_t>(j)]; }

  // OLS on the unpenalized columns; the starting point of the path.
  void fit_unpenalized() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      if (usable(j) && !penalized(j)) idx.push_back(j);
    }
    if (idx.empty()) return;
    Eigen::MatrixXd w(x_.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = x_.col(idx[k]);
    const Eigen::VectorXd coef = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(w).solve(y_);
    for (std::size_t k = 0; k < idx.size(); ++k) beta_[idx[k]] = coef[static_cast<Eigen::Index>(k)];
    r_ = y_ - x_ * beta_;
  }

  double lambda_max() const {
    double best = 0.0;
    const Eigen::VectorXd grad = x_.transpose() * r_;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      if (usable(j) && penalized(j)) best = std::max(best, 2.0 * std::abs(grad[j]) / pf_[static_cast<std::size_t>(j)]);
    }
    return best;
  }

  // Returns true when KKT conditions hold within tol.
  bool solve(double lambda, int& iterations_used, double& violation) {
    const double n = static_cast<double>(x_.rows());
    for (int iter = 0; iter < config_.max_iter;) {
      full_sweep(lambda);
      ++iter;
      const auto support = current_support();
      if (!support.empty() && !try_exact(lambda, support)) {
        iter += gram_sweeps(lambda, support, config_.max_iter - iter);
      }
      violation = kkt_violation(lambda, n);
      if (violation <= config_.tol) {
        iterations_used = iter;
        return true;
      }
    }
    iterations_used = config_.max_iter;
    violation = kkt_violation(lambda, n);
    return violation <= config_.tol;
  }

  double kkt_violation(double lambda, double n) const {
    const Eigen::VectorXd grad = x_.transpose() * r_;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      if (!usable(j)) continue;
      const double unit = std::sqrt(n * s_[j]);
      const double g = grad[j] / unit;
      const double pen = lambda * pf_[static_cast<std::size_t>(j)] / (2.0 * unit);
      double v;
      if (beta_[j] != 0.0) {
        v = std::abs(g - pen * (beta_[j] > 0 ? 1.0 : -1.0));
      } else {
        v = std::max(0.0, std::abs(g) - pen);
      }
      worst = std::max(worst, v);
    }
    return worst;
  }

 private:
  double soft(double z, double thr, double s) const {
    if (z > thr) return (z - thr) / s;
    if (z < -thr) return (z + thr) / s;
    return 0.0;
  }

  double full_sweep(double lambda) {
    const double n = static_cast<double>(x_.rows());
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      if (!usable(j)) continue;
      const double old = beta_[j];
      const double z = x_.col(j).dot(r_) + s_[j] * old;
      const double updated = soft(z, 0.5 * lambda * pf_[static_cast<std::size_t>(j)], s_[j]);
      if (updated != old) {
        r_ -= (updated - old) * x_.col(j);
        beta_[j] = updated;
        max_delta = std::max(max_delta, std::abs(updated - old) * std::sqrt(s_[j] / n));
      }
    }
    return max_delta;
  }

  std::vector<Eigen::Index> current_support() const {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      if (usable(j) && (beta_[j] != 0.0 || !penalized(j))) idx.push_back(j);
    }
    return idx;
  }

  Eigen::MatrixXd gather(const std::vector<Eigen::Index>& idx) const {
    Eigen::MatrixXd w(x_.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = x_.col(idx[k]);
    return w;
  }

  bool try_exact(double lambda, const std::vector<Eigen::Index>& idx) {
    const Eigen::MatrixXd w = gather(idx);
    const Eigen::MatrixXd gram = w.transpose() * w;
    Eigen::VectorXd rhs = w.transpose() * y_;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Eigen::Index j = idx[k];
      if (beta_[j] != 0.0) rhs[static_cast<Eigen::Index>(k)] -= 0.5 * lambda * pf_[static_cast<std::size_t>(j)] * (beta_[j] > 0 ? 1.0 : -1.0);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) return false;
    const Eigen::VectorXd sol = ldlt.solve(rhs);
    if (!sol.allFinite()) return false;
    if ((gram * sol - rhs).norm() > 1e-9 * (rhs.norm() + gram.norm() * sol.norm())) return false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Eigen::Index j = idx[k];
      if (lambda * pf_[static_cast<std::size_t>(j)] == 0.0 || beta_[j] == 0.0) continue;
      if ((sol[static_cast<Eigen::Index>(k)] > 0) != (beta_[j] > 0) || sol[static_cast<Eigen::Index>(k)] == 0.0) return false;
    }
    for (std::size_t k = 0; k < idx.size(); ++k) beta_[idx[k]] = sol[static_cast<Eigen::Index>(k)];
    r_ = y_ - w * sol;
    return true;
  }

  int gram_sweeps(double lambda, const std::vector<Eigen::Index>& idx, int budget) {
    const double n = static_cast<double>(x_.rows());
    const Eigen::MatrixXd w = gather(idx);
    const Eigen::MatrixXd gram = w.transpose() * w;
    Eigen::VectorXd grad = w.transpose() * r_;
    Eigen::VectorXd b(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) b[static_cast<Eigen::Index>(k)] = beta_[idx[k]];
    const Eigen::VectorXd b0 = b;
    int used = 0;
    for (; used < std::min(budget, 1000); ++used) {
      double max_delta = 0.0;
      for (Eigen::Index k = 0; k < b.size(); ++k) {
        const Eigen::Index j = idx[static_cast<std::size_t>(k)];
        const double old = b[k];
        const double z = grad[k] + gram(k, k) * old;
        const double updated = soft(z, 0.5 * lambda * pf_[static_cast<std::size_t>(j)], gram(k, k));
        if (updated != old) {
          grad -= (updated - old) * gram.col(k);
          b[k] = updated;
          max_delta = std::max(max_delta, std::abs(updated - old) * std::sqrt(gram(k, k) / n));
        }
      }
      if (max_delta < config_.tol) {
        ++used;
        break;
      }
    }
    for (std::size_t k = 0; k < idx.size(); ++k) beta_[idx[k]] = b[static_cast<Eigen::Index>(k)];
    r_ -= w * (b - b0);
    return used;
  }

  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  std::vector<double> pf_;
  LassoConfig config_;
  Eigen::VectorXd s_;
  std::vector<bool> usable_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd r_;
};

std::vector<double> geometric_grid(double hi, double ratio, int count) {
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = hi;
    return grid;
  }
  const double step = std::log(ratio) / (count - 1);
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = hi * std::exp(step * i);
  return grid;
}

}  // namespace

void LassoConfig::validate() const {
  if (!(tol > 0.0)) throw Error("InvalidConfig", "LASSO tol must be > 0");
  if (max_iter < 1) throw Error("InvalidConfig", "LASSO max_iter must be >= 1");
  if (lambda_grid.empty()) {
    if (n_lambda < 1) throw Error("InvalidConfig", "n_lambda must be >= 1");
    if (lambda_min_ratio && !(*lambda_min_ratio > 0.0 && *lambda_min_ratio <= 1.0)) {
      throw Error("InvalidConfig", "lambda_min_ratio must lie in (0, 1]");
    }
  }
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] >= 0.0)) throw Error("InvalidConfig", "lambda grid values must be >= 0");
    if (i > 0 && !(lambda_grid[i] < lambda_grid[i - 1])) {
      throw Error("InvalidConfig", "lambda grid must be strictly decreasing");
    }
  }
}

LassoFit weighted_lasso_path(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                             const LassoConfig& config, std::span<const double> penalty_factors) {
  config.validate();
  if (x.rows() != y.size()) throw Error("InvalidDesign", "LASSO design and response differ in length");
  if (!x.allFinite() || !y.allFinite()) throw Error("NonFinite", "LASSO inputs must be finite");
  const Eigen::Index rows = x.rows();
  const Eigen::Index p = x.cols();
  const double n = static_cast<double>(rows);
  if (rows == 0) throw Error("EmptyDesign", "LASSO needs at least one row");

  std::vector<double> pf(static_cast<std::size_t>(p), 1.0);
  if (!penalty_factors.empty()) {
    if (static_cast<Eigen::Index>(penalty_factors.size()) != p) {
      throw Error("InvalidConfig", "one penalty factor per column is required");
    }
    for (std::size_t j = 0; j < pf.size(); ++j) {
      if (!(penalty_factors[j] >= 0.0) || !std::isfinite(penalty_factors[j])) {
        throw Error("InvalidConfig", "penalty factors must be finite and >= 0");
      }
      pf[j] = penalty_factors[j];
    }
  }

  Eigen::RowVectorXd means = Eigen::RowVectorXd::Zero(p);
  double y_mean = 0.0;
  if (config.intercept) {
    means = x.colwise().mean();
    y_mean = y.mean();
  }
  Eigen::MatrixXd xt = x.rowwise() - means;
  Eigen::VectorXd scales = Eigen::VectorXd::Ones(p);
  if (config.standardize) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double sd = std::sqrt(xt.col(j).squaredNorm() / n);
      scales[j] = sd > 0.0 ? sd : 1.0;
      xt.col(j) /= scales[j];
    }
  }
  Eigen::VectorXd yt = y.array() - y_mean;
  const double yt_null_rss = yt.squaredNorm();

  CoordinateDescent cd(std::move(xt), std::move(yt), pf, config);
  cd.fit_unpenalized();

  std::vector<double> grid = config.lambda_grid;
  const bool generated = grid.empty();
  if (generated) {
    double hi = cd.lambda_max();
    if (!(hi > 0.0)) hi = 1.0;
    const double ratio = config.lambda_min_ratio.value_or(rows < p ? 1e-2 : 1e-4);
    grid = geometric_grid(hi, ratio, config.n_lambda);
  }
  const double null_rss = yt_null_rss;
  double prev_dev = 0.0;

  LassoFit fit;
  for (double lambda : grid) {
    int iters = 0;
    double violation = 0.0;
    const bool ok = cd.solve(lambda, iters, violation);
    const Eigen::VectorXd& bt = cd.beta();
    Eigen::VectorXd coef = bt.array() / scales.array();
    std::vector<int> active;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (bt[j] != 0.0) active.push_back(static_cast<int>(j));
    }
    const double rss = cd.residual().squaredNorm();
    const int df = static_cast<int>(active.size());
    fit.std_coefficients.push_back(bt);
    fit.intercepts.push_back(config.intercept ? y_mean - means.dot(coef) : 0.0);
    fit.coefficients.push_back(std::move(coef));
    fit.active.push_back(std::move(active));
    fit.rss.push_back(rss);
    fit.bic.push_back(rss > 0.0 ? n * std::log(rss / n) + std::log(n) * df
                                : -std::numeric_limits<double>::infinity());
    fit.converged.push_back(ok);
    fit.kkt_violation.push_back(violation);
    fit.lambdas.push_back(lambda);

    if (generated && config.early_stop && null_rss > 0.0) {
      const double dev = 1.0 - rss / null_rss;
      const bool flat = dev - prev_dev < 1e-5 * dev;
      prev_dev = dev;
      if (fit.lambdas.size() >= 5 && (dev > 0.999 || flat || df >= rows)) break;
    }
  }
  fit.chosen = static_cast<int>(std::min_element(fit.bic.begin(), fit.bic.end()) - fit.bic.begin());
  return fit;
}

LassoFit lasso_path(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                    const LassoConfig& config, int ar_columns) {
  if (ar_columns < 0 || ar_columns > x.cols()) throw Error("InvalidConfig", "bad AR column count");
  std::vector<double> pf(static_cast<std::size_t>(x.cols()), 1.0);
  if (!config.penalize_ar) std::fill(pf.begin(), pf.begin() + ar_columns, 0.0);
  return weighted_lasso_path(x, y, config, pf);
}

LassoFit adaptive_lasso(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                        const LassoConfig& config, int ar_columns) {
  const LassoFit first = lasso_path(x, y, config, ar_columns);
  const Eigen::VectorXd& b1 = first.std_coefficients[static_cast<std::size_t>(first.chosen)];
  const Eigen::Index p = x.cols();

  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (b1[j] != 0.0) keep.push_back(j);
  }

  if (keep.empty()) {
    LassoFit empty;
    const double n = static_cast<double>(x.rows());
    const double y_mean = config.intercept ? y.mean() : 0.0;
    const double rss = (y.array() - y_mean).matrix().squaredNorm();
    empty.lambdas = {first.lambdas[static_cast<std::size_t>(first.chosen)]};
    empty.coefficients = {Eigen::VectorXd::Zero(p)};
    empty.std_coefficients = {Eigen::VectorXd::Zero(p)};
    empty.intercepts = {y_mean};
    empty.active = {{}};
    empty.rss = {rss};
    empty.bic = {rss > 0.0 ? n * std::log(rss / n) : -std::numeric_limits<double>::infinity()};
    empty.converged = {true};
    empty.kkt_violation = {0.0};
    empty.all_zero_first_stage = true;
    return empty;
  }

  Eigen::MatrixXd sub(x.rows(), static_cast<Eigen::Index>(keep.size()));
  std::vector<double> weights(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    sub.col(static_cast<Eigen::Index>(k)) = x.col(keep[k]);
    weights[k] = 1.0 / std::abs(b1[keep[k]]);
  }
  LassoConfig second_cfg = config;
  second_cfg.penalize_ar = true;
  second_cfg.lambda_grid.clear();
  const LassoFit second = weighted_lasso_path(sub, y, second_cfg, weights);

  LassoFit out;
  out.lambdas = second.lambdas;
  out.intercepts = second.intercepts;
  out.rss = second.rss;
  out.bic = second.bic;
  out.converged = second.converged;
  out.kkt_violation = second.kkt_violation;
  out.chosen = second.chosen;
  for (std::size_t i = 0; i < second.lambdas.size(); ++i) {
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd std_coef = Eigen::VectorXd::Zero(p);
    std::vector<int> active;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      coef[keep[k]] = second.coefficients[i][static_cast<Eigen::Index>(k)];
      std_coef[keep[k]] = second.std_coefficients[i][static_cast<Eigen::Index>(k)];
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      if (coef[j] != 0.0) active.push_back(static_cast<int>(j));
    }
    out.coefficients.push_back(std::move(coef));
    out.std_coefficients.push_back(std::move(std_coef));
    out.active.push_back(std::move(active));
  }
  return out;
}

}  // namespace fhtd
