#include "fhtd/tsdgp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "fhtd/rng.hpp"

namespace fhtd {
namespace {

constexpr double kOverflow = 1e12;

std::vector<double> poly_power(const std::vector<double>& base, int power) {
  std::vector<double> out{1.0};
  for (int i = 0; i < power; ++i) out = poly_multiply(out, base);
  return out;
}

void check_finite_bound(double value, const char* code, const char* what) {
  if (!std::isfinite(value) || std::abs(value) > kOverflow) {
    throw Error(code, std::string(what) + " exceeded the overflow guard");
  }
}

// Draws one error path of length burn_in + n and returns the last n values.
Eigen::VectorXd draw_errors(const ErrorProcessSpec& spec, int n, int burn_in, std::uint64_t seed) {
  Rng rng = make_stream(seed, StreamRole::errors);
  Eigen::VectorXd out(n);
  std::normal_distribution<double> normal;
  if (std::holds_alternative<GaussianErrors>(spec)) {
    for (int t = 0; t < n; ++t) out[t] = normal(rng);
  } else if (const auto* st = std::get_if<StudentTErrors>(&spec)) {
    std::student_t_distribution<double> dist(st->df);
    for (int t = 0; t < n; ++t) out[t] = dist(rng);
  } else {
    const auto& g = std::get<Garch11Errors>(spec);
    double sigma2 = g.omega / (1.0 - g.alpha - g.beta);
    double eps = 0.0;
    bool first = true;
    for (int t = -burn_in; t < n; ++t) {
      if (!first) sigma2 = g.omega + g.alpha * eps * eps + g.beta * sigma2;
      first = false;
      eps = std::sqrt(sigma2) * normal(rng);
      check_finite_bound(eps, "NonFinite", "GARCH error recursion");
      if (t >= 0) out[t] = eps;
    }
  }
  return out;
}

Eigen::MatrixXd draw_ar1_common_factor(const Ar1CommonFactor& spec, int p, int n, int burn_in,
                                       std::uint64_t seed) {
  const int total = n + burn_in;
  Eigen::VectorXd factor(total);
  {
    Rng rng = make_stream(seed, StreamRole::common_factor);
    std::normal_distribution<double> normal;
    for (int t = 0; t < total; ++t) factor[t] = normal(rng);
  }
  Eigen::MatrixXd x(n, p);
  for (int j = 0; j < p; ++j) {
    Rng rng = make_stream(seed, StreamRole::covariate, static_cast<std::uint64_t>(j));
    std::normal_distribution<double> normal;
    double prev = 0.0;
    for (int t = 0; t < total; ++t) {
      const double cur = spec.rho * prev + spec.factor_weight * factor[t] + normal(rng);
      check_finite_bound(cur, "NonStationaryCovariate", "AR(1) covariate recursion");
      if (t >= burn_in) x(t - burn_in, j) = cur;
      prev = cur;
    }
  }
  return x;
}

Eigen::MatrixXd draw_arma_banded(const ArmaBanded& spec, int p, int n, int burn_in,
                                 std::uint64_t seed) {
  const int total = n + burn_in;
  // pi: total x p, one stream per series.
  Eigen::MatrixXd pi(total, p);
  for (int j = 0; j < p; ++j) {
    Rng rng = make_stream(seed, StreamRole::covariate, static_cast<std::uint64_t>(j));
    std::student_t_distribution<double> dist(spec.innov_df);
    for (int t = 0; t < total; ++t) pi(t, j) = dist(rng);
  }
  std::vector<double> weights(static_cast<std::size_t>(spec.band_width) + 1);
  for (int k = 0; k <= spec.band_width; ++k) weights[k] = std::pow(spec.band_base, k);

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(total, p);
  for (int j = 0; j < p; ++j) {
    const int lo = std::max(0, j - spec.band_width);
    const int hi = std::min(p - 1, j + spec.band_width);
    for (int i = lo; i <= hi; ++i) w.col(j) += weights[std::abs(i - j)] * pi.col(i);
  }

  const int nar = static_cast<int>(spec.ar.size());
  const int nma = static_cast<int>(spec.ma.size());
  Eigen::MatrixXd x(n, p);
  std::vector<double> hist(total, 0.0);
  for (int j = 0; j < p; ++j) {
    for (int t = 0; t < total; ++t) {
      double v = w(t, j);
      for (int i = 0; i < nar && t - 1 - i >= 0; ++i) v += spec.ar[i] * hist[t - 1 - i];
      for (int i = 0; i < nma && t - 1 - i >= 0; ++i) v += spec.ma[i] * w(t - 1 - i, j);
      check_finite_bound(v, "NonStationaryCovariate", "ARMA covariate recursion");
      hist[t] = v;
      if (t >= burn_in) x(t - burn_in, j) = v;
    }
  }
  return x;
}

Eigen::MatrixXd draw_ma2_arch_pair(const Ma2ArchPair& spec, int p, int n, int burn_in,
                                   std::uint64_t seed) {
  const int total = n + burn_in;
  std::array<Eigen::VectorXd, 2> drivers;
  for (int k = 0; k < 2; ++k) {
    Rng rng = make_stream(seed, StreamRole::arch_driver, static_cast<std::uint64_t>(k));
    std::normal_distribution<double> normal;
    drivers[k].resize(total);
    double h2 = spec.arch_omega / (1.0 - spec.arch_alpha);
    double prev = 0.0;
    for (int t = 0; t < total; ++t) {
      if (t > 0) h2 = spec.arch_omega + spec.arch_alpha * prev * prev;
      prev = std::sqrt(h2) * normal(rng);
      check_finite_bound(prev, "NonStationaryCovariate", "ARCH driver recursion");
      drivers[k][t] = prev;
    }
  }
  Eigen::MatrixXd x(n, p);
  for (int j = 0; j < p; ++j) {
    Rng rng = make_stream(seed, StreamRole::covariate, static_cast<std::uint64_t>(j));
    std::normal_distribution<double> normal;
    // Series are 1-based in the model: column 0 is series 1 (odd).
    const bool odd = (j % 2) == 0;
    const auto& driver = drivers[odd ? 0 : 1];
    const auto& ma = odd ? spec.ma_odd : spec.ma_even;
    double w_prev = 0.0;
    for (int t = 0; t < total; ++t) {
      const double w_cur = driver[t] + normal(rng);
      if (t >= burn_in) x(t - burn_in, j) = ma[0] * w_cur + ma[1] * w_prev;
      w_prev = w_cur;
    }
  }
  return x;
}

}  // namespace

std::vector<double> poly_multiply(const std::vector<double>& lhs, const std::vector<double>& rhs) {
  if (lhs.empty() || rhs.empty()) return {};
  std::vector<double> out(lhs.size() + rhs.size() - 1, 0.0);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    for (std::size_t j = 0; j < rhs.size(); ++j) out[i + j] += lhs[i] * rhs[j];
  return out;
}

bool roots_outside_unit_circle(const std::vector<double>& coeffs, double tol) {
  int m = static_cast<int>(coeffs.size());
  while (m > 0 && coeffs[m - 1] == 0.0) --m;
  if (m == 0) return true;
  // Roots of 1 + c_1 z + ... + c_m z^m are reciprocals of the eigenvalues of
  // the companion matrix of z^m + c_1 z^{m-1} + ... + c_m.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) companion(0, i) = -coeffs[i];
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  for (int i = 0; i < m; ++i) {
    const double modulus = std::abs(solver.eigenvalues()[i]);
    if (modulus <= 0.0) continue;
    if (1.0 / modulus <= 1.0 + tol) return false;
  }
  return true;
}

int UnitRootSpec::unit_root_order() const {
  int d = a + b;
  for (const auto& pair : complex_pairs) d += 2 * pair.multiplicity;
  return d;
}

void UnitRootSpec::validate() const {
  if (a < 0 || b < 0) throw Error("InvalidSpec", "unit-root orders must be nonnegative");
  for (const auto& pair : complex_pairs) {
    if (!(pair.theta > 0.0 && pair.theta < std::numbers::pi)) {
      throw Error("InvalidSpec", "complex unit-root location must lie in (0, pi)");
    }
    if (pair.multiplicity < 1) throw Error("InvalidSpec", "complex root multiplicity must be >= 1");
  }
  if (!roots_outside_unit_circle(psi_coeffs)) {
    throw Error("InvalidSpec", "psi(z) has a root in the closed unit disc");
  }
}

void CovariateProcessSpec::validate() const {
  if (p < 0) throw Error("InvalidSpec", "covariate count must be nonnegative");
  if (const auto* ar1 = std::get_if<Ar1CommonFactor>(&kind)) {
    if (!(std::abs(ar1->rho) < 1.0)) throw Error("InvalidSpec", "AR(1) covariate needs |rho| < 1");
  } else if (const auto* arma = std::get_if<ArmaBanded>(&kind)) {
    std::vector<double> poly;
    for (double c : arma->ar) poly.push_back(-c);
    if (!roots_outside_unit_circle(poly)) {
      throw Error("InvalidSpec", "ARMA covariate AR polynomial is not stationary");
    }
    if (arma->band_width < 0) throw Error("InvalidSpec", "band width must be nonnegative");
    if (!(arma->innov_df > 0.0)) throw Error("InvalidSpec", "t innovations need df > 0");
  } else {
    const auto& arch = std::get<Ma2ArchPair>(kind);
    if (!(arch.arch_omega > 0.0 && arch.arch_alpha >= 0.0 && arch.arch_alpha < 1.0)) {
      throw Error("InvalidSpec", "ARCH driver needs omega > 0 and 0 <= alpha < 1");
    }
  }
}

void DgpSpec::validate() const {
  unit_root.validate();
  covariates.validate();
  if (n <= 0) throw Error("InvalidSpec", "sample size must be positive");
  if (burn_in < 0) throw Error("InvalidSpec", "burn-in must be nonnegative");
  if (candidate_lags < 1) throw Error("InvalidSpec", "candidate lag count must be >= 1");
  if (const auto* g = std::get_if<Garch11Errors>(&error)) {
    if (!(g->omega > 0.0 && g->alpha >= 0.0 && g->beta >= 0.0 && g->alpha + g->beta < 1.0)) {
      throw Error("InvalidSpec", "GARCH(1,1) needs omega > 0, alpha, beta >= 0, alpha + beta < 1");
    }
  } else if (const auto* st = std::get_if<StudentTErrors>(&error)) {
    if (!(st->df > 0.0)) throw Error("InvalidSpec", "t errors need df > 0");
  }
  for (const auto& [key, value] : beta) {
    if (key.series < 1 || key.series > covariates.p || key.lag < 1) {
      throw Error("InvalidSpec", "beta key outside 1 <= j <= p, l >= 1");
    }
    if (!std::isfinite(value)) throw Error("InvalidSpec", "beta coefficient must be finite");
  }
}

Eigen::VectorXd expand_characteristic(const UnitRootSpec& spec) {
  std::vector<double> poly{1.0};
  poly = poly_multiply(poly, poly_power({1.0, -1.0}, spec.a));
  poly = poly_multiply(poly, poly_power({1.0, 1.0}, spec.b));
  for (const auto& pair : spec.complex_pairs) {
    poly = poly_multiply(poly, poly_power({1.0, -2.0 * std::cos(pair.theta), 1.0}, pair.multiplicity));
  }
  std::vector<double> psi{1.0};
  psi.insert(psi.end(), spec.psi_coeffs.begin(), spec.psi_coeffs.end());
  poly = poly_multiply(poly, psi);

  Eigen::VectorXd alpha(static_cast<Eigen::Index>(poly.size()) - 1);
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double c = -poly[static_cast<std::size_t>(i) + 1];
    // cos() of rational multiples of pi leaves ~1e-16 residue on cancelled terms.
    alpha[i] = std::abs(c) < 1e-12 ? 0.0 : c;
  }
  return alpha;
}

Dataset simulate(const DgpSpec& spec, std::uint64_t seed) {
  spec.validate();
  const int n = spec.n;
  const int p = spec.covariates.p;

  Dataset data;
  data.candidate_lags = spec.candidate_lags;
  data.alpha_true = expand_characteristic(spec.unit_root);
  for (Eigen::Index i = 0; i < data.alpha_true.size(); ++i) {
    if (data.alpha_true[i] != 0.0) data.true_Q.insert(static_cast<int>(i) + 1);
  }
  for (const auto& [key, value] : spec.beta) {
    if (value != 0.0) data.true_J.insert(key);
  }

  data.errors = draw_errors(spec.error, n, spec.burn_in, seed);
  if (p == 0) {
    data.x.resize(n, 0);
  } else if (const auto* ar1 = std::get_if<Ar1CommonFactor>(&spec.covariates.kind)) {
    data.x = draw_ar1_common_factor(*ar1, p, n, spec.burn_in, seed);
  } else if (const auto* arma = std::get_if<ArmaBanded>(&spec.covariates.kind)) {
    data.x = draw_arma_banded(*arma, p, n, spec.burn_in, seed);
  } else {
    data.x = draw_ma2_arch_pair(std::get<Ma2ArchPair>(spec.covariates.kind), p, n, spec.burn_in, seed);
  }

  const Eigen::VectorXd& alpha = data.alpha_true;
  const int m = static_cast<int>(alpha.size());
  data.y.resize(n);
  // y_t = 0 and x contributions vanish for t <= 0.
  for (int t = 0; t < n; ++t) {
    double v = data.errors[t];
    for (int i = 1; i <= m && t - i >= 0; ++i) v += alpha[i - 1] * data.y[t - i];
    for (const auto& [key, coef] : spec.beta) {
      const int src = t - key.lag;
      if (src >= 0) v += coef * data.x(src, key.series - 1);
    }
    check_finite_bound(v, "NonFinite", "y recursion");
    data.y[t] = v;
  }
  return data;
}

// ---------------------------------------------------------------------------

std::vector<SizeTier> published_tiers(Builtin which) {
  switch (which) {
    case Builtin::ex41:
    case Builtin::ex42:
      return {{200, 100, 4}, {400, 200, 5}, {800, 500, 6}};
    case Builtin::ex_s5:
      return {{800, 250, 4}, {1000, 275, 5}, {1500, 300, 6}};
    default:
      return {};
  }
}

Builtin parse_builtin(const std::string& name) {
  if (name == "ex41") return Builtin::ex41;
  if (name == "ex42") return Builtin::ex42;
  if (name == "ex_s5") return Builtin::ex_s5;
  if (name == "ex21") return Builtin::ex21;
  if (name == "ex22") return Builtin::ex22;
  if (name == "ex31") return Builtin::ex31;
  throw Error("UnknownBuiltin", "no built-in DGP named '" + name + "'");
}

std::string builtin_name(Builtin which) {
  switch (which) {
    case Builtin::ex41: return "ex41";
    case Builtin::ex42: return "ex42";
    case Builtin::ex_s5: return "ex_s5";
    case Builtin::ex21: return "ex21";
    case Builtin::ex22: return "ex22";
    case Builtin::ex31: return "ex31";
  }
  return "unknown";
}

int default_ar_lags(int n) {
  return static_cast<int>(std::floor(2.0 * std::pow(static_cast<double>(n), 0.25)));
}

DgpSpec builtin_spec(Builtin which, SizeTier tier, double param) {
  const auto tiers = published_tiers(which);
  if (!tiers.empty() && std::find(tiers.begin(), tiers.end(), tier) == tiers.end()) {
    throw Error("UnknownTier", "tier (" + std::to_string(tier.n) + ", " + std::to_string(tier.p) +
                                   ", " + std::to_string(tier.r) + ") is not published for " +
                                   builtin_name(which));
  }

  DgpSpec spec;
  spec.n = tier.n;
  switch (which) {
    case Builtin::ex41: {
      spec.unit_root.a = 1;
      spec.unit_root.psi_coeffs = {0.0, 0.0, 0.0, -0.45, -0.45};
      spec.error = StudentTErrors{6.0};
      spec.covariates = {Ar1CommonFactor{0.8, 2.0}, tier.p};
      const double lag1[] = {3, 3.75, 4.5, 5.25, 6};
      const double lag2[] = {6.75, 7.5, 8.25, 9, 9.25};
      for (int j = 0; j < 5; ++j) {
        spec.beta[{j + 1, 1}] = lag1[j];
        spec.beta[{j + 6, 2}] = lag2[j];
      }
      spec.candidate_lags = tier.r;
      break;
    }
    case Builtin::ex42: {
      spec.unit_root.complex_pairs = {{0.1, 1}};
      spec.unit_root.psi_coeffs = {-0.3};
      spec.error = Garch11Errors{5e-2, 0.05, 0.9};
      spec.covariates = {ArmaBanded{}, tier.p};
      const double lag1[] = {0.82, -1.03, 1.92, -2.21, 2.42};
      const double lag2[] = {-2.57, 3.28, -3.54, 3.72, -3.90};
      for (int j = 0; j < 5; ++j) {
        spec.beta[{j + 1, 1}] = lag1[j];
        spec.beta[{j + 6, 2}] = lag2[j];
      }
      spec.candidate_lags = tier.r;
      break;
    }
    case Builtin::ex_s5: {
      spec.unit_root.a = 2;
      spec.unit_root.psi_coeffs = {0.4};
      spec.error = Garch11Errors{5e-2, 0.5, 0.1};
      spec.covariates = {Ma2ArchPair{}, tier.p};
      const double s1[] = {-7.62, 6.72, -5.55, 3.77};
      const double s2[] = {6.89, -6.18, 4.47, -3.10};
      for (int l = 0; l < 4; ++l) {
        spec.beta[{1, l + 1}] = s1[l];
        spec.beta[{2, l + 1}] = s2[l];
      }
      spec.candidate_lags = tier.r;
      break;
    }
    case Builtin::ex21: {
      // alpha_1 = 1 + a, alpha_2 = -a  <=>  (1 - z)(1 - a z).
      spec.unit_root.a = 1;
      spec.unit_root.psi_coeffs = {-param};
      spec.error = GaussianErrors{};
      spec.covariates = {Ar1CommonFactor{0.0, 0.0}, tier.p};
      spec.candidate_lags = 1;
      break;
    }
    case Builtin::ex22: {
      spec.unit_root.a = 1;
      spec.error = GaussianErrors{};
      spec.covariates = {Ar1CommonFactor{0.0, 0.0}, 1};
      spec.beta[{1, 1}] = 1.0;
      spec.candidate_lags = 1;
      break;
    }
    case Builtin::ex31: {
      // 1 - z^k factored over the k-th roots of unity.
      const int k = static_cast<int>(param);
      if (k < 1) throw Error("InvalidSpec", "ex31 needs k >= 1");
      spec.unit_root.a = 1;
      spec.unit_root.b = (k % 2 == 0) ? 1 : 0;
      for (int i = 1; 2 * i < k; ++i) {
        spec.unit_root.complex_pairs.push_back({2.0 * std::numbers::pi * i / k, 1});
      }
      spec.error = GaussianErrors{};
      spec.covariates = {Ar1CommonFactor{0.0, 0.0}, 0};
      spec.candidate_lags = 1;
      break;
    }
  }
  return spec;
}

}  // namespace fhtd
