#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fhtd/types.hpp"

namespace fhtd {

// ---------------------------------------------------------------------------
// Specifications
// ---------------------------------------------------------------------------

struct ComplexRootPair {
  double theta = 0.0;  ///< location in (0, pi)
  int multiplicity = 1;
};

/// Characteristic polynomial
///   (1-z)^a (1+z)^b prod_k (1 - 2 cos(theta_k) z + z^2)^{d_k} psi(z),
/// with psi(z) = 1 + sum_s psi_coeffs[s-1] z^s.
struct UnitRootSpec {
  int a = 0;
  int b = 0;
  std::vector<ComplexRootPair> complex_pairs;
  std::vector<double> psi_coeffs;

  /// Number of unit roots a + b + 2 sum d_k.
  int unit_root_order() const;
  /// Throws Error("InvalidSpec") on a bad theta, a negative order, or a psi
  /// with a root inside the closed unit disc.
  void validate() const;
};

struct GaussianErrors {};
struct StudentTErrors {
  double df = 6.0;
};
struct Garch11Errors {
  double omega = 0.05;
  double alpha = 0.05;
  double beta = 0.9;
};
using ErrorProcessSpec = std::variant<GaussianErrors, StudentTErrors, Garch11Errors>;

/// x_{t,j} = rho x_{t-1,j} + factor_weight * w_t + v_{t,j};  w, v iid N(0,1).
/// rho = factor_weight = 0 gives iid standard normal covariates.
struct Ar1CommonFactor {
  double rho = 0.8;
  double factor_weight = 2.0;
};

/// x_{t,j} = sum_i ar[i] x_{t-1-i,j} + w_{t,j} + sum_i ma[i] w_{t-1-i,j},
/// w_t = A pi_t with A_ij = band_base^{|i-j|} for |i-j| <= band_width and
/// pi_{t,j} iid t(innov_df).
struct ArmaBanded {
  std::vector<double> ar{0.1, -0.7};
  std::vector<double> ma{0.7};
  double band_base = 0.6;
  int band_width = 7;
  double innov_df = 13.0;
};

/// Two independent ARCH(1) drivers pi_{t,1}, pi_{t,2} with
/// h_t^2 = arch_omega + arch_alpha pi_{t-1}^2; w_{t,j} = pi_{t,k} + v_{t,j}
/// where k = 1 for odd j and 2 for even j; x_{t,j} = m0 w_{t,j} + m1 w_{t-1,j}
/// with (m0, m1) = ma_odd or ma_even.
struct Ma2ArchPair {
  std::array<double, 2> ma_odd{0.8, 0.1};
  std::array<double, 2> ma_even{0.2, 0.6};
  double arch_omega = 1.0;
  double arch_alpha = 0.2;
};

struct CovariateProcessSpec {
  std::variant<Ar1CommonFactor, ArmaBanded, Ma2ArchPair> kind;
  int p = 0;

  void validate() const;
};

struct DgpSpec {
  UnitRootSpec unit_root;
  ErrorProcessSpec error;
  CovariateProcessSpec covariates;
  std::map<ExoKey, double> beta;
  int n = 0;
  int burn_in = 500;
  /// Lags r per exogenous series offered as candidates when building a design.
  int candidate_lags = 1;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Generated data
// ---------------------------------------------------------------------------

struct Dataset {
  Eigen::VectorXd y;       ///< y_1..y_n
  Eigen::MatrixXd x;       ///< n x p, column j-1 holds x_{t,j}
  Eigen::VectorXd errors;  ///< epsilon_1..epsilon_n
  std::set<int> true_Q;
  std::set<ExoKey> true_J;
  Eigen::VectorXd alpha_true;  ///< alpha_1..alpha_m
  int candidate_lags = 1;

  int n() const { return static_cast<int>(y.size()); }
  int p() const { return static_cast<int>(x.cols()); }
};

/// Expands 1 - sum_i alpha_i z^i into its alpha_1..alpha_m.
Eigen::VectorXd expand_characteristic(const UnitRootSpec& spec);

/// Multiplies two polynomials given by ascending coefficients.
std::vector<double> poly_multiply(const std::vector<double>& lhs, const std::vector<double>& rhs);

/// True when every root of 1 + sum_s coeffs[s-1] z^s has modulus > 1 + tol.
bool roots_outside_unit_circle(const std::vector<double>& coeffs, double tol = 1e-8);

/// Throws Error("NonStationaryCovariate") or Error("NonFinite") when the
/// recursions blow past 1e12.
Dataset simulate(const DgpSpec& spec, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Built-in data-generating processes
// ---------------------------------------------------------------------------

enum class Builtin { ex41, ex42, ex_s5, ex21, ex22, ex31 };

struct SizeTier {
  int n = 0;
  int p = 0;
  int r = 0;

  auto operator<=>(const SizeTier&) const = default;
};

/// Exact DGP of a named example. For ex21 `param` is a; for ex31 it is k.
/// ex41/ex42/ex_s5 require one of their published tiers (UnknownTier otherwise);
/// for ex21 tier.p is the number of iid covariates; ex22/ex31 only read tier.n.
DgpSpec builtin_spec(Builtin which, SizeTier tier, double param = 0.0);

std::vector<SizeTier> published_tiers(Builtin which);
Builtin parse_builtin(const std::string& name);
std::string builtin_name(Builtin which);

/// q_n = floor(2 n^{1/4}).
int default_ar_lags(int n);

}  // namespace fhtd
