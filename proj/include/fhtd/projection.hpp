#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fhtd/types.hpp"

namespace fhtd {

struct Dataset;

/// Relative squared-norm survival below which a residualized column counts
/// as collinear with the active set.
inline constexpr double kTolCollinear = 1e-10;

/// Regression design of an ARX model over the window t = rbar+1..n.
///
/// Columns 0..q-1 are the AR lags y_{t-1}..y_{t-q}; the remaining columns are
/// the exogenous candidates x_{t-l,j}, ordered by (j, l) lexicographically so
/// that a lower column id always means a lower (j, l).
class LagDesign {
 public:
  /// `lags_per_series[j]` is r_{j+1}. Throws Error("EmptyDesign") when the
  /// window has no rows.
  static LagDesign from_series(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int q,
                               std::vector<int> lags_per_series);
  static LagDesign from_series(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int q, int r);
  static LagDesign from_dataset(const Dataset& data, int q);

  /// Design from explicit columns. The first `ar_columns` are treated as AR
  /// lags 1..ar_columns, the rest as exogenous series (j, 1). `scale_n`
  /// defaults to the row count.
  static LagDesign from_columns(Eigen::VectorXd response, Eigen::MatrixXd columns, int ar_columns = 0,
                                std::optional<int> scale_n = std::nullopt);

  int q() const { return q_; }
  /// Sample size n used in the n^{-1} prefactors.
  int n() const { return n_; }
  int rows() const { return static_cast<int>(response_.size()); }
  int r_bar() const { return r_bar_; }
  int num_columns() const { return static_cast<int>(columns_.cols()); }
  int num_exogenous() const { return num_columns() - q_; }

  const Eigen::VectorXd& response() const { return response_; }
  const Eigen::MatrixXd& columns() const { return columns_; }
  auto column(ColumnId id) const { return columns_.col(id); }
  double column_norm2(ColumnId id) const { return column_norm2_[id]; }
  const Eigen::VectorXd& column_norms2() const { return column_norm2_; }

  bool is_ar(ColumnId id) const { return id < q_; }
  int ar_lag(ColumnId id) const { return id + 1; }
  ColumnId ar_column(int lag) const { return lag - 1; }
  ExoKey exo_key(ColumnId id) const { return keys_[static_cast<std::size_t>(id - q_)]; }
  /// Throws Error("UnknownColumn") when (j, l) is not a candidate.
  ColumnId exo_column(ExoKey key) const;
  std::vector<ColumnId> ar_columns() const;
  std::vector<ColumnId> exogenous_columns() const;

  /// Copy with the response and every column centred over the window.
  LagDesign demeaned() const;
  /// Copy with column `id` multiplied by `factor`.
  LagDesign with_scaled_column(ColumnId id, double factor) const;

 private:
  void finalize();

  int q_ = 0;
  int n_ = 0;
  int r_bar_ = 0;
  Eigen::VectorXd response_;
  Eigen::MatrixXd columns_;
  Eigen::VectorXd column_norm2_;
  std::vector<ExoKey> keys_;
};

/// Incremental least-squares fit of the response on an ordered active set,
/// kept as an orthonormal basis updated one column at a time by modified
/// Gram-Schmidt with one reorthogonalization pass.
///
/// Holds a reference to the design; the design must outlive the fit.
class ActiveFit {
 public:
  /// Throws Error("EmptyDesign") for a design without rows.
  ActiveFit(const LagDesign& design, std::span<const ColumnId> initial = {});

  /// Appends one column. A column whose residual keeps less than
  /// kTolCollinear of its squared norm stays in `active()` but is flagged and
  /// adds no basis direction.
  void append(ColumnId id);

  /// n^{-1}|y'(I-P)x| / (n^{-1} x'(I-P)x)^{1/2}; -inf when x is collinear
  /// with the active set.
  double fsr_score(ColumnId id) const;
  /// n^{-1}|y'(I-P)x| / (n^{-1} x'x)^{1/2}; -inf for collinear candidates.
  double oga_score(ColumnId id) const;

  /// Scores for every design column in one pass (active columns get -inf).
  /// The residual norms are cached and updated on each append.
  void fsr_scores(Eigen::VectorXd& out) const;
  void oga_scores(Eigen::VectorXd& out) const;

  double rss() const { return residual_.squaredNorm(); }
  const Eigen::VectorXd& residual() const { return residual_; }
  const std::vector<ColumnId>& active() const { return active_; }
  const std::vector<bool>& collinear() const { return collinear_; }
  bool is_active(ColumnId id) const { return in_active_[static_cast<std::size_t>(id)]; }
  /// Orthonormal basis, one column per non-collinear active column.
  Eigen::Ref<const Eigen::MatrixXd> basis() const { return basis_.leftCols(rank_); }
  int rank() const { return rank_; }
  const LagDesign& design() const { return *design_; }

  Eigen::VectorXd residualize(const Eigen::Ref<const Eigen::VectorXd>& v) const;

 private:
  void ensure_cache() const;
  double residual_norm2(ColumnId id) const;
  double numerator(ColumnId id) const;

  const LagDesign* design_;
  std::vector<ColumnId> active_;
  std::vector<bool> collinear_;
  std::vector<bool> in_active_;
  Eigen::MatrixXd basis_;
  int rank_ = 0;
  Eigen::VectorXd residual_;

  // Residual squared norms ||(I-P)x_j||^2 for all columns, maintained lazily.
  mutable Eigen::VectorXd cand_norm2_;
  mutable int cache_rank_ = -1;
};

struct OlsResult {
  Eigen::VectorXd coef;
  double rss = 0.0;
  bool rank_deficient = false;
};

/// Least squares of the response on the given columns via a complete
/// orthogonal (pivoted) factorization; rank-deficient sets get the
/// minimum-norm solution and the flag. An empty set returns rss = ||y||^2.
OlsResult ols_solve(const LagDesign& design, std::span<const ColumnId> ids);

/// Same on a raw matrix; an optional intercept column is prepended and its
/// coefficient is coef[0].
OlsResult ols_solve(const Eigen::Ref<const Eigen::MatrixXd>& w, const Eigen::Ref<const Eigen::VectorXd>& y,
                    bool intercept = false);

/// Smallest eigenvalue of n^{-1} sum_t w_t w_t' over the given columns.
double min_eig_diag(const LagDesign& design, std::span<const ColumnId> ids);

}  // namespace fhtd
