#include "fhtd/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "fhtd/tsdgp.hpp"

namespace fhtd {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Cached residual norms below this share of the raw norm are recomputed
// directly; subtraction loses too many digits there.
constexpr double kRecomputeShare = 1e-6;

}  // namespace

// ---------------------------------------------------------------------------
// LagDesign
// ---------------------------------------------------------------------------

LagDesign LagDesign::from_series(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int q,
                                 std::vector<int> lags_per_series) {
  if (q < 0) throw Error("InvalidDesign", "AR lag count must be nonnegative");
  if (x.rows() != y.size()) throw Error("InvalidDesign", "y and x differ in length");
  if (static_cast<Eigen::Index>(lags_per_series.size()) != x.cols()) {
    throw Error("InvalidDesign", "one lag count per exogenous series is required");
  }
  const int n = static_cast<int>(y.size());
  int r_max = 0;
  int p_star = 0;
  for (int r : lags_per_series) {
    if (r < 0) throw Error("InvalidDesign", "lag counts must be nonnegative");
    r_max = std::max(r_max, r);
    p_star += r;
  }
  const int r_bar = std::max(r_max, q);
  const int rows = n - r_bar;
  if (rows <= 0) throw Error("EmptyDesign", "no rows remain after removing " + std::to_string(r_bar) + " lags");

  LagDesign d;
  d.q_ = q;
  d.n_ = n;
  d.r_bar_ = r_bar;
  d.response_ = y.segment(r_bar, rows);
  d.columns_.resize(rows, q + p_star);
  for (int i = 1; i <= q; ++i) d.columns_.col(i - 1) = y.segment(r_bar - i, rows);
  int col = q;
  for (int j = 0; j < static_cast<int>(lags_per_series.size()); ++j) {
    for (int l = 1; l <= lags_per_series[j]; ++l) {
      d.columns_.col(col++) = x.col(j).segment(r_bar - l, rows);
      d.keys_.push_back({j + 1, l});
    }
  }
  d.finalize();
  return d;
}

LagDesign LagDesign::from_series(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int q, int r) {
  return from_series(y, x, q, std::vector<int>(static_cast<std::size_t>(x.cols()), r));
}

LagDesign LagDesign::from_dataset(const Dataset& data, int q) {
  return from_series(data.y, data.x, q, data.candidate_lags);
}

LagDesign LagDesign::from_columns(Eigen::VectorXd response, Eigen::MatrixXd columns, int ar_columns,
                                  std::optional<int> scale_n) {
  if (columns.rows() != response.size()) throw Error("InvalidDesign", "response and columns differ in length");
  if (response.size() == 0) throw Error("EmptyDesign", "design has no rows");
  if (ar_columns < 0 || ar_columns > columns.cols()) throw Error("InvalidDesign", "bad AR column count");
  LagDesign d;
  d.q_ = ar_columns;
  d.n_ = scale_n.value_or(static_cast<int>(response.size()));
  d.r_bar_ = 0;
  d.response_ = std::move(response);
  d.columns_ = std::move(columns);
  for (int j = 1; j <= d.columns_.cols() - ar_columns; ++j) d.keys_.push_back({j, 1});
  d.finalize();
  return d;
}

void LagDesign::finalize() { column_norm2_ = columns_.colwise().squaredNorm().transpose(); }

ColumnId LagDesign::exo_column(ExoKey key) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) {
    throw Error("UnknownColumn", "no candidate (" + std::to_string(key.series) + ", " +
                                     std::to_string(key.lag) + ")");
  }
  return q_ + static_cast<ColumnId>(it - keys_.begin());
}

std::vector<ColumnId> LagDesign::ar_columns() const {
  std::vector<ColumnId> ids(static_cast<std::size_t>(q_));
  for (int i = 0; i < q_; ++i) ids[i] = i;
  return ids;
}

std::vector<ColumnId> LagDesign::exogenous_columns() const {
  std::vector<ColumnId> ids;
  ids.reserve(static_cast<std::size_t>(num_exogenous()));
  for (int id = q_; id < num_columns(); ++id) ids.push_back(id);
  return ids;
}

LagDesign LagDesign::demeaned() const {
  LagDesign d = *this;
  d.response_.array() -= d.response_.mean();
  const Eigen::RowVectorXd means = d.columns_.colwise().mean();
  d.columns_.rowwise() -= means;
  d.finalize();
  return d;
}

LagDesign LagDesign::with_scaled_column(ColumnId id, double factor) const {
  LagDesign d = *this;
  d.columns_.col(id) *= factor;
  d.finalize();
  return d;
}

// ---------------------------------------------------------------------------
// ActiveFit
// ---------------------------------------------------------------------------

ActiveFit::ActiveFit(const LagDesign& design, std::span<const ColumnId> initial)
    : design_(&design),
      in_active_(static_cast<std::size_t>(design.num_columns()), false),
      basis_(design.rows(), std::max<Eigen::Index>(8, static_cast<Eigen::Index>(initial.size()) + 8)),
      residual_(design.response()) {
  if (design.rows() == 0) throw Error("EmptyDesign", "design has no rows");
  for (ColumnId id : initial) append(id);
}

Eigen::VectorXd ActiveFit::residualize(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  Eigen::VectorXd out = v;
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 0; k < rank_; ++k) out -= basis_.col(k).dot(out) * basis_.col(k);
  }
  return out;
}

void ActiveFit::append(ColumnId id) {
  if (id < 0 || id >= design_->num_columns()) throw Error("UnknownColumn", "column id out of range");
  if (is_active(id)) throw Error("AlreadyActive", "column " + std::to_string(id) + " is already active");
  active_.push_back(id);
  in_active_[static_cast<std::size_t>(id)] = true;

  const double raw = design_->column_norm2(id);
  Eigen::VectorXd v = residualize(design_->column(id));
  const double surv = v.squaredNorm();
  if (raw == 0.0 || surv < kTolCollinear * raw) {
    collinear_.push_back(true);
    return;
  }
  collinear_.push_back(false);
  v /= std::sqrt(surv);
  if (rank_ == basis_.cols()) basis_.conservativeResize(Eigen::NoChange, 2 * basis_.cols());
  basis_.col(rank_) = v;
  ++rank_;
  residual_ -= v.dot(residual_) * v;
}

double ActiveFit::residual_norm2(ColumnId id) const { return residualize(design_->column(id)).squaredNorm(); }

double ActiveFit::numerator(ColumnId id) const { return residual_.dot(design_->column(id)); }

double ActiveFit::fsr_score(ColumnId id) const {
  const double raw = design_->column_norm2(id);
  const double res = residual_norm2(id);
  if (raw == 0.0 || res < kTolCollinear * raw) return kNegInf;
  const double n = design_->n();
  return (std::abs(numerator(id)) / n) / std::sqrt(res / n);
}

double ActiveFit::oga_score(ColumnId id) const {
  const double raw = design_->column_norm2(id);
  const double res = residual_norm2(id);
  if (raw == 0.0 || res < kTolCollinear * raw) return kNegInf;
  const double n = design_->n();
  return (std::abs(numerator(id)) / n) / std::sqrt(raw / n);
}

void ActiveFit::ensure_cache() const {
  const auto& x = design_->columns();
  if (cache_rank_ < 0) {
    cand_norm2_ = design_->column_norms2();
    cache_rank_ = 0;
  }
  if (cache_rank_ < rank_) {
    const Eigen::MatrixXd proj = x.transpose() * basis_.middleCols(cache_rank_, rank_ - cache_rank_);
    cand_norm2_ -= proj.rowwise().squaredNorm();
    cache_rank_ = rank_;
  }
}

namespace {

template <typename DenomFn>
void bulk_scores(const LagDesign& design, const Eigen::VectorXd& residual, const Eigen::VectorXd& cached,
                 const std::vector<bool>& in_active, Eigen::VectorXd& out, DenomFn&& exact_norm2,
                 bool residual_denominator) {
  const int cols = design.num_columns();
  const double n = design.n();
  const Eigen::VectorXd num = design.columns().transpose() * residual;
  out.resize(cols);
  for (int j = 0; j < cols; ++j) {
    if (in_active[static_cast<std::size_t>(j)]) {
      out[j] = kNegInf;
      continue;
    }
    const double raw = design.column_norm2(j);
    double res = cached[j];
    if (raw == 0.0) {
      out[j] = kNegInf;
      continue;
    }
    if (res < kRecomputeShare * raw) res = exact_norm2(j);
    if (res < kTolCollinear * raw) {
      out[j] = kNegInf;
      continue;
    }
    const double denom = residual_denominator ? res : raw;
    out[j] = (std::abs(num[j]) / n) / std::sqrt(denom / n);
  }
}

}  // namespace

void ActiveFit::fsr_scores(Eigen::VectorXd& out) const {
  ensure_cache();
  bulk_scores(*design_, residual_, cand_norm2_, in_active_, out,
              [this](ColumnId j) { return residual_norm2(j); }, true);
}

void ActiveFit::oga_scores(Eigen::VectorXd& out) const {
  ensure_cache();
  bulk_scores(*design_, residual_, cand_norm2_, in_active_, out,
              [this](ColumnId j) { return residual_norm2(j); }, false);
}

// ---------------------------------------------------------------------------
// Dense solves
// ---------------------------------------------------------------------------

OlsResult ols_solve(const Eigen::Ref<const Eigen::MatrixXd>& w, const Eigen::Ref<const Eigen::VectorXd>& y,
                    bool intercept) {
  OlsResult out;
  const Eigen::Index cols = w.cols() + (intercept ? 1 : 0);
  if (cols == 0) {
    out.rss = y.squaredNorm();
    return out;
  }
  Eigen::MatrixXd a(w.rows(), cols);
  if (intercept) {
    a.col(0).setOnes();
    a.rightCols(w.cols()) = w;
  } else {
    a = w;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  out.coef = cod.solve(y);
  out.rank_deficient = cod.rank() < cols;
  out.rss = (y - a * out.coef).squaredNorm();
  return out;
}

OlsResult ols_solve(const LagDesign& design, std::span<const ColumnId> ids) {
  Eigen::MatrixXd w(design.rows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = design.column(ids[k]);
  return ols_solve(w, design.response());
}

double min_eig_diag(const LagDesign& design, std::span<const ColumnId> ids) {
  if (ids.empty()) throw Error("InvalidDesign", "min_eig_diag needs at least one column");
  if (static_cast<int>(ids.size()) > design.rows()) {
    throw Error("InvalidDesign", "more columns than rows in min_eig_diag");
  }
  Eigen::MatrixXd w(design.rows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) w.col(static_cast<Eigen::Index>(k)) = design.column(ids[k]);
  const Eigen::MatrixXd gram = (w.transpose() * w) / static_cast<double>(design.n());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

}  // namespace fhtd
