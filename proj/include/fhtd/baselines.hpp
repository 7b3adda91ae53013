#pragma once

#include <array>
#include <string>

#include "fhtd/lasso.hpp"
#include "fhtd/projection.hpp"
#include "fhtd/selection.hpp"

namespace fhtd {

/// OGA path. With `force_ar` the q AR lags form the base model and only the
/// exogenous columns compete; otherwise every design column competes from an
/// empty base. HDIC along the path uses the FhtdConfig penalty.
SelectionPath oga_path(const LagDesign& design, const FhtdConfig& config, bool force_ar);

/// OGA + HDIC + Trim. Trim runs over everything on the stopped path including
/// the forced AR lags, so AR-OGA-3 can drop AR lags too. No thresholding.
SelectedModel oga3_from_path(const LagDesign& design, const SelectionPath& path, const FhtdConfig& config);
SelectedModel oga3_select(const LagDesign& design, const FhtdConfig& config, bool force_ar);

enum class LassoVariant { lasso, alasso, ar_alasso };

/// LASSO family selection on all design columns (AR lags first). Q_hat/J_hat
/// are the nonzero entries of the BIC-chosen coefficients and final_coef holds
/// those penalized estimates; an intercept is fitted iff config.intercept.
SelectedModel lasso_select(const LagDesign& design, const LassoConfig& config, LassoVariant variant);

/// Default LASSO settings for the selectors: standardized, 100-point grid.
LassoConfig default_lasso_config();

/// The six selectors in table order.
enum class Method { lasso, alasso, oga3, ar_alasso, ar_oga3, fhtd };
inline constexpr std::array<Method, 6> kAllMethods{Method::lasso,     Method::alasso,  Method::oga3,
                                                   Method::ar_alasso, Method::ar_oga3, Method::fhtd};

/// "LASSO", "ALasso", "OGA-3", "AR-ALasso", "AR-OGA-3", "FHTD".
std::string method_name(Method method);
/// Accepts the display names case-insensitively; throws Error("UnknownMethod").
Method parse_method(const std::string& name);

/// Runs one selector. With `intercept` the LASSO family fits an intercept and
/// the greedy selectors work on the demeaned design before an OLS refit with
/// an intercept on the raw one.
SelectedModel select_model(Method method, const LagDesign& design, const FhtdConfig& config,
                           const LassoConfig& lasso, bool intercept = false);

}  // namespace fhtd
