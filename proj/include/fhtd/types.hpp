#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fhtd {

/// Exogenous candidate x_{t-lag, series}; both fields are 1-based.
struct ExoKey {
  int series = 0;
  int lag = 0;

  auto operator<=>(const ExoKey&) const = default;
};

/// Index of a column inside a LagDesign.
using ColumnId = int;

/// Base class for all library errors. `code()` is a stable identifier
/// (e.g. "NonFinite", "RankDeficient") that the CLI and tests key on.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace fhtd
