#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fhtd {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws Error("MissingColumn").
  std::size_t column_index(const std::string& name) const;
};

/// RFC-4180: comma separated, double-quoted fields may contain commas,
/// quotes ("") and line breaks; CRLF or LF line ends; header row required.
/// Throws Error("CsvParse") on malformed input or ragged rows.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

struct Transform {
  enum class Kind { log, diff, seasonal_diff };
  Kind kind = Kind::diff;
  int period = 1;
};

/// Parses "none", "diff", "log", "logdiff", "seasonal_diff(s)" and chains of
/// them joined by '+', applied left to right. Throws Error("InvalidTransform").
std::vector<Transform> parse_directive(const std::string& text);

/// Number of leading points a transform chain consumes.
int transform_prefix(const std::vector<Transform>& chain);

/// Applies the chain; `name` and `first_row` (1-based data row of values[0])
/// are used in error messages for nonpositive log arguments.
std::vector<double> apply_transforms(const std::vector<double>& values, const std::vector<Transform>& chain,
                                     const std::string& name = "", int first_row = 1);

struct CsvDatasetSpec {
  std::optional<std::string> date_column;
  std::string y_column;
  std::vector<std::string> exogenous;
  /// Per-column directive; columns not listed are used as is.
  std::map<std::string, std::string> directives;
};

struct LoadedSeries {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;
  std::vector<std::string> exogenous_names;
  std::vector<std::string> dates;
  /// Leading raw rows dropped so that every transformed column is aligned.
  int trimmed = 0;
  int effective_n() const { return static_cast<int>(y.size()); }
};

/// Selects, converts and transforms the columns, then trims the longest
/// transform prefix from all of them. Throws Error("MissingColumn"),
/// Error("NonNumericCell") naming row and column, Error("InvalidTransform"),
/// or Error("LengthMismatchAfterTransform") when nothing is left.
LoadedSeries load_csv(const CsvTable& table, const CsvDatasetSpec& spec);
LoadedSeries load_csv(const std::string& path, const CsvDatasetSpec& spec);

}  // namespace fhtd
