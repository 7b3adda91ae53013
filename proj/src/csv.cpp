#include "fhtd/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fhtd/types.hpp"

namespace fhtd {
namespace {

std::string trim_ws(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& cell, bool& ok) {
  const std::string t = trim_ws(cell);
  ok = false;
  if (t.empty()) return 0.0;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  ok = end == t.c_str() + t.size() && errno != ERANGE && std::isfinite(v);
  return v;
}

}  // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error("MissingColumn", "column '" + name + "' not found in CSV header");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool after_quote = false;
  int line = 1;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_started = false;
    after_quote = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(record);
    record.clear();
    ++line;
  };

  char ch;
  while (in.get(ch)) {
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    if (ch == ',') {
      end_field();
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get(ch);
      end_record();
    } else if (ch == '\n') {
      end_record();
    } else if (ch == '"') {
      if (field_started) throw Error("CsvParse", "stray quote on line " + std::to_string(line));
      in_quotes = true;
      field_started = true;
    } else {
      if (after_quote) throw Error("CsvParse", "text after closing quote on line " + std::to_string(line));
      field += ch;
      field_started = true;
    }
  }
  if (in_quotes) throw Error("CsvParse", "unterminated quoted field");
  if (field_started || !record.empty()) end_record();

  if (records.empty()) throw Error("CsvParse", "CSV has no header row");
  CsvTable table;
  table.header = records.front();
  if (!table.header.empty() && table.header[0].rfind("\xEF\xBB\xBF", 0) == 0) table.header[0].erase(0, 3);
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size()) {
      throw Error("CsvParse", "record " + std::to_string(i + 1) + " has " + std::to_string(records[i].size()) +
                                  " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open '" + path + "'");
  return parse_csv(in);
}

std::vector<Transform> parse_directive(const std::string& text) {
  std::vector<Transform> chain;
  std::stringstream ss(text);
  std::string part;
  bool any = false;
  while (std::getline(ss, part, '+')) {
    any = true;
    const std::string t = trim_ws(part);
    if (t == "none" || t.empty()) {
      if (t.empty() || text.find('+') != std::string::npos) {
        throw Error("InvalidTransform", "bad transform directive '" + text + "'");
      }
    } else if (t == "diff") {
      chain.push_back({Transform::Kind::diff, 1});
    } else if (t == "log") {
      chain.push_back({Transform::Kind::log, 0});
    } else if (t == "logdiff") {
      chain.push_back({Transform::Kind::log, 0});
      chain.push_back({Transform::Kind::diff, 1});
    } else if (t.rfind("seasonal_diff(", 0) == 0 && t.back() == ')') {
      const std::string inner = t.substr(14, t.size() - 15);
      bool ok = false;
      const double s = to_number(inner, ok);
      if (!ok || s < 1 || s != std::floor(s)) throw Error("InvalidTransform", "bad seasonal period in '" + t + "'");
      chain.push_back({Transform::Kind::seasonal_diff, static_cast<int>(s)});
    } else {
      throw Error("InvalidTransform", "unknown transform '" + t + "'");
    }
  }
  if (!any) throw Error("InvalidTransform", "empty transform directive");
  return chain;
}

int transform_prefix(const std::vector<Transform>& chain) {
  int total = 0;
  for (const auto& t : chain) {
    if (t.kind == Transform::Kind::diff) total += 1;
    if (t.kind == Transform::Kind::seasonal_diff) total += t.period;
  }
  return total;
}

std::vector<double> apply_transforms(const std::vector<double>& values, const std::vector<Transform>& chain,
                                     const std::string& name, int first_row) {
  std::vector<double> v = values;
  int offset = 0;
  for (const auto& t : chain) {
    if (t.kind == Transform::Kind::log) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) {
          throw Error("InvalidTransform", "log of nonpositive value " + std::to_string(v[i]) + " in column '" + name +
                                              "', row " + std::to_string(first_row + offset + static_cast<int>(i)));
        }
        v[i] = std::log(v[i]);
      }
      continue;
    }
    const std::size_t lag = static_cast<std::size_t>(t.kind == Transform::Kind::diff ? 1 : t.period);
    if (v.size() <= lag) {
      throw Error("LengthMismatchAfterTransform", "column '" + name + "' is too short for its transforms");
    }
    std::vector<double> out(v.size() - lag);
    for (std::size_t i = lag; i < v.size(); ++i) out[i - lag] = v[i] - v[i - lag];
    v = std::move(out);
    offset += static_cast<int>(lag);
  }
  return v;
}

LoadedSeries load_csv(const CsvTable& table, const CsvDatasetSpec& spec) {
  std::vector<std::string> names{spec.y_column};
  names.insert(names.end(), spec.exogenous.begin(), spec.exogenous.end());
  for (const auto& [col, _] : spec.directives) {
    if (std::find(names.begin(), names.end(), col) == names.end()) {
      throw Error("MissingColumn", "transform given for unused column '" + col + "'");
    }
  }

  std::vector<std::vector<double>> series;
  int prefix = 0;
  for (const auto& name : names) {
    const std::size_t idx = table.column_index(name);
    std::vector<double> raw;
    raw.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      bool ok = false;
      const double v = to_number(table.rows[r][idx], ok);
      if (!ok) {
        throw Error("NonNumericCell", "row " + std::to_string(r + 1) + ", column '" + name + "': '" +
                                          table.rows[r][idx] + "' is not a finite number");
      }
      raw.push_back(v);
    }
    const auto it = spec.directives.find(name);
    const std::vector<Transform> chain = it == spec.directives.end() ? std::vector<Transform>{}
                                                                     : parse_directive(it->second);
    prefix = std::max(prefix, transform_prefix(chain));
    series.push_back(apply_transforms(raw, chain, name, 1));
  }

  const int rows = static_cast<int>(table.rows.size());
  const int len = rows - prefix;
  if (len < 1) throw Error("LengthMismatchAfterTransform", "no rows remain after applying the transforms");

  LoadedSeries out;
  out.trimmed = prefix;
  out.exogenous_names = spec.exogenous;
  out.y.resize(len);
  out.x.resize(len, static_cast<Eigen::Index>(spec.exogenous.size()));
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const int skip = static_cast<int>(s.size()) - len;
    if (skip < 0) throw Error("LengthMismatchAfterTransform", "column '" + names[k] + "' is shorter than the rest");
    for (int t = 0; t < len; ++t) {
      const double v = s[static_cast<std::size_t>(skip + t)];
      if (k == 0) {
        out.y[t] = v;
      } else {
        out.x(t, static_cast<Eigen::Index>(k - 1)) = v;
      }
    }
  }
  if (spec.date_column) {
    const std::size_t idx = table.column_index(*spec.date_column);
    for (int t = prefix; t < rows; ++t) out.dates.push_back(table.rows[static_cast<std::size_t>(t)][idx]);
  }
  return out;
}

LoadedSeries load_csv(const std::string& path, const CsvDatasetSpec& spec) {
  return load_csv(read_csv_file(path), spec);
}

}  // namespace fhtd
