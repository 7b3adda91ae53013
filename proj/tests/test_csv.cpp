#include <doctest.h>

#include <sstream>

#include "fhtd/csv.hpp"
#include "fhtd/types.hpp"

using namespace fhtd;

namespace {

CsvTable table_from(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("RFC-4180 parsing") {
  const auto t = table_from("\xEF\xBB\xBF" "a,\"b, c\",d\r\n1,\"say \"\"hi\"\"\",\"x\ny\"\r\n2,,3\n");
  REQUIRE(t.header.size() == 3);
  CHECK(t.header[0] == "a");
  CHECK(t.header[1] == "b, c");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "say \"hi\"");
  CHECK(t.rows[0][2] == "x\ny");
  CHECK(t.rows[1][1] == "");
  CHECK(t.column_index("d") == 2);
  CHECK(code_of([&] { t.column_index("zz"); }) == "MissingColumn");
  CHECK(code_of([] { table_from("a,b\n1\n"); }) == "CsvParse");
  CHECK(code_of([] { table_from("a,b\n\"1,2\n"); }) == "CsvParse");
}

TEST_CASE("transform directives") {
  CHECK(parse_directive("none").empty());
  const auto chain = parse_directive("log+seasonal_diff(12)+diff");
  REQUIRE(chain.size() == 3);
  CHECK(chain[1].kind == Transform::Kind::seasonal_diff);
  CHECK(chain[1].period == 12);
  CHECK(transform_prefix(chain) == 13);
  CHECK(transform_prefix(parse_directive("logdiff")) == 1);
  CHECK(code_of([] { parse_directive("cube"); }) == "InvalidTransform");
  CHECK(code_of([] { parse_directive("seasonal_diff(0)"); }) == "InvalidTransform");

  const auto d = apply_transforms({1, 2, 4}, parse_directive("diff"));
  REQUIRE(d.size() == 2);
  CHECK(d[0] == 1);
  CHECK(d[1] == 2);
  const auto l = apply_transforms({1, std::exp(1.0)}, parse_directive("logdiff"));
  CHECK(l[0] == doctest::Approx(1.0));
  CHECK(code_of([] { apply_transforms({1, 0, 2}, parse_directive("log"), "v"); }) == "InvalidTransform");
  std::vector<double> long_series(400, 1.0);
  CHECK(apply_transforms(long_series, parse_directive("seasonal_diff(12)+diff")).size() == 387);
}

TEST_CASE("loading a dataset aligns transformed columns") {
  std::string text = "date,y,x1,x2\n";
  for (int i = 1; i <= 10; ++i) {
    text += "d" + std::to_string(i) + "," + std::to_string(i * i) + "," + std::to_string(i) + "," +
            std::to_string(2 * i) + "\n";
  }
  CsvDatasetSpec spec;
  spec.date_column = "date";
  spec.y_column = "y";
  spec.exogenous = {"x1", "x2"};
  spec.directives = {{"y", "diff"}, {"x2", "seasonal_diff(3)"}};
  const auto s = load_csv(table_from(text), spec);
  CHECK(s.trimmed == 3);
  CHECK(s.effective_n() == 7);
  CHECK(s.y[0] == 16 - 9);
  CHECK(s.x(0, 0) == 4);
  CHECK(s.x(0, 1) == 6);
  CHECK(s.dates.front() == "d4");
  CHECK(s.exogenous_names == std::vector<std::string>{"x1", "x2"});

  spec.exogenous = {"x3"};
  spec.directives.clear();
  CHECK(code_of([&] { load_csv(table_from(text), spec); }) == "MissingColumn");
  spec.exogenous = {"x1"};
  CHECK(code_of([] {
          CsvDatasetSpec s2;
          s2.y_column = "y";
          load_csv(table_from("y\n1\nabc\n"), s2);
        }) == "NonNumericCell");
  CHECK(code_of([] { read_csv_file("/nonexistent/file.csv"); }) == "IoError");
}
