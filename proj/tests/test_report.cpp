#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "lis/report.hpp"

using namespace lis;

TEST_CASE("CSV formatting") {
  Table t;
  t.header = {"name", "value", "count"};
  t.add({std::string("a"), 0.1, std::int64_t{3}});
  t.add({std::string("b"), 1.0 / 3.0, std::int64_t{-1}});
  t.add({std::string("c"), std::numeric_limits<double>::infinity(), std::int64_t{0}});
  CHECK(t.to_csv() ==
        "name,value,count\n"
        "a,0.1,3\n"
        "b,0.333333333333,-1\n"
        "c,inf,0\n");
  CHECK_THROWS(t.add({std::string("short")}));
  CHECK(format_cell(std::nan("")) == "nan");
  CHECK(format_cell(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_cell(1234567.0) == "1234567");
}

TEST_CASE("SVG chart") {
  Plot p{"t", "x", "y", true, {{"s1", {1, 10, 100}, {1, 2, 3}}, {"s2", {1, 100}, {0.5, 0.7}}}};
  const auto svg = render_svg(p);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("s2") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("write_text_file creates directories") {
  const auto dir = std::filesystem::temp_directory_path() / "lis_report_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text_file((dir / "x.csv").string(), "a\n");
  std::ifstream in(dir / "x.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "a");
  std::filesystem::remove_all(dir.parent_path());
}
