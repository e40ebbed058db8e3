#pragma once

// CSV tables (comma-separated, header row, 12 significant digits) and
// minimal SVG line charts.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace lis {

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  std::string to_csv() const;
};

/// "%.12g"; "inf", "-inf" and "nan" spelled out.
std::string format_cell(const Cell& c);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<Series> series;
};

std::string render_svg(const Plot& plot);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lis
