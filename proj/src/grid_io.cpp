#include "sgraphon/grid_io.hpp"

#include "sgraphon/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace sgraphon {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_real(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw DataError("not a number: '" + std::string(text) + "'");
  return value;
}

void write_grid_csv(std::ostream& out, const Eigen::MatrixXd& grid) {
  for (Eigen::Index a = 0; a < grid.rows(); ++a) {
    for (Eigen::Index b = 0; b < grid.cols(); ++b) {
      if (b) out << ',';
      out << format_real(grid(a, b));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_grid_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      row.push_back(parse_real(std::string_view(line).substr(start, pos == std::string::npos ? pos : pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw DataError("ragged grid CSV");
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd grid(static_cast<Eigen::Index>(rows.size()),
                       rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index a = 0; a < grid.rows(); ++a)
    for (Eigen::Index b = 0; b < grid.cols(); ++b) grid(a, b) = rows[a][b];
  return grid;
}

void write_grid_pgm(std::ostream& out, const Eigen::MatrixXd& grid) {
  out << "P2\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
  for (Eigen::Index a = 0; a < grid.rows(); ++a) {
    for (Eigen::Index b = 0; b < grid.cols(); ++b) {
      if (b) out << ' ';
      const double g = std::clamp(grid(a, b), 0.0, 1.0);
      out << static_cast<int>(std::lround(255.0 * (1.0 - g)));
    }
    out << '\n';
  }
}

}  // namespace sgraphon
