#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <string_view>

namespace sgraphon {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_real(double value);
/// Inverse of format_real; also accepts "inf", "-inf" and "nan". Throws DataError.
double parse_real(std::string_view text);

/// One CSV row per grid row (first coordinate), values in shortest round-trip form.
void write_grid_csv(std::ostream& out, const Eigen::MatrixXd& grid);
Eigen::MatrixXd read_grid_csv(std::istream& in);

/// Plain-text 8-bit PGM ("P2"); pixel = round(255 * (1 - g)) so darker means higher intensity.
void write_grid_pgm(std::ostream& out, const Eigen::MatrixXd& grid);

}  // namespace sgraphon
