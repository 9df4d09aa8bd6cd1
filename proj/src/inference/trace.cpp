#include "sgraphon/errors.hpp"
#include "sgraphon/grid_io.hpp"
#include "sgraphon/inference.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace sgraphon {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_vector_or_nan(std::ostream& out, const Eigen::VectorXd& v, Eigen::Index K) {
  for (Eigen::Index k = 0; k < K; ++k)
    out << ',' << format_real(v.size() == K ? v(k) : std::numeric_limits<double>::quiet_NaN());
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const Eigen::Index K = trace.K;
  out << "sweep,lambda";
  for (Eigen::Index k = 0; k < K; ++k) out << ",theta1_" << k;
  for (Eigen::Index k = 0; k < K; ++k) out << ",theta2_" << k;
  for (Eigen::Index a = 0; a < K; ++a)
    for (Eigen::Index b = 0; b < K; ++b) out << ",B_" << a << '_' << b;
  out << ",train_loglik\n";
  for (const auto& s : trace.samples) {
    out << s.sweep << ',' << format_real(s.lambda);
    write_vector_or_nan(out, s.theta1, K);
    write_vector_or_nan(out, s.theta2, K);
    for (Eigen::Index a = 0; a < K; ++a)
      for (Eigen::Index b = 0; b < K; ++b) out << ',' << format_real(s.B(a, b));
    out << ',' << format_real(s.train_log_likelihood) << '\n';
  }
}

Trace read_trace_csv(std::istream& in, ModelKind kind) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("trace file is empty");
  const auto header = split_csv(line);
  // sweep, lambda, 2K thetas, K^2 blocks, loglik  =>  K^2 + 2K + 3 columns.
  const auto cols = static_cast<Eigen::Index>(header.size());
  Eigen::Index K = 0;
  while ((K + 1) * (K + 1) + 2 * (K + 1) + 3 <= cols) ++K;
  if (K < 1 || K * K + 2 * K + 3 != cols || header.front() != "sweep" || header.back() != "train_loglik")
    throw DataError("trace header is not a recognised trace layout");

  Trace trace;
  trace.kind = kind;
  trace.K = K;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (static_cast<Eigen::Index>(fields.size()) != cols)
      throw DataError("trace line " + std::to_string(line_no) + ": expected " + std::to_string(cols) + " fields");
    TraceSample s;
    try {
      const double sweep = parse_real(fields[0]);
      if (!(sweep >= 0) || sweep != std::floor(sweep)) throw DataError("sweep index must be a count");
      s.sweep = static_cast<std::size_t>(sweep);
      s.lambda = parse_real(fields[1]);
      Eigen::Index c = 2;
      s.theta1.resize(K);
      s.theta2.resize(K);
      for (Eigen::Index k = 0; k < K; ++k) s.theta1(k) = parse_real(fields[c++]);
      for (Eigen::Index k = 0; k < K; ++k) s.theta2(k) = parse_real(fields[c++]);
      s.B.resize(K, K);
      for (Eigen::Index a = 0; a < K; ++a)
        for (Eigen::Index b = 0; b < K; ++b) s.B(a, b) = parse_real(fields[c++]);
      s.train_log_likelihood = parse_real(fields[c]);
    } catch (const DataError& e) {
      throw DataError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
    if (kind == ModelKind::mmsb) {
      s.theta1.resize(0);
      s.theta2.resize(0);
    }
    trace.samples.push_back(std::move(s));
  }
  return trace;
}

void write_acceptance(std::ostream& out, const Trace& trace) {
  for (const auto& [family, rate] : trace.acceptance)
    out << family << " = " << format_real(rate.rate()) << '\n';
}

}  // namespace sgraphon
