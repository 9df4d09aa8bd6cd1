#include "sgraphon/errors.hpp"
#include "sgraphon/grid_io.hpp"
#include "sgraphon/models.hpp"

#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace sgraphon {

namespace {

template <typename Derived>
void write_values(std::ostream& out, std::string_view key, const Eigen::DenseBase<Derived>& values) {
  out << key << " =";
  // Row-major order regardless of storage.
  for (Eigen::Index a = 0; a < values.rows(); ++a)
    for (Eigen::Index b = 0; b < values.cols(); ++b) out << ' ' << format_real(static_cast<double>(values(a, b)));
  out << '\n';
}

using Sections = std::map<std::string, std::vector<std::string>, std::less<>>;

Sections read_sections(std::istream& in) {
  Sections sections;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError("state line " + std::to_string(line_no) + ": missing '='");
    std::istringstream key_stream(line.substr(0, eq));
    std::string key;
    key_stream >> key;
    std::istringstream values(line.substr(eq + 1));
    std::vector<std::string> tokens;
    for (std::string t; values >> t;) tokens.push_back(t);
    sections[key] = std::move(tokens);
  }
  return sections;
}

const std::vector<std::string>& section(const Sections& s, std::string_view key) {
  const auto it = s.find(key);
  if (it == s.end()) throw DataError("state snapshot lacks '" + std::string(key) + "'");
  return it->second;
}

Eigen::VectorXd real_vector(const Sections& s, std::string_view key, Eigen::Index expected) {
  const auto& tokens = section(s, key);
  if (static_cast<Eigen::Index>(tokens.size()) != expected)
    throw DataError("state section '" + std::string(key) + "' has " + std::to_string(tokens.size()) +
                    " values, expected " + std::to_string(expected));
  Eigen::VectorXd v(expected);
  for (Eigen::Index k = 0; k < expected; ++k) v(k) = parse_real(tokens[k]);
  return v;
}

Eigen::MatrixXd real_matrix(const Sections& s, std::string_view key, Eigen::Index rows, Eigen::Index cols) {
  const Eigen::VectorXd flat = real_vector(s, key, rows * cols);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a)
    for (Eigen::Index b = 0; b < cols; ++b) m(a, b) = flat(a * cols + b);
  return m;
}

Eigen::Index count_value(const Sections& s, std::string_view key) {
  const auto& tokens = section(s, key);
  if (tokens.size() != 1) throw DataError("state section '" + std::string(key) + "' must hold one value");
  const double v = parse_real(tokens.front());
  if (v < 0 || v != static_cast<double>(static_cast<Eigen::Index>(v)))
    throw DataError("state section '" + std::string(key) + "' must be a count");
  return static_cast<Eigen::Index>(v);
}

}  // namespace

void write_state(std::ostream& out, const LatentState& state) {
  out << "kind = " << to_string(state.kind) << '\n';
  out << "n = " << state.size() << '\n';
  out << "K = " << state.groups() << '\n';
  write_values(out, "theta1", state.partition.dim1().theta().transpose());
  write_values(out, "theta2", state.partition.dim2().theta().transpose());
  write_values(out, "B", state.B.matrix());
  write_values(out, "u1", state.u1.transpose());
  write_values(out, "u2", state.u2.transpose());
  out << "lambda = " << format_real(state.lambda.value()) << '\n';
  if (state.z1 && state.z2) {
    write_values(out, "z1", state.z1->transpose());
    write_values(out, "z2", state.z2->transpose());
  }
}

void write_state(std::ostream& out, const MmsbState& state) {
  out << "kind = mmsb\n";
  out << "n = " << state.size() << '\n';
  out << "K = " << state.groups() << '\n';
  write_values(out, "B", state.B.matrix());
  write_values(out, "F", state.F);
}

std::variant<LatentState, MmsbState> read_state(std::istream& in) {
  const Sections s = read_sections(in);
  const auto& kind_tokens = section(s, "kind");
  if (kind_tokens.size() != 1) throw DataError("state 'kind' must hold one value");
  ModelKind kind;
  try {
    kind = parse_model_kind(kind_tokens.front());
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  const Eigen::Index n = count_value(s, "n");
  const Eigen::Index K = count_value(s, "K");
  if (K < 1) throw DataError("state K must be at least 1");
  try {
    BlockIntensities<double> B(real_matrix(s, "B", K, K));
    if (kind == ModelKind::mmsb) {
      MmsbState state{real_matrix(s, "F", n, K), std::move(B), std::nullopt, std::nullopt};
      state.validate();
      return state;
    }
    Partition<double> partition(SegmentDistribution<double>(real_vector(s, "theta1", K)),
                                SegmentDistribution<double>(real_vector(s, "theta2", K)));
    const double lambda = parse_real(section(s, "lambda").at(0));
    LatentState state{kind, std::move(partition), std::move(B), real_vector(s, "u1", n),
                      real_vector(s, "u2", n), SmoothingParameter<double>(lambda),
                      std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    if (kind == ModelKind::sbm && s.count("z1") && s.count("z2")) {
      state.z1 = real_vector(s, "z1", n).cast<Label>();
      state.z2 = real_vector(s, "z2", n).cast<Label>();
    }
    state.validate();
    return state;
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid state snapshot: ") + e.what());
  }
}

}  // namespace sgraphon
