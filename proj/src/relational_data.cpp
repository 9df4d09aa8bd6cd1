#include "sgraphon/relational_data.hpp"

#include "sgraphon/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

namespace sgraphon {

void log_warning(std::string_view message) { std::clog << "warning: " << message << '\n'; }

namespace {

BinaryMatrix default_mask(Eigen::Index n, SelfLoops loops) {
  BinaryMatrix mask = BinaryMatrix::Constant(n, n, static_cast<std::uint8_t>(CellRole::train));
  if (loops == SelfLoops::excluded)
    for (Eigen::Index i = 0; i < n; ++i) mask(i, i) = static_cast<std::uint8_t>(CellRole::excluded);
  return mask;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_index(std::string_view token, std::size_t& out) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

RelationalMatrix::RelationalMatrix(Eigen::Index n, SelfLoops loops)
    : entries_(BinaryMatrix::Zero(n, n)), mask_(default_mask(n, loops)), loops_(loops) {}

RelationalMatrix::RelationalMatrix(BinaryMatrix entries, SelfLoops loops)
    : entries_(std::move(entries)), loops_(loops) {
  if (entries_.rows() != entries_.cols()) throw DataError("relation matrix must be square");
  for (Eigen::Index i = 0; i < entries_.size(); ++i)
    if (entries_.data()[i] > 1) throw DataError("relation entries must be 0 or 1");
  mask_ = default_mask(entries_.rows(), loops);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> RelationalMatrix::cells_with_role(CellRole r) const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
  for (Eigen::Index i = 0; i < size(); ++i)
    for (Eigen::Index j = 0; j < size(); ++j)
      if (role(i, j) == r) cells.emplace_back(i, j);
  return cells;
}

std::vector<Edge> read_edges(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto sep = body.find_first_of(" \t");
    if (sep == std::string_view::npos) fail_line(line_no, "expected two node ids");
    const auto src = trim(body.substr(0, sep));
    const auto dst = trim(body.substr(sep + 1));
    Edge e;
    if (!parse_index(src, e.first) || !parse_index(dst, e.second))
      fail_line(line_no, "malformed edge '" + std::string(body) + "'");
    edges.push_back(e);
  }
  return edges;
}

RelationalMatrix load_edge_list(std::istream& in, Eigen::Index n, SelfLoops loops) {
  if (n < 0) throw UsageError("node count must be non-negative");
  RelationalMatrix R(n, loops);
  std::string line;
  std::size_t line_no = 0;
  const auto limit = static_cast<std::size_t>(n);
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto sep = body.find_first_of(" \t");
    if (sep == std::string_view::npos) fail_line(line_no, "expected two node ids");
    std::size_t src = 0, dst = 0;
    if (!parse_index(trim(body.substr(0, sep)), src) || !parse_index(trim(body.substr(sep + 1)), dst))
      fail_line(line_no, "malformed edge '" + std::string(body) + "'");
    if (src >= limit || dst >= limit)
      fail_line(line_no, "node id out of range for n=" + std::to_string(n));
    R.set(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(dst), true);
  }
  return R;
}

void write_edge_list(std::ostream& out, const RelationalMatrix& R) {
  for (Eigen::Index i = 0; i < R.size(); ++i)
    for (Eigen::Index j = 0; j < R.size(); ++j)
      if (R(i, j)) out << i << '\t' << j << '\n';
}

RelationalMatrix load_dense_csv(std::istream& in, SelfLoops loops) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::uint8_t> row;
    for (auto token : split(line, ',')) {
      if (token == "0") row.push_back(0);
      else if (token == "1") row.push_back(1);
      else fail_line(line_no, "expected 0 or 1, got '" + std::string(token) + "'");
    }
    if (!rows.empty() && row.size() != rows.front().size()) fail_line(line_no, "ragged row");
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n > 0 && static_cast<Eigen::Index>(rows.front().size()) != n)
    throw DataError("dense matrix is not square");
  BinaryMatrix entries(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) entries(i, j) = rows[i][j];
  return RelationalMatrix(std::move(entries), loops);
}

namespace {
void write_byte_csv(std::ostream& out, const BinaryMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << static_cast<int>(m(i, j));
    }
    out << '\n';
  }
}
}  // namespace

void write_dense_csv(std::ostream& out, const RelationalMatrix& R) { write_byte_csv(out, R.entries()); }

void write_mask_csv(std::ostream& out, const RelationalMatrix& R) { write_byte_csv(out, R.mask()); }

void read_mask_csv(std::istream& in, RelationalMatrix& R) {
  std::string line;
  std::size_t line_no = 0;
  Eigen::Index i = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tokens = split(line, ',');
    if (i >= R.size() || static_cast<Eigen::Index>(tokens.size()) != R.size())
      fail_line(line_no, "mask dimensions do not match the relation");
    for (Eigen::Index j = 0; j < R.size(); ++j) {
      const auto t = tokens[j];
      if (t != "0" && t != "1" && t != "2") fail_line(line_no, "mask values must be 0, 1 or 2");
      R.set_role(i, j, static_cast<CellRole>(t[0] - '0'));
    }
    ++i;
  }
  if (i != R.size()) throw DataError("mask has " + std::to_string(i) + " rows, expected " +
                                     std::to_string(R.size()));
}

std::vector<std::size_t> top_active_subsample(const std::vector<Edge>& edges, std::size_t pool,
                                              std::size_t sample, Rng& rng, const WarningSink& warn) {
  if (sample > pool) throw UsageError("sample size exceeds pool size");
  std::map<std::size_t, std::size_t> activity;
  for (const auto& [src, dst] : edges) {
    ++activity[src];
    ++activity[dst];
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranked(activity.begin(), activity.end());
  // map iteration is id-ascending, so a stable sort on activity breaks ties by id.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() < pool) {
    warn("only " + std::to_string(ranked.size()) + " distinct nodes available for a pool of " +
         std::to_string(pool) + "; using all of them");
    pool = ranked.size();
  }
  if (sample > pool) sample = pool;
  std::vector<std::size_t> ids(pool);
  for (std::size_t k = 0; k < pool; ++k) ids[k] = ranked[k].first;
  // Partial Fisher-Yates: the first `sample` slots become a uniform draw without replacement.
  for (std::size_t k = 0; k < sample; ++k) std::swap(ids[k], ids[k + rng.uniform_index(pool - k)]);
  ids.resize(sample);
  std::sort(ids.begin(), ids.end());
  return ids;
}

RelationalMatrix induced_relation(const std::vector<Edge>& edges, const std::vector<std::size_t>& nodes,
                                  SelfLoops loops) {
  std::map<std::size_t, Eigen::Index> position;
  for (std::size_t k = 0; k < nodes.size(); ++k) position[nodes[k]] = static_cast<Eigen::Index>(k);
  RelationalMatrix R(static_cast<Eigen::Index>(nodes.size()), loops);
  for (const auto& [src, dst] : edges) {
    const auto a = position.find(src);
    const auto b = position.find(dst);
    if (a != position.end() && b != position.end()) R.set(a->second, b->second, true);
  }
  return R;
}

RelationalMatrix row_wise_split(RelationalMatrix R, double train_ratio, Rng& rng, const WarningSink& warn) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw UsageError("train ratio must lie in (0, 1)");
  const Eigen::Index n = R.size();
  std::vector<Eigen::Index> cells;
  for (Eigen::Index i = 0; i < n; ++i) {
    cells.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (R.role(i, j) != CellRole::excluded) cells.push_back(j);
    if (cells.size() < 2) {
      for (auto j : cells) R.set_role(i, j, CellRole::train);
      if (!cells.empty())
        warn("row " + std::to_string(i) + " has fewer than 2 observable cells; kept entirely in TRAIN");
      continue;
    }
    const auto quota = static_cast<std::size_t>(std::floor(train_ratio * static_cast<double>(cells.size()) + 0.5));
    for (std::size_t k = 0; k < quota; ++k)
      std::swap(cells[k], cells[k + rng.uniform_index(cells.size() - k)]);
    for (std::size_t k = 0; k < cells.size(); ++k)
      R.set_role(i, cells[k], k < quota ? CellRole::train : CellRole::test);
  }
  return R;
}

DatasetSummary summarize(const RelationalMatrix& R) {
  DatasetSummary s;
  for (Eigen::Index i = 0; i < R.size(); ++i)
    for (Eigen::Index j = 0; j < R.size(); ++j) {
      if (R.role(i, j) == CellRole::excluded) continue;
      ++s.observed_cells;
      s.positive_links += R(i, j);
    }
  s.sparsity = s.observed_cells ? static_cast<double>(s.positive_links) / static_cast<double>(s.observed_cells) : 0.0;
  return s;
}

}  // namespace sgraphon
