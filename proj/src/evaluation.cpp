#include "sgraphon/evaluation.hpp"

#include "sgraphon/errors.hpp"
#include "sgraphon/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace sgraphon {

namespace {

/// Indices sorted by score, descending; the order within ties is irrelevant to
/// every metric below because ties are always handled as whole blocks.
std::vector<std::size_t> descending_order(const ScoredCells& sc) {
  std::vector<std::size_t> order(sc.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sc.scores(static_cast<Eigen::Index>(a)) > sc.scores(static_cast<Eigen::Index>(b));
  });
  return order;
}

/// Calls visit(start, size, positives_in_block) for each block of equal scores in descending order.
template <typename Visit>
void for_each_tie_block(const ScoredCells& sc, const std::vector<std::size_t>& order, Visit&& visit) {
  std::size_t a = 0;
  while (a < order.size()) {
    const double v = sc.scores(static_cast<Eigen::Index>(order[a]));
    std::size_t b = a;
    std::size_t pos = 0;
    while (b < order.size() && sc.scores(static_cast<Eigen::Index>(order[b])) == v) pos += sc.truths[order[b++]];
    visit(a, b - a, pos);
    a = b;
  }
}

}  // namespace

std::size_t ScoredCells::positives() const {
  return static_cast<std::size_t>(std::count(truths.begin(), truths.end(), std::uint8_t{1}));
}

void ScoredCells::validate() const {
  if (static_cast<std::size_t>(scores.size()) != truths.size())
    throw DataError("scores and truths differ in length (" + std::to_string(scores.size()) + " vs " +
                    std::to_string(truths.size()) + ")");
  for (auto t : truths)
    if (t > 1) throw DataError("truths must be 0 or 1");
  for (Eigen::Index i = 0; i < scores.size(); ++i)
    if (std::isnan(scores(i))) throw DataError("score " + std::to_string(i) + " is NaN");
}

ScoredCells score_cells(const RelationalMatrix& R, const CellList& cells, const Eigen::VectorXd& scores) {
  if (static_cast<std::size_t>(scores.size()) != cells.size())
    throw DataError("one score per cell is required");
  ScoredCells sc{scores, {}};
  sc.truths.reserve(cells.size());
  for (const auto& [i, j] : cells) sc.truths.push_back(R(i, j));
  return sc;
}

double auc_roc(const ScoredCells& sc) {
  sc.validate();
  const std::size_t P = sc.positives();
  const std::size_t N = sc.size() - P;
  if (P == 0) throw DataError("AUC needs at least one positive cell; none present");
  if (N == 0) throw DataError("AUC needs at least one negative cell; none present");

  // Mann-Whitney U from midranks (rank 1 = lowest score). Ranks are half-integers,
  // so every sum below is exact and U equals the pair count of the direct form.
  std::vector<std::size_t> order = descending_order(sc);
  std::reverse(order.begin(), order.end());
  double rank_sum = 0.0;
  std::size_t a = 0;
  while (a < order.size()) {
    const double v = sc.scores(static_cast<Eigen::Index>(order[a]));
    std::size_t b = a;
    std::size_t pos = 0;
    while (b < order.size() && sc.scores(static_cast<Eigen::Index>(order[b])) == v) pos += sc.truths[order[b++]];
    const double midrank = (static_cast<double>(a + 1) + static_cast<double>(b)) / 2.0;
    rank_sum += midrank * static_cast<double>(pos);
    a = b;
  }
  const double Pd = static_cast<double>(P);
  const double u = rank_sum - Pd * (Pd + 1.0) / 2.0;
  return u / (Pd * static_cast<double>(N));
}

double average_precision(const ScoredCells& sc) {
  sc.validate();
  const std::size_t P = sc.positives();
  if (P == 0) throw DataError("average precision needs at least one positive cell; none present");
  const auto order = descending_order(sc);
  double total = 0.0;
  std::size_t positives_before = 0;
  for_each_tie_block(sc, order, [&](std::size_t start, std::size_t t, std::size_t p) {
    if (p > 0) {
      // Position r of the block is positive with probability p/t; given that, the
      // expected number of positives ahead of it inside the block is (r-1)(p-1)/(t-1).
      const double share = static_cast<double>(p) / static_cast<double>(t);
      const double within = t > 1 ? static_cast<double>(p - 1) / static_cast<double>(t - 1) : 0.0;
      for (std::size_t r = 1; r <= t; ++r) {
        const double hits = static_cast<double>(positives_before) + 1.0 + static_cast<double>(r - 1) * within;
        total += share * hits / static_cast<double>(start + r);
      }
    }
    positives_before += p;
  });
  return total / static_cast<double>(P);
}

double precision_at_k(const ScoredCells& sc, std::size_t k) {
  sc.validate();
  if (k == 0) k = sc.positives();
  if (k == 0) throw DataError("precision at k needs at least one positive cell; none present");
  if (k > sc.size()) throw DataError("precision at k: k exceeds the number of cells");
  const auto order = descending_order(sc);
  double hits = 0.0;
  for_each_tie_block(sc, order, [&](std::size_t start, std::size_t t, std::size_t p) {
    if (start >= k) return;
    const std::size_t taken = std::min(t, k - start);
    hits += static_cast<double>(p) * static_cast<double>(taken) / static_cast<double>(t);
  });
  return hits / static_cast<double>(k);
}

MetricsReport evaluate(const ScoredCells& sc) {
  MetricsReport r;
  r.auc = auc_roc(sc);
  r.average_precision = average_precision(sc);
  r.precision_at_k = precision_at_k(sc);
  r.n_test = sc.size();
  r.n_pos_test = sc.positives();
  return r;
}

void write_metrics(std::ostream& out, const MetricsReport& report) {
  out << "auc = " << format_real(report.auc) << '\n';
  out << "average_precision = " << format_real(report.average_precision) << '\n';
  out << "precision_at_k = " << format_real(report.precision_at_k) << '\n';
  out << "n_test = " << report.n_test << '\n';
  out << "n_pos_test = " << report.n_pos_test << '\n';
}

namespace {

Eigen::MatrixXd normalise_rows(Eigen::MatrixXd counts) {
  const auto K = counts.cols();
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    const double total = counts.row(i).sum();
    if (total > 0.0) counts.row(i) /= total;
    else counts.row(i).setConstant(1.0 / static_cast<double>(K));
  }
  return counts;
}

}  // namespace

Eigen::MatrixXd label_proportions(const LabelTally& tally, LabelDimension dim) {
  return normalise_rows(dim == LabelDimension::sender ? tally.sender : tally.receiver);
}

Eigen::MatrixXd label_proportions(const LabelMatrix& labels, const RelationalMatrix& R, Eigen::Index K,
                                  LabelDimension dim) {
  const Eigen::Index n = R.size();
  if (labels.rows() != n || labels.cols() != n) throw std::invalid_argument("label matrix must be n x n");
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, K);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!R.is_train(i, j)) continue;
      const Label k = labels(i, j);
      if (k < 0 || k >= K) throw std::invalid_argument("label out of range");
      if (dim == LabelDimension::sender) counts(i, k) += 1.0;
      else counts(j, k) += 1.0;
    }
  return normalise_rows(std::move(counts));
}

std::vector<Eigen::Index> proportion_order(const Eigen::MatrixXd& proportions) {
  const Eigen::Index n = proportions.rows();
  std::vector<Eigen::Index> dominant(n);
  std::vector<double> share(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index k = 0;
    share[i] = proportions.row(i).maxCoeff(&k);
    dominant[i] = k;
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (dominant[a] != dominant[b]) return dominant[a] < dominant[b];
    if (share[a] != share[b]) return share[a] > share[b];
    return a < b;
  });
  return order;
}

}  // namespace sgraphon
