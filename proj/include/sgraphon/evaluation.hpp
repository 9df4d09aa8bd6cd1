#pragma once

// Link-prediction metrics on held-out cells and posterior label summaries.

#include "sgraphon/inference.hpp"
#include "sgraphon/models.hpp"
#include "sgraphon/relational_data.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sgraphon {

/// Scores and binary truths for the same cells, index-aligned.
struct ScoredCells {
  Eigen::VectorXd scores;
  std::vector<std::uint8_t> truths;

  std::size_t size() const { return truths.size(); }
  std::size_t positives() const;
  /// Throws DataError on a length mismatch, non-binary truth or NaN score.
  void validate() const;
};

/// Pair the scores of `cells` with the entries of R at those cells.
ScoredCells score_cells(const RelationalMatrix& R, const CellList& cells, const Eigen::VectorXd& scores);

/// Probability that a random positive outranks a random negative; ties count 1/2.
/// Throws DataError naming the missing class when either class is empty.
double auc_roc(const ScoredCells& sc);

/// Mean over positives of precision at that positive's rank, scores descending.
/// Tied scores are scored by the expectation over every order of the tied block.
/// Throws DataError without positives.
double average_precision(const ScoredCells& sc);

/// Fraction of positives among the k highest scores, tied blocks straddling the
/// cut-off counted by expectation. k = 0 means k = number of positives.
double precision_at_k(const ScoredCells& sc, std::size_t k = 0);

struct MetricsReport {
  double auc = 0.0;
  double average_precision = 0.0;
  double precision_at_k = 0.0;  // k = n_pos_test
  std::size_t n_test = 0;
  std::size_t n_pos_test = 0;
};

MetricsReport evaluate(const ScoredCells& sc);
/// "key = value" lines: auc, average_precision, precision_at_k, n_test, n_pos_test.
void write_metrics(std::ostream& out, const MetricsReport& report);

enum class LabelDimension { sender, receiver };

/// Row i is the empirical label distribution of node i pooled over retained
/// sweeps and partners. Rows with no observations are uniform.
Eigen::MatrixXd label_proportions(const LabelTally& tally, LabelDimension dim);
/// Single-sweep version straight from per-cell labels on TRAIN cells:
/// sender rows pool s_ij over j, receiver rows pool r_ji over j.
Eigen::MatrixXd label_proportions(const LabelMatrix& labels, const RelationalMatrix& R, Eigen::Index K,
                                  LabelDimension dim);

/// Presentation order of nodes: by dominant label, then by decreasing share of
/// that label, then by node id.
std::vector<Eigen::Index> proportion_order(const Eigen::MatrixXd& proportions);

}  // namespace sgraphon
