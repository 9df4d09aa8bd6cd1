#pragma once

#include "sgraphon/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

namespace sgraphon {

using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Role of one cell in fitting and scoring. Values match the mask CSV encoding.
enum class CellRole : std::uint8_t { excluded = 0, train = 1, test = 2 };

enum class SelfLoops { excluded, included };

/// Receives non-fatal diagnostics. Defaults print to std::clog.
using WarningSink = std::function<void(std::string_view)>;
void log_warning(std::string_view message);

/// Directed binary n x n relation with a per-cell observation mask.
class RelationalMatrix {
 public:
  explicit RelationalMatrix(Eigen::Index n, SelfLoops loops = SelfLoops::excluded);
  RelationalMatrix(BinaryMatrix entries, SelfLoops loops);

  Eigen::Index size() const { return entries_.rows(); }
  std::uint8_t operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  void set(Eigen::Index i, Eigen::Index j, bool linked) { entries_(i, j) = linked ? 1 : 0; }

  CellRole role(Eigen::Index i, Eigen::Index j) const { return static_cast<CellRole>(mask_(i, j)); }
  void set_role(Eigen::Index i, Eigen::Index j, CellRole r) { mask_(i, j) = static_cast<std::uint8_t>(r); }
  bool is_train(Eigen::Index i, Eigen::Index j) const { return mask_(i, j) == 1; }
  bool is_test(Eigen::Index i, Eigen::Index j) const { return mask_(i, j) == 2; }

  const BinaryMatrix& entries() const { return entries_; }
  const BinaryMatrix& mask() const { return mask_; }
  SelfLoops self_loops() const { return loops_; }

  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells_with_role(CellRole r) const;

 private:
  BinaryMatrix entries_;
  BinaryMatrix mask_;
  SelfLoops loops_;
};

struct DatasetSummary {
  std::size_t positive_links = 0;  // L
  std::size_t observed_cells = 0;  // denominator of S
  double sparsity = 0.0;           // S = L / observed_cells
};

using Edge = std::pair<std::size_t, std::size_t>;

/// Parse "src<TAB>dst" lines (any whitespace separator); '#' lines and blank lines skipped.
/// Throws DataError naming the line on malformed input.
std::vector<Edge> read_edges(std::istream& in);

/// Build an n x n relation from an edge list stream. All non-excluded cells start as TRAIN.
RelationalMatrix load_edge_list(std::istream& in, Eigen::Index n,
                                SelfLoops loops = SelfLoops::excluded);
void write_edge_list(std::ostream& out, const RelationalMatrix& R);

RelationalMatrix load_dense_csv(std::istream& in, SelfLoops loops = SelfLoops::excluded);
void write_dense_csv(std::ostream& out, const RelationalMatrix& R);
void write_mask_csv(std::ostream& out, const RelationalMatrix& R);
/// Replace R's mask with the one read from a mask CSV of matching size.
void read_mask_csv(std::istream& in, RelationalMatrix& R);

/// Pick `sample` node ids uniformly from the `pool` most active nodes
/// (activity = in-degree + out-degree, ties to the smaller id). Result is sorted.
std::vector<std::size_t> top_active_subsample(const std::vector<Edge>& edges, std::size_t pool,
                                              std::size_t sample, Rng& rng,
                                              const WarningSink& warn = log_warning);

/// Relation among `nodes` only, with ids remapped to their position in `nodes`.
RelationalMatrix induced_relation(const std::vector<Edge>& edges,
                                  const std::vector<std::size_t>& nodes,
                                  SelfLoops loops = SelfLoops::excluded);

/// Within each row, round-half-up(train_ratio * cells) of the non-excluded
/// cells become TRAIN (chosen uniformly) and the rest TEST.
RelationalMatrix row_wise_split(RelationalMatrix R, double train_ratio, Rng& rng,
                                const WarningSink& warn = log_warning);

/// L and S over the non-excluded cells.
DatasetSummary summarize(const RelationalMatrix& R);

}  // namespace sgraphon
