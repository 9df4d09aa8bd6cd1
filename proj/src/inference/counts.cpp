#include "internal.hpp"

#include "sgraphon/errors.hpp"

#include <stdexcept>
#include <string>

namespace sgraphon {

bool SufficientCounts::operator==(const SufficientCounts& other) const {
  return m1 == other.m1 && m2 == other.m2 && N1 == other.N1 && N0 == other.N0;
}

SufficientCounts counts_from_labels(const LabelMatrix& labels_s, const LabelMatrix& labels_r,
                                    const RelationalMatrix& R, Eigen::Index K) {
  const Eigen::Index n = R.size();
  if (labels_s.rows() != n || labels_s.cols() != n || labels_r.rows() != n || labels_r.cols() != n)
    throw std::invalid_argument("label arrays must match the relation size");
  SufficientCounts c{Eigen::MatrixXi::Zero(n, K), Eigen::MatrixXi::Zero(n, K), Eigen::MatrixXi::Zero(K, K),
                     Eigen::MatrixXi::Zero(K, K)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!R.is_train(i, j)) continue;
      const Label s = labels_s(i, j);
      const Label r = labels_r(i, j);
      if (s < 0 || s >= K || r < 0 || r >= K)
        throw std::invalid_argument("label out of range at cell (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
      ++c.m1(i, s);
      ++c.m2(j, r);
      if (R(i, j)) ++c.N1(s, r);
      else ++c.N0(s, r);
    }
  }
  return c;
}

namespace detail {

void verify_counts(const SufficientCounts& maintained, const LabelMatrix& s, const LabelMatrix& r,
                   const RelationalMatrix& R, Eigen::Index K, std::size_t sweep) {
  if (!(counts_from_labels(s, r, R, K) == maintained))
    throw NumericalError("incremental label counts diverged from a full recount at sweep " + std::to_string(sweep));
}

}  // namespace detail
}  // namespace sgraphon
