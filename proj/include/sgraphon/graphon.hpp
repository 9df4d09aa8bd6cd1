#pragma once

// Partition, weighting, and intensity mathematics for piecewise-constant and
// smoothing graphons on the unit square.
//
// Everything here is templated on the scalar type; the rest of the library
// instantiates it with double.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sgraphon {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Laplace scale controlling graphon sharpness. Always positive and finite.
template <typename Scalar = double>
class SmoothingParameter {
 public:
  explicit SmoothingParameter(Scalar lambda) : value_(lambda) {
    if (!(lambda > Scalar(0)) || !std::isfinite(lambda))
      throw std::invalid_argument("smoothing parameter must be positive and finite");
  }
  Scalar value() const { return value_; }

 private:
  Scalar value_;
};

/// Group proportions along one axis and their cumulative boundaries.
///
/// boundaries(0) == 0, boundaries(K) == 1 exactly; segment k is the half-open
/// interval [boundaries(k), boundaries(k+1)) except that the last segment also
/// owns u == 1. Zero-length segments are tolerated (a Dirichlet draw can
/// underflow) and simply receive zero weight.
template <typename Scalar = double>
class SegmentDistribution {
 public:
  explicit SegmentDistribution(VectorX<Scalar> theta) : theta_(std::move(theta)) {
    if (theta_.size() == 0) throw std::invalid_argument("segment distribution needs K >= 1");
    for (Eigen::Index k = 0; k < theta_.size(); ++k)
      if (!(theta_(k) >= Scalar(0)) || !std::isfinite(theta_(k)))
        throw std::invalid_argument("segment proportions must be finite and non-negative");
    const Scalar total = theta_.sum();
    if (std::abs(total - Scalar(1)) > Scalar(1e-9))
      throw std::invalid_argument("segment proportions must sum to 1");
    theta_ /= total;
    boundaries_.resize(theta_.size() + 1);
    boundaries_(0) = Scalar(0);
    for (Eigen::Index k = 0; k < theta_.size(); ++k)
      boundaries_(k + 1) = std::min(Scalar(1), boundaries_(k) + theta_(k));
    boundaries_(theta_.size()) = Scalar(1);
  }

  Eigen::Index size() const { return theta_.size(); }
  const VectorX<Scalar>& theta() const { return theta_; }
  const VectorX<Scalar>& boundaries() const { return boundaries_; }
  Scalar lower(Eigen::Index k) const { return boundaries_(k); }
  Scalar upper(Eigen::Index k) const { return boundaries_(k + 1); }

 private:
  VectorX<Scalar> theta_;
  VectorX<Scalar> boundaries_;
};

/// Regular-grid partition of the unit square: one segment distribution per axis.
template <typename Scalar = double>
class Partition {
 public:
  Partition(SegmentDistribution<Scalar> rows, SegmentDistribution<Scalar> cols)
      : dim1_(std::move(rows)), dim2_(std::move(cols)) {
    if (dim1_.size() != dim2_.size())
      throw std::invalid_argument("both partition dimensions must have the same K");
  }
  Eigen::Index groups() const { return dim1_.size(); }
  const SegmentDistribution<Scalar>& dim1() const { return dim1_; }
  const SegmentDistribution<Scalar>& dim2() const { return dim2_; }

 private:
  SegmentDistribution<Scalar> dim1_;
  SegmentDistribution<Scalar> dim2_;
};

/// K x K Bernoulli rates, every entry in [0, 1].
template <typename Scalar = double>
class BlockIntensities {
 public:
  explicit BlockIntensities(MatrixX<Scalar> values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols() || values_.rows() == 0)
      throw std::invalid_argument("block intensities must be a non-empty square matrix");
    for (Eigen::Index i = 0; i < values_.size(); ++i)
      check(values_.data()[i]);
  }
  static BlockIntensities constant(Eigen::Index K, Scalar value) {
    return BlockIntensities(MatrixX<Scalar>::Constant(K, K, value));
  }

  Eigen::Index groups() const { return values_.rows(); }
  Scalar operator()(Eigen::Index k1, Eigen::Index k2) const { return values_(k1, k2); }
  void set(Eigen::Index k1, Eigen::Index k2, Scalar value) {
    check(value);
    values_(k1, k2) = value;
  }
  const MatrixX<Scalar>& matrix() const { return values_; }

 private:
  static void check(Scalar v) {
    if (!(v >= Scalar(0) && v <= Scalar(1)))
      throw std::invalid_argument("block intensity outside [0, 1]");
  }
  MatrixX<Scalar> values_;
};

enum class GridMode { smooth, piecewise };

/// Laplace CDF G(x) = 1/2 e^{lambda x} for x < 0, 1 - 1/2 e^{-lambda x} otherwise.
template <typename Scalar>
Scalar laplace_cdf(Scalar x, SmoothingParameter<Scalar> lambda) {
  const Scalar t = lambda.value() * x;
  if (t < Scalar(0)) return t < Scalar(-700) ? Scalar(0) : Scalar(0.5) * std::exp(t);
  return t > Scalar(700) ? Scalar(1) : Scalar(1) - Scalar(0.5) * std::exp(-t);
}

/// Laplace(u, 1/lambda) probability mass of [lo, hi].
///
/// Equal to G(hi - u) - G(lo - u), evaluated piecewise with expm1 so tails and
/// tiny lambda keep full relative precision instead of cancelling.
template <typename Scalar>
Scalar segment_mass(Scalar lo, Scalar hi, Scalar u, SmoothingParameter<Scalar> lambda) {
  if (!(hi > lo)) return Scalar(0);
  const Scalar lam = lambda.value();
  const Scalar a = lo - u;
  const Scalar b = hi - u;
  if (b <= Scalar(0)) return Scalar(0.5) * std::exp(lam * b) * -std::expm1(lam * (a - b));
  if (a >= Scalar(0)) return Scalar(0.5) * std::exp(-lam * a) * -std::expm1(-lam * (b - a));
  return Scalar(-0.5) * std::expm1(lam * a) - Scalar(0.5) * std::expm1(-lam * b);
}

/// Normalised weight of every segment with respect to coordinate u.
template <typename Scalar>
VectorX<Scalar> segment_weights(Scalar u, const SegmentDistribution<Scalar>& seg,
                                SmoothingParameter<Scalar> lambda) {
  const Scalar denominator = segment_mass(Scalar(0), Scalar(1), u, lambda);
  VectorX<Scalar> w(seg.size());
  for (Eigen::Index k = 0; k < seg.size(); ++k)
    w(k) = segment_mass(seg.lower(k), seg.upper(k), u, lambda) / denominator;
  return w;
}

/// Row i holds segment_weights(coords(i)); the per-node weights shared by all blocks.
template <typename Scalar, typename Derived>
MatrixX<Scalar> weight_matrix(const Eigen::DenseBase<Derived>& coords,
                              const SegmentDistribution<Scalar>& seg,
                              SmoothingParameter<Scalar> lambda) {
  MatrixX<Scalar> w(coords.size(), seg.size());
  for (Eigen::Index i = 0; i < coords.size(); ++i)
    w.row(i) = segment_weights<Scalar>(coords(i), seg, lambda).transpose();
  return w;
}

template <typename Scalar>
Scalar block_weight(Scalar u1, Scalar u2, const Partition<Scalar>& p,
                    SmoothingParameter<Scalar> lambda, Eigen::Index k1, Eigen::Index k2) {
  return segment_weights(u1, p.dim1(), lambda)(k1) * segment_weights(u2, p.dim2(), lambda)(k2);
}

/// Blend of block intensities from precomputed per-axis weight vectors.
template <typename Scalar, typename D1, typename D2>
Scalar mixture_intensity(const Eigen::MatrixBase<D1>& w1, const Eigen::MatrixBase<D2>& w2,
                         const BlockIntensities<Scalar>& B) {
  Scalar g(0);
  for (Eigen::Index k1 = 0; k1 < B.groups(); ++k1)
    for (Eigen::Index k2 = 0; k2 < B.groups(); ++k2) g += w1(k1) * w2(k2) * B(k1, k2);
  return g;
}

template <typename Scalar>
Scalar mixture_intensity(Scalar u1, Scalar u2, const Partition<Scalar>& p,
                         const BlockIntensities<Scalar>& B, SmoothingParameter<Scalar> lambda) {
  return mixture_intensity(segment_weights(u1, p.dim1(), lambda),
                           segment_weights(u2, p.dim2(), lambda), B);
}

/// Index k with lower(k) <= u < upper(k); u == 1 maps to the last segment.
template <typename Scalar>
Eigen::Index segment_lookup(Scalar u, const SegmentDistribution<Scalar>& seg) {
  const auto& L = seg.boundaries();
  // Interior boundaries are L(1) .. L(K-1); count those <= u.
  const Scalar* first = L.data() + 1;
  const Scalar* last = L.data() + seg.size();
  return static_cast<Eigen::Index>(std::upper_bound(first, last, u) - first);
}

template <typename Scalar>
Scalar piecewise_intensity(Scalar u1, Scalar u2, const Partition<Scalar>& p,
                           const BlockIntensities<Scalar>& B) {
  return B(segment_lookup(u1, p.dim1()), segment_lookup(u2, p.dim2()));
}

/// Intensity sampled at cell centres ((a + 1/2) / res, (b + 1/2) / res).
template <typename Scalar>
MatrixX<Scalar> intensity_grid(const Partition<Scalar>& p, const BlockIntensities<Scalar>& B,
                               SmoothingParameter<Scalar> lambda, Eigen::Index resolution,
                               GridMode mode) {
  if (resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
  VectorX<Scalar> centres(resolution);
  for (Eigen::Index a = 0; a < resolution; ++a)
    centres(a) = (Scalar(a) + Scalar(0.5)) / Scalar(resolution);

  if (mode == GridMode::piecewise) {
    MatrixX<Scalar> grid(resolution, resolution);
    for (Eigen::Index a = 0; a < resolution; ++a)
      for (Eigen::Index b = 0; b < resolution; ++b)
        grid(a, b) = piecewise_intensity(centres(a), centres(b), p, B);
    return grid;
  }
  const MatrixX<Scalar> w1 = weight_matrix(centres, p.dim1(), lambda);
  const MatrixX<Scalar> w2 = weight_matrix(centres, p.dim2(), lambda);
  return w1 * B.matrix() * w2.transpose();
}

}  // namespace sgraphon
