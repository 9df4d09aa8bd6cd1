#pragma once

// Reference calculations used by the tests. Each one is written independently
// of the library: plain loops, direct-space formulas, enumeration and
// quadrature, so agreement is evidence rather than a restatement.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

/// G(x) exactly as written: piecewise Laplace CDF with no overflow guards.
inline long double laplace_cdf(long double x, long double lambda) {
  return x < 0 ? 0.5L * std::exp(lambda * x) : 1.0L - 0.5L * std::exp(-lambda * x);
}

/// Normalised segment weights by the raw G-difference formula in extended precision.
inline std::vector<long double> segment_weights(double u, const std::vector<double>& theta, double lambda) {
  std::vector<long double> w(theta.size());
  const long double denom = laplace_cdf(1.0L - u, lambda) - laplace_cdf(-static_cast<long double>(u), lambda);
  long double lo = 0.0L;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const long double hi = k + 1 == theta.size() ? 1.0L : lo + theta[k];
    w[k] = (laplace_cdf(hi - u, lambda) - laplace_cdf(lo - u, lambda)) / denom;
    lo = hi;
  }
  return w;
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      const double dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
}

/// Integral of f over [a, b] with composite Gauss-Legendre (pieces x order points).
inline double integrate(const std::function<double(double)>& f, double a, double b, int pieces = 64, int order = 20) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  double total = 0.0;
  const double h = (b - a) / pieces;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + p * h;
    const double mid = lo + h / 2.0;
    for (int i = 0; i < order; ++i) total += w[i] * f(mid + h / 2.0 * x[i]);
  }
  return total * h / 2.0;
}

/// Laplace(u, 1/lambda) mass of [lo, hi] by quadrature of the density, split at u.
inline double laplace_mass_quadrature(double lo, double hi, double u, double lambda) {
  auto density = [&](double x) { return lambda / 2.0 * std::exp(-lambda * std::abs(x - u)); };
  if (hi <= lo) return 0.0;
  if (u <= lo || u >= hi) return integrate(density, lo, hi);
  return integrate(density, lo, u) + integrate(density, u, hi);
}

/// Segment containing u by linear scan of cumulative sums; u == 1 goes to the last.
inline int linear_lookup(double u, const std::vector<double>& theta) {
  double upper = 0.0;
  const int K = static_cast<int>(theta.size());
  for (int k = 0; k + 1 < K; ++k) {
    upper += theta[k];
    if (u < upper) return k;
  }
  return K - 1;
}

// ---------------------------------------------------------------------------
// Metrics

/// Pair enumeration: count 1 per correctly ordered pair and 1/2 per tie.
inline double auc_pairs(const std::vector<double>& s, const std::vector<int>& t) {
  double hits = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (t[a] != 1) continue;
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (t[b] != 0) continue;
      ++pairs;
      if (s[a] > s[b]) hits += 1.0;
      else if (s[a] == s[b]) hits += 0.5;
    }
  }
  return hits / static_cast<double>(pairs);
}

/// AP of a fixed ranking (truths listed best first).
inline double ap_of_ranking(const std::vector<int>& ranked_truths) {
  double total = 0.0;
  int seen = 0;
  for (std::size_t r = 0; r < ranked_truths.size(); ++r)
    if (ranked_truths[r]) total += static_cast<double>(++seen) / static_cast<double>(r + 1);
  return seen ? total / seen : 0.0;
}

/// Fraction of positives in the first k of a fixed ranking.
inline double precision_of_ranking(const std::vector<int>& ranked_truths, std::size_t k) {
  int hits = 0;
  for (std::size_t r = 0; r < k; ++r) hits += ranked_truths[r];
  return static_cast<double>(hits) / static_cast<double>(k);
}

/// Average of `metric` over every ordering of the cells that is consistent with
/// descending scores (all permutations of each tied block), by brute force.
inline double average_over_tie_orders(const std::vector<double>& s, const std::vector<int>& t,
                                      const std::function<double(const std::vector<int>&)>& metric) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end());
  double total = 0.0;
  std::size_t count = 0;
  do {
    bool descending = true;
    for (std::size_t r = 1; r < idx.size() && descending; ++r) descending = s[idx[r - 1]] >= s[idx[r]];
    if (!descending) continue;
    std::vector<int> ranked(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) ranked[r] = t[idx[r]];
    total += metric(ranked);
    ++count;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return total / static_cast<double>(count);
}

/// Same expectation for larger instances: enumerates every placement of the
/// positives inside each tied block (all placements are equally likely under a
/// uniformly random order of the block) and averages the metric of the result.
inline double average_over_tie_placements(const std::vector<double>& s, const std::vector<int>& t,
                                          const std::function<double(const std::vector<int>&)>& metric) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  struct Block {
    std::size_t start, size, positives;
  };
  std::vector<Block> blocks;
  for (std::size_t a = 0; a < idx.size();) {
    std::size_t b = a, p = 0;
    while (b < idx.size() && s[idx[b]] == s[idx[a]]) p += t[idx[b++]];
    blocks.push_back({a, b - a, p});
    a = b;
  }
  std::vector<int> ranked(idx.size(), 0);
  double total = 0.0;
  std::size_t count = 0;
  std::function<void(std::size_t)> recurse = [&](std::size_t bi) {
    if (bi == blocks.size()) {
      total += metric(ranked);
      ++count;
      return;
    }
    const Block& blk = blocks[bi];
    std::vector<int> mask(blk.size, 0);
    std::fill(mask.end() - static_cast<long>(blk.positives), mask.end(), 1);
    do {
      for (std::size_t r = 0; r < blk.size; ++r) ranked[blk.start + r] = mask[r];
      recurse(bi + 1);
    } while (std::next_permutation(mask.begin(), mask.end()));
  };
  recurse(0);
  return total / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Posterior enumeration

/// log of the Beta function.
inline double log_beta_fn(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

/// log Dirichlet-multinomial probability of one ordered label sequence with the given counts.
inline double log_dirichlet_sequence(const std::vector<int>& counts, const std::vector<double>& alpha) {
  double total_alpha = 0.0;
  int total = 0;
  double out = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out += std::lgamma(alpha[k] + counts[k]) - std::lgamma(alpha[k]);
    total_alpha += alpha[k];
    total += counts[k];
  }
  return out + std::lgamma(total_alpha) - std::lgamma(total_alpha + total);
}

/// Posterior moments of every block intensity for a given label-configuration weight.
struct BlockMoments {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd second;  // E[B^2]
  Eigen::MatrixXd variance() const { return second - mean.cwiseProduct(mean); }
};

/// Accumulates E[B] and E[B^2] over configurations described by their log
/// weight (excluding the B integral) and link / no-link counts per block.
class BlockMomentAccumulator {
 public:
  BlockMomentAccumulator(int K, double alpha0, double beta0) : K_(K), a0_(alpha0), b0_(beta0) {}

  void add(double log_weight, const Eigen::MatrixXi& N1, const Eigen::MatrixXi& N0) {
    double lw = log_weight;
    for (int a = 0; a < K_; ++a)
      for (int b = 0; b < K_; ++b) lw += log_beta_fn(a0_ + N1(a, b), b0_ + N0(a, b)) - log_beta_fn(a0_, b0_);
    logw_.push_back(lw);
    n1_.push_back(N1);
    n0_.push_back(N0);
  }

  BlockMoments moments() const {
    const double top = *std::max_element(logw_.begin(), logw_.end());
    BlockMoments m{Eigen::MatrixXd::Zero(K_, K_), Eigen::MatrixXd::Zero(K_, K_)};
    double z = 0.0;
    for (std::size_t c = 0; c < logw_.size(); ++c) {
      const double w = std::exp(logw_[c] - top);
      z += w;
      for (int a = 0; a < K_; ++a)
        for (int b = 0; b < K_; ++b) {
          const double al = a0_ + n1_[c](a, b), be = b0_ + n0_[c](a, b);
          m.mean(a, b) += w * al / (al + be);
          m.second(a, b) += w * al * (al + 1.0) / ((al + be) * (al + be + 1.0));
        }
    }
    m.mean /= z;
    m.second /= z;
    return m;
  }

 private:
  int K_;
  double a0_, b0_;
  std::vector<double> logw_;
  std::vector<Eigen::MatrixXi> n1_, n0_;
};

/// Calls visit(digits) for every vector of `length` digits in {0, ..., base-1}.
inline void for_each_assignment(int length, int base, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> d(length, 0);
  while (true) {
    visit(d);
    int pos = 0;
    while (pos < length && ++d[pos] == base) d[pos++] = 0;
    if (pos == length) return;
  }
}

}  // namespace oracle
