#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sgraphon {

/// Seeded random source used by every generator and sampler.
///
/// Independent substreams are derived from a base seed and a list of integer
/// keys (for example seed, sweep, update family, row). Two substreams with
/// distinct key lists are statistically independent and a given key list
/// always reproduces the same stream, so work split across tasks stays
/// bit-identical regardless of the order tasks run in.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Fresh 64-bit value, used to key child substreams.
  std::uint64_t next_seed() { return engine_(); }

  double uniform();  // [0, 1)
  double normal();
  std::size_t uniform_index(std::size_t n);  // {0, ..., n-1}
  bool bernoulli(double p) { return uniform() < p; }

  /// log of a Gamma(shape, 1) variate; stays finite for tiny shapes.
  double log_gamma_variate(double shape);
  double gamma(double shape, double rate = 1.0);
  /// Beta variate clamped to the open interval so log(b) and log(1-b) are finite.
  double beta(double a, double b);
  Eigen::VectorXd dirichlet(const Eigen::VectorXd& alpha);

  /// Draw an index proportional to non-negative weights (need not be normalised).
  template <typename Derived>
  Eigen::Index categorical(const Eigen::DenseBase<Derived>& weights) {
    const double total = weights.sum();
    double target = uniform() * total;
    const Eigen::Index last = weights.size() - 1;
    for (Eigen::Index k = 0; k < last; ++k) {
      target -= weights(k);
      if (target < 0.0) return k;
    }
    // Land on the last non-zero entry when rounding pushes past the end.
    for (Eigen::Index k = last; k > 0; --k)
      if (weights(k) > 0.0) return k;
    return 0;
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finaliser; mixes keys into substream seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace sgraphon
