#include "sgraphon/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sgraphon {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

Rng Rng::substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix_seed(seed);
  for (std::uint64_t key : keys) h = mix_seed(h ^ mix_seed(key + 0x632be59bd9b4e019ULL));
  return Rng(h);
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

std::size_t Rng::uniform_index(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

double Rng::log_gamma_variate(double shape) {
  if (shape >= 1.0) return std::log(std::gamma_distribution<double>(shape, 1.0)(engine_));
  // Gamma(a) = Gamma(a + 1) * U^(1/a), evaluated on the log scale.
  const double boosted = std::gamma_distribution<double>(shape + 1.0, 1.0)(engine_);
  double u = uniform();
  while (u <= 0.0) u = uniform();
  return std::log(boosted) + std::log(u) / shape;
}

double Rng::gamma(double shape, double rate) {
  return std::exp(log_gamma_variate(shape)) / rate;
}

double Rng::beta(double a, double b) {
  const double lx = log_gamma_variate(a);
  const double ly = log_gamma_variate(b);
  // x / (x + y) = 1 / (1 + exp(ly - lx))
  const double value = 1.0 / (1.0 + std::exp(ly - lx));
  constexpr double lo = std::numeric_limits<double>::min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(value, lo, hi);
}

Eigen::VectorXd Rng::dirichlet(const Eigen::VectorXd& alpha) {
  Eigen::VectorXd logs(alpha.size());
  for (Eigen::Index k = 0; k < alpha.size(); ++k) logs(k) = log_gamma_variate(alpha(k));
  const double top = logs.maxCoeff();
  Eigen::VectorXd out = (logs.array() - top).exp();
  out /= out.sum();
  return out;
}

}  // namespace sgraphon
