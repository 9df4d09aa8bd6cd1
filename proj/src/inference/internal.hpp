#pragma once

#include "sgraphon/errors.hpp"
#include "sgraphon/inference.hpp"

#include <cmath>

namespace sgraphon::detail {

inline double floored_log(double w) { return std::log(w > kWeightFloor ? w : kWeightFloor); }

/// Elementwise floored log of a weight matrix.
inline Eigen::MatrixXd floored_log(const Eigen::MatrixXd& w) {
  return w.unaryExpr([](double x) { return floored_log(x); });
}

/// sum_k counts_k * log w_k, skipping zero counts so empty segments cost nothing.
template <typename Counts, typename LogWeights>
double weighted_log_sum(const Counts& counts, const LogWeights& log_weights) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < counts.size(); ++k)
    if (counts(k) != 0) total += counts(k) * log_weights(k);
  return total;
}

/// Beta log density, with the alpha = 1 / beta = 1 terms dropped exactly so
/// the uniform case is 0 even at the endpoints.
inline double log_beta_density(double x, double a, double b) {
  double out = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  if (a != 1.0) out += (a - 1.0) * std::log(x);
  if (b != 1.0) out += (b - 1.0) * std::log1p(-x);
  return out;
}

/// Sample index k with probability proportional to exp(log_p(k)); log_p is overwritten.
template <typename Vec>
Eigen::Index sample_log_categorical(Vec& log_p, Rng& rng) {
  const double top = log_p.maxCoeff();
  if (!std::isfinite(top)) throw NumericalError("categorical conditional has no positive mass");
  for (Eigen::Index k = 0; k < log_p.size(); ++k) log_p(k) = std::exp(log_p(k) - top);
  return rng.categorical(log_p);
}

inline bool is_retained(const SamplerConfig& cfg, std::size_t sweep) {
  return sweep > cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0;
}

inline bool block_is_free(const SamplerConfig& cfg, Eigen::Index k1, Eigen::Index k2) {
  return cfg.free_blocks.size() == 0 || cfg.free_blocks(k1, k2) != 0;
}

/// Gibbs pass over all sender labels, then all receiver labels, on TRAIN cells.
/// log_w1 / log_w2 are n x K floored log weights; counts (optional) kept in sync.
void resample_labels(const Eigen::MatrixXd& log_w1, const Eigen::MatrixXd& log_w2, const BlockIntensities<double>& B,
                     const RelationalMatrix& R, LabelMatrix& s, LabelMatrix& r, Rng& rng, SufficientCounts* counts);

/// Conjugate block draw honouring the free-block mask.
BlockIntensities<double> conjugate_blocks(const BlockIntensities<double>& current, const SufficientCounts& counts,
                                          const Hyperparameters& h, const SamplerConfig& cfg, Rng& rng);

/// sum N1 log B + N0 log(1 - B) over label pairs.
double labelled_log_likelihood(const SufficientCounts& counts, const BlockIntensities<double>& B);

/// Checks shared by every chain entry point.
void check_chain_inputs(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg,
                        ModelKind expected);

/// Prior draw or cfg.initial_state, checked against the model kind and data size.
LatentState initial_latent_state(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg,
                                 ModelKind kind);

/// Labels on TRAIN cells drawn from the given per-node weights; other cells are 0.
void draw_prior_labels(const RelationalMatrix& R, const Eigen::MatrixXd& sender, const Eigen::MatrixXd& receiver,
                       LabelMatrix& s, LabelMatrix& r, Rng& rng);

void verify_counts(const SufficientCounts& maintained, const LabelMatrix& s, const LabelMatrix& r,
                   const RelationalMatrix& R, Eigen::Index K, std::size_t sweep);

}  // namespace sgraphon::detail
