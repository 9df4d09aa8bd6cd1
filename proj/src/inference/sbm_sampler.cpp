#include "internal.hpp"

#include <cmath>
#include <limits>

namespace sgraphon {

namespace {

SufficientCounts block_counts(const LabelVector& z1, const LabelVector& z2, const RelationalMatrix& R,
                              Eigen::Index K) {
  SufficientCounts c{Eigen::MatrixXi::Zero(R.size(), K), Eigen::MatrixXi::Zero(R.size(), K),
                     Eigen::MatrixXi::Zero(K, K), Eigen::MatrixXi::Zero(K, K)};
  for (Eigen::Index i = 0; i < R.size(); ++i)
    for (Eigen::Index j = 0; j < R.size(); ++j) {
      if (!R.is_train(i, j)) continue;
      ++c.m1(i, z1(i));
      ++c.m2(j, z2(j));
      if (R(i, j)) ++c.N1(z1(i), z2(j));
      else ++c.N0(z1(i), z2(j));
    }
  return c;
}

/// Resample every entry of `z` from its conditional. `linked(a, b)` / `train(a, b)`
/// address the cell between node a on the moving axis and node b on the fixed one,
/// and `rate(k, other)` gives B for the moving label k against the fixed label.
template <typename Linked, typename Train, typename Rate>
void resample_node_labels(LabelVector& z, const LabelVector& fixed, const Eigen::VectorXd& theta, Eigen::Index K,
                          std::uint64_t base, Linked&& linked, Train&& train, Rate&& rate) {
  const Eigen::Index n = z.size();
  Eigen::VectorXi ones(K), zeros(K);
  Eigen::VectorXd log_p(K);
  for (Eigen::Index a = 0; a < n; ++a) {
    ones.setZero();
    zeros.setZero();
    for (Eigen::Index b = 0; b < n; ++b) {
      if (!train(a, b)) continue;
      if (linked(a, b)) ++ones(fixed(b));
      else ++zeros(fixed(b));
    }
    for (Eigen::Index k = 0; k < K; ++k) {
      double lp = detail::floored_log(theta(k));
      for (Eigen::Index other = 0; other < K; ++other) {
        if (ones(other)) lp += ones(other) * std::log(rate(k, other));
        if (zeros(other)) lp += zeros(other) * std::log1p(-rate(k, other));
      }
      log_p(k) = lp;
    }
    Rng task = Rng::substream(base, {static_cast<std::uint64_t>(a)});
    z(a) = static_cast<Label>(detail::sample_log_categorical(log_p, task));
  }
}

Eigen::VectorXd label_histogram(const LabelVector& z, Eigen::Index K) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(K);
  for (Eigen::Index i = 0; i < z.size(); ++i) h(z(i)) += 1.0;
  return h;
}

}  // namespace

Trace run_sbm_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg) {
  detail::check_chain_inputs(R, h, cfg, ModelKind::sbm);
  const Eigen::Index n = R.size();
  const Eigen::Index K = h.groups();
  LatentState state = detail::initial_latent_state(R, h, cfg, ModelKind::sbm);
  if (!state.z1 || !state.z2) {
    LabelVector z1(n), z2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      z1(i) = static_cast<Label>(segment_lookup(state.u1(i), state.partition.dim1()));
      z2(i) = static_cast<Label>(segment_lookup(state.u2(i), state.partition.dim2()));
    }
    state.z1 = std::move(z1);
    state.z2 = std::move(z2);
  }
  LabelVector& z1 = *state.z1;
  LabelVector& z2 = *state.z2;

  Trace trace;
  trace.kind = ModelKind::sbm;
  trace.n = n;
  trace.K = K;
  trace.samples.reserve(cfg.retained_samples());

  // Sweep order: sender labels, receiver labels, segment distributions, block intensities.
  for (std::size_t sweep = 1; sweep <= cfg.iterations; ++sweep) {
    Rng rng = Rng::substream(cfg.seed, {sweep});
    if (cfg.updates.labels) {
      const std::uint64_t base1 = rng.next_seed();
      const std::uint64_t base2 = rng.next_seed();
      const auto& B = state.B;
      resample_node_labels(
          z1, z2, state.partition.dim1().theta(), K, base1,
          [&](Eigen::Index a, Eigen::Index b) { return R(a, b) != 0; },
          [&](Eigen::Index a, Eigen::Index b) { return R.is_train(a, b); },
          [&](Eigen::Index k, Eigen::Index other) { return B(k, other); });
      resample_node_labels(
          z2, z1, state.partition.dim2().theta(), K, base2,
          [&](Eigen::Index a, Eigen::Index b) { return R(b, a) != 0; },
          [&](Eigen::Index a, Eigen::Index b) { return R.is_train(b, a); },
          [&](Eigen::Index k, Eigen::Index other) { return B(other, k); });
    }
    if (cfg.updates.theta) {
      SegmentDistribution<double> theta1(rng.dirichlet(h.concentration + label_histogram(z1, K)));
      SegmentDistribution<double> theta2(rng.dirichlet(h.concentration + label_histogram(z2, K)));
      state.partition = Partition<double>(std::move(theta1), std::move(theta2));
    }
    const SufficientCounts counts = block_counts(z1, z2, R, K);
    if (cfg.updates.blocks) state.B = detail::conjugate_blocks(state.B, counts, h, cfg, rng);

    if (detail::is_retained(cfg, sweep)) {
      TraceSample s;
      s.sweep = sweep;
      s.lambda = std::numeric_limits<double>::infinity();
      s.theta1 = state.partition.dim1().theta();
      s.theta2 = state.partition.dim2().theta();
      s.B = state.B.matrix();
      s.train_log_likelihood = detail::labelled_log_likelihood(cfg.updates.blocks ? block_counts(z1, z2, R, K) : counts, state.B);
      s.z1 = z1;
      s.z2 = z2;
      trace.samples.push_back(std::move(s));
    }
  }
  return trace;
}

}  // namespace sgraphon
