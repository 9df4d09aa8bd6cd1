#include "internal.hpp"

namespace sgraphon {

namespace {

TraceSample snapshot(const LatentState& state, const SufficientCounts& counts, std::size_t sweep) {
  TraceSample s;
  s.sweep = sweep;
  s.lambda = state.lambda.value();
  s.theta1 = state.partition.dim1().theta();
  s.theta2 = state.partition.dim2().theta();
  s.B = state.B.matrix();
  s.train_log_likelihood = detail::labelled_log_likelihood(counts, state.B);
  s.u1 = state.u1;
  s.u2 = state.u2;
  return s;
}

}  // namespace

Trace run_lfsg_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg) {
  detail::check_chain_inputs(R, h, cfg, ModelKind::lfsg);
  const Eigen::Index n = R.size();
  const Eigen::Index K = h.groups();
  LatentState state = detail::initial_latent_state(R, h, cfg, ModelKind::lfsg);
  if (!state.labels_s || !state.labels_r) {
    Rng init = Rng::substream(cfg.seed, {0, 1});
    LabelMatrix s, r;
    detail::draw_prior_labels(R, sender_weights(state), receiver_weights(state), s, r, init);
    state.labels_s = std::move(s);
    state.labels_r = std::move(r);
  }
  SufficientCounts counts = counts_from_labels(*state.labels_s, *state.labels_r, R, K);

  Trace trace;
  trace.kind = ModelKind::lfsg;
  trace.n = n;
  trace.K = K;
  trace.samples.reserve(cfg.retained_samples());
  LabelTally tally{Eigen::MatrixXd::Zero(n, K), Eigen::MatrixXd::Zero(n, K), 0};

  // Sweep order: coordinates, segment distributions, block intensities, labels, smoothing.
  for (std::size_t sweep = 1; sweep <= cfg.iterations; ++sweep) {
    Rng rng = Rng::substream(cfg.seed, {sweep});
    if (cfg.updates.coordinates) update_u(state, counts, cfg, rng, &trace.acceptance);
    if (cfg.updates.theta) update_theta(state, counts, h, rng, &trace.acceptance);
    if (cfg.updates.blocks) state.B = detail::conjugate_blocks(state.B, counts, h, cfg, rng);
    if (cfg.updates.labels) update_labels(state, R, rng, &counts);
    if (cfg.updates.lambda) update_lambda(state, counts, h, rng, &trace.acceptance);

    if (cfg.recount_every && sweep % cfg.recount_every == 0)
      detail::verify_counts(counts, *state.labels_s, *state.labels_r, R, K, sweep);

    if (detail::is_retained(cfg, sweep)) {
      trace.samples.push_back(snapshot(state, counts, sweep));
      tally.sender += counts.m1.cast<double>();
      tally.receiver += counts.m2.cast<double>();
      ++tally.sweeps;
    }
  }
  trace.labels = std::move(tally);
  return trace;
}

}  // namespace sgraphon
