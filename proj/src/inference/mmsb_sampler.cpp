#include "internal.hpp"

#include <limits>

namespace sgraphon {

Trace run_mmsb_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg) {
  detail::check_chain_inputs(R, h, cfg, ModelKind::mmsb);
  const Eigen::Index n = R.size();
  const Eigen::Index K = h.groups();

  MmsbState state = [&] {
    if (cfg.initial_mmsb) {
      MmsbState s = *cfg.initial_mmsb;
      if (s.size() != n || s.groups() != K) throw UsageError("initial MMSB state does not match the data or K");
      s.validate();
      return s;
    }
    Rng init = Rng::substream(cfg.seed, {0});
    return sample_mmsb_prior(h, n, init);
  }();
  if (!state.labels_s || !state.labels_r) {
    Rng init = Rng::substream(cfg.seed, {0, 1});
    LabelMatrix s, r;
    detail::draw_prior_labels(R, state.F, state.F, s, r, init);
    state.labels_s = std::move(s);
    state.labels_r = std::move(r);
  }
  SufficientCounts counts = counts_from_labels(*state.labels_s, *state.labels_r, R, K);

  Trace trace;
  trace.kind = ModelKind::mmsb;
  trace.n = n;
  trace.K = K;
  trace.samples.reserve(cfg.retained_samples());
  LabelTally tally{Eigen::MatrixXd::Zero(n, K), Eigen::MatrixXd::Zero(n, K), 0};

  // Sweep order: labels, memberships, block intensities.
  for (std::size_t sweep = 1; sweep <= cfg.iterations; ++sweep) {
    Rng rng = Rng::substream(cfg.seed, {sweep});
    if (cfg.updates.labels) {
      const Eigen::MatrixXd log_f = detail::floored_log(state.F);
      detail::resample_labels(log_f, log_f, state.B, R, *state.labels_s, *state.labels_r, rng, &counts);
    }
    if (cfg.updates.memberships) {
      const std::uint64_t base = rng.next_seed();
      for (Eigen::Index i = 0; i < n; ++i) {
        Rng task = Rng::substream(base, {static_cast<std::uint64_t>(i)});
        const Eigen::VectorXd posterior =
            h.concentration + (counts.m1.row(i) + counts.m2.row(i)).transpose().cast<double>();
        state.F.row(i) = task.dirichlet(posterior).transpose();
      }
    }
    if (cfg.updates.blocks) state.B = detail::conjugate_blocks(state.B, counts, h, cfg, rng);

    if (cfg.recount_every && sweep % cfg.recount_every == 0)
      detail::verify_counts(counts, *state.labels_s, *state.labels_r, R, K, sweep);

    if (detail::is_retained(cfg, sweep)) {
      TraceSample s;
      s.sweep = sweep;
      s.lambda = std::numeric_limits<double>::quiet_NaN();
      s.B = state.B.matrix();
      s.train_log_likelihood = detail::labelled_log_likelihood(counts, state.B);
      s.F = state.F;
      trace.samples.push_back(std::move(s));
      tally.sender += counts.m1.cast<double>();
      tally.receiver += counts.m2.cast<double>();
      ++tally.sweeps;
    }
  }
  trace.labels = std::move(tally);
  return trace;
}

}  // namespace sgraphon
