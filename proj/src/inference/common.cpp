#include "internal.hpp"

#include "sgraphon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sgraphon {

void SamplerConfig::validate() const {
  if (iterations == 0) throw UsageError("iterations must be positive");
  if (burn_in >= iterations) throw UsageError("burn-in must be smaller than the iteration count");
  if (thin < 1) throw UsageError("thin must be at least 1");
  if (!(alpha_u > 0.0) || !(beta_u > 0.0)) throw UsageError("coordinate proposal parameters must be positive");
  if (!(sigma_B > 0.0)) throw UsageError("sigma_B must be positive");
}

bool metropolis_accept(double log_ratio, Rng& rng) {
  const double u = rng.uniform();
  if (log_ratio >= 0.0) return true;
  return std::log(u) < log_ratio;
}

double log_accept_coordinate(double current, double proposal, const Eigen::VectorXi& label_counts,
                             const SegmentDistribution<double>& seg, SmoothingParameter<double> lambda,
                             double alpha_u, double beta_u) {
  const Eigen::VectorXd w_new = segment_weights(proposal, seg, lambda);
  const Eigen::VectorXd w_old = segment_weights(current, seg, lambda);
  double out = detail::log_beta_density(current, alpha_u, beta_u) - detail::log_beta_density(proposal, alpha_u, beta_u);
  for (Eigen::Index k = 0; k < label_counts.size(); ++k)
    if (label_counts(k) != 0)
      out += label_counts(k) * (detail::floored_log(w_new(k)) - detail::floored_log(w_old(k)));
  return out;
}

double log_accept_theta(const SegmentDistribution<double>& current, const SegmentDistribution<double>& proposal,
                        const Eigen::VectorXd& coords, const Eigen::MatrixXi& label_counts,
                        SmoothingParameter<double> lambda) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    if (label_counts.row(i).isZero()) continue;
    const Eigen::VectorXd w_new = segment_weights(coords(i), proposal, lambda);
    const Eigen::VectorXd w_old = segment_weights(coords(i), current, lambda);
    for (Eigen::Index k = 0; k < label_counts.cols(); ++k)
      if (label_counts(i, k) != 0)
        out += label_counts(i, k) * (detail::floored_log(w_new(k)) - detail::floored_log(w_old(k)));
  }
  return out;
}

namespace {

double axis_log_ratio(const Eigen::VectorXd& u, const SegmentDistribution<double>& seg, const Eigen::MatrixXi& m,
                      SmoothingParameter<double> current, SmoothingParameter<double> proposal) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (m.row(i).isZero()) continue;
    const Eigen::VectorXd w_new = segment_weights(u(i), seg, proposal);
    const Eigen::VectorXd w_old = segment_weights(u(i), seg, current);
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      if (m(i, k) != 0) out += m(i, k) * (detail::floored_log(w_new(k)) - detail::floored_log(w_old(k)));
  }
  return out;
}

}  // namespace

double log_accept_lambda(const LatentState& state, SmoothingParameter<double> proposal,
                         const SufficientCounts& counts) {
  const auto& p = state.partition;
  return axis_log_ratio(state.u1, p.dim1(), counts.m1, state.lambda, proposal) +
         axis_log_ratio(state.u2, p.dim2(), counts.m2, state.lambda, proposal);
}

Eigen::VectorXd label_conditional(const Eigen::VectorXd& weights, const BlockIntensities<double>& B, bool linked,
                                  Label partner, LabelSide side) {
  const Eigen::Index K = weights.size();
  Eigen::VectorXd log_p(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double b = side == LabelSide::sender ? B(k, partner) : B(partner, k);
    log_p(k) = detail::floored_log(weights(k)) + (linked ? std::log(b) : std::log1p(-b));
  }
  const double top = log_p.maxCoeff();
  if (!std::isfinite(top)) throw NumericalError("label conditional has no positive mass");
  Eigen::VectorXd p = (log_p.array() - top).exp();
  return p / p.sum();
}

void update_u(LatentState& state, const SufficientCounts& counts, const SamplerConfig& cfg, Rng& rng,
              AcceptanceLog* log) {
  const std::uint64_t base1 = rng.next_seed();
  const std::uint64_t base2 = rng.next_seed();
  auto sweep_axis = [&](Eigen::VectorXd& u, const SegmentDistribution<double>& seg, const Eigen::MatrixXi& m,
                        std::uint64_t base, const char* family) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      Rng task = Rng::substream(base, {static_cast<std::uint64_t>(i)});
      const double proposal = task.beta(cfg.alpha_u, cfg.beta_u);
      const Eigen::VectorXi row = m.row(i).transpose();
      const double log_ratio = log_accept_coordinate(u(i), proposal, row, seg, state.lambda, cfg.alpha_u, cfg.beta_u);
      const bool accept = metropolis_accept(log_ratio, task);
      if (accept) u(i) = proposal;
      if (log) (*log)[family].record(accept);
    }
  };
  sweep_axis(state.u1, state.partition.dim1(), counts.m1, base1, "u1");
  sweep_axis(state.u2, state.partition.dim2(), counts.m2, base2, "u2");
}

void update_theta(LatentState& state, const SufficientCounts& counts, const Hyperparameters& h, Rng& rng,
                  AcceptanceLog* log) {
  SegmentDistribution<double> dim1 = state.partition.dim1();
  SegmentDistribution<double> dim2 = state.partition.dim2();

  SegmentDistribution<double> proposal1(rng.dirichlet(h.concentration));
  const bool accept1 = metropolis_accept(log_accept_theta(dim1, proposal1, state.u1, counts.m1, state.lambda), rng);
  if (accept1) dim1 = std::move(proposal1);

  SegmentDistribution<double> proposal2(rng.dirichlet(h.concentration));
  const bool accept2 = metropolis_accept(log_accept_theta(dim2, proposal2, state.u2, counts.m2, state.lambda), rng);
  if (accept2) dim2 = std::move(proposal2);

  state.partition = Partition<double>(std::move(dim1), std::move(dim2));
  if (log) {
    (*log)["theta1"].record(accept1);
    (*log)["theta2"].record(accept2);
  }
}

BlockIntensities<double> update_B(const SufficientCounts& counts, const Hyperparameters& h, Rng& rng) {
  const Eigen::Index K = counts.N1.rows();
  Eigen::MatrixXd B(K, K);
  for (Eigen::Index k1 = 0; k1 < K; ++k1)
    for (Eigen::Index k2 = 0; k2 < K; ++k2)
      B(k1, k2) = rng.beta(h.alpha0 + counts.N1(k1, k2), h.beta0 + counts.N0(k1, k2));
  return BlockIntensities<double>(std::move(B));
}

void update_labels(LatentState& state, const RelationalMatrix& R, Rng& rng, SufficientCounts* counts) {
  if (!state.labels_s || !state.labels_r) throw std::invalid_argument("label update needs an LFSG state with labels");
  detail::resample_labels(detail::floored_log(sender_weights(state)), detail::floored_log(receiver_weights(state)),
                          state.B, R, *state.labels_s, *state.labels_r, rng, counts);
}

void update_lambda(LatentState& state, const SufficientCounts& counts, const Hyperparameters& h, Rng& rng,
                   AcceptanceLog* log) {
  const double proposal = rng.gamma(h.lambda_shape, h.lambda_rate);
  bool accept = false;
  if (proposal > 0.0 && std::isfinite(proposal)) {
    const SmoothingParameter<double> candidate(proposal);
    accept = metropolis_accept(log_accept_lambda(state, candidate, counts), rng);
    if (accept) state.lambda = candidate;
  }
  if (log) (*log)["lambda"].record(accept);
}

namespace detail {

void resample_labels(const Eigen::MatrixXd& log_w1, const Eigen::MatrixXd& log_w2, const BlockIntensities<double>& B,
                     const RelationalMatrix& R, LabelMatrix& s, LabelMatrix& r, Rng& rng, SufficientCounts* counts) {
  const Eigen::Index n = R.size();
  const Eigen::Index K = B.groups();
  const Eigen::MatrixXd log_b = B.matrix().array().log();
  const Eigen::MatrixXd log_1mb = (-B.matrix().array()).log1p();
  const std::uint64_t base_s = rng.next_seed();
  const std::uint64_t base_r = rng.next_seed();
  Eigen::VectorXd log_p(K);

  for (Eigen::Index i = 0; i < n; ++i) {
    Rng task = Rng::substream(base_s, {static_cast<std::uint64_t>(i)});
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!R.is_train(i, j)) continue;
      const bool linked = R(i, j);
      const Label partner = r(i, j);
      for (Eigen::Index k = 0; k < K; ++k)
        log_p(k) = log_w1(i, k) + (linked ? log_b(k, partner) : log_1mb(k, partner));
      const auto next = static_cast<Label>(detail::sample_log_categorical(log_p, task));
      const Label prev = s(i, j);
      if (next == prev) continue;
      s(i, j) = next;
      if (counts) {
        --counts->m1(i, prev);
        ++counts->m1(i, next);
        auto& N = linked ? counts->N1 : counts->N0;
        --N(prev, partner);
        ++N(next, partner);
      }
    }
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    Rng task = Rng::substream(base_r, {static_cast<std::uint64_t>(j)});
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!R.is_train(i, j)) continue;
      const bool linked = R(i, j);
      const Label partner = s(i, j);
      for (Eigen::Index k = 0; k < K; ++k)
        log_p(k) = log_w2(j, k) + (linked ? log_b(partner, k) : log_1mb(partner, k));
      const auto next = static_cast<Label>(detail::sample_log_categorical(log_p, task));
      const Label prev = r(i, j);
      if (next == prev) continue;
      r(i, j) = next;
      if (counts) {
        --counts->m2(j, prev);
        ++counts->m2(j, next);
        auto& N = linked ? counts->N1 : counts->N0;
        --N(partner, prev);
        ++N(partner, next);
      }
    }
  }
}


BlockIntensities<double> conjugate_blocks(const BlockIntensities<double>& current, const SufficientCounts& counts,
                                          const Hyperparameters& h, const SamplerConfig& cfg, Rng& rng) {
  BlockIntensities<double> drawn = update_B(counts, h, rng);
  if (cfg.free_blocks.size() == 0) return drawn;
  for (Eigen::Index k1 = 0; k1 < drawn.groups(); ++k1)
    for (Eigen::Index k2 = 0; k2 < drawn.groups(); ++k2)
      if (!block_is_free(cfg, k1, k2)) drawn.set(k1, k2, current(k1, k2));
  return drawn;
}

double labelled_log_likelihood(const SufficientCounts& counts, const BlockIntensities<double>& B) {
  double total = 0.0;
  for (Eigen::Index k1 = 0; k1 < B.groups(); ++k1)
    for (Eigen::Index k2 = 0; k2 < B.groups(); ++k2) {
      if (counts.N1(k1, k2)) total += counts.N1(k1, k2) * std::log(B(k1, k2));
      if (counts.N0(k1, k2)) total += counts.N0(k1, k2) * std::log1p(-B(k1, k2));
    }
  return total;
}

void check_chain_inputs(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg,
                        ModelKind expected) {
  cfg.validate();
  h.validate();
  if (cfg.model != expected)
    throw UsageError("sampler for '" + std::string(to_string(expected)) + "' configured with model '" +
                     std::string(to_string(cfg.model)) + "'");
  const Eigen::Index K = h.groups();
  if (cfg.free_blocks.size() != 0 && (cfg.free_blocks.rows() != K || cfg.free_blocks.cols() != K))
    throw UsageError("free-block mask must be K x K");
}

LatentState initial_latent_state(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg,
                                 ModelKind kind) {
  if (cfg.initial_state) {
    LatentState state = *cfg.initial_state;
    if (state.kind != kind) throw UsageError("initial state kind does not match the sampler");
    if (state.size() != R.size()) throw UsageError("initial state size does not match the data");
    if (state.groups() != h.groups()) throw UsageError("initial state K does not match the hyperparameters");
    state.validate();
    return state;
  }
  Rng init = Rng::substream(cfg.seed, {0});
  return sample_prior(h, R.size(), kind, init);
}

void draw_prior_labels(const RelationalMatrix& R, const Eigen::MatrixXd& sender, const Eigen::MatrixXd& receiver,
                       LabelMatrix& s, LabelMatrix& r, Rng& rng) {
  const Eigen::Index n = R.size();
  s = LabelMatrix::Zero(n, n);
  r = LabelMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!R.is_train(i, j)) continue;
      s(i, j) = static_cast<Label>(rng.categorical(sender.row(i)));
      r(i, j) = static_cast<Label>(rng.categorical(receiver.row(j)));
    }
}

}  // namespace detail

Trace run_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::lfsg: return run_lfsg_sampler(R, h, cfg);
    case ModelKind::isg: return run_isg_sampler(R, h, cfg);
    case ModelKind::sbm: return run_sbm_sampler(R, h, cfg);
    case ModelKind::mmsb: return run_mmsb_sampler(R, h, cfg);
  }
  throw UsageError("unknown model");
}

Eigen::VectorXd link_intensities(const LatentState& state, const CellList& cells) {
  const Eigen::MatrixXd w1 = sender_weights(state);
  const Eigen::MatrixXd w2 = receiver_weights(state);
  // (w1 B)_i . w2_j; the K x K product is folded into each sender row once.
  const Eigen::MatrixXd v1 = w1 * state.B.matrix();
  Eigen::VectorXd out(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto [i, j] = cells[c];
    out(static_cast<Eigen::Index>(c)) = std::clamp(v1.row(i).dot(w2.row(j)), 0.0, 1.0);
  }
  return out;
}

namespace {

LatentState sample_state(const Trace& trace, const TraceSample& s) {
  return LatentState{trace.kind,
                     Partition<double>(SegmentDistribution<double>(s.theta1), SegmentDistribution<double>(s.theta2)),
                     BlockIntensities<double>(s.B),
                     s.u1,
                     s.u2,
                     SmoothingParameter<double>(s.lambda),
                     std::nullopt, std::nullopt, std::nullopt, std::nullopt};
}

}  // namespace

Eigen::VectorXd posterior_predictive(const Trace& trace, const CellList& cells) {
  if (trace.samples.empty()) throw UsageError("posterior predictive needs at least one retained sample");
  Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cells.size()));
  for (const auto& s : trace.samples) {
    switch (trace.kind) {
      case ModelKind::isg:
      case ModelKind::lfsg:
        total += link_intensities(sample_state(trace, s), cells);
        break;
      case ModelKind::sbm:
        for (std::size_t c = 0; c < cells.size(); ++c)
          total(static_cast<Eigen::Index>(c)) += s.B(s.z1(cells[c].first), s.z2(cells[c].second));
        break;
      case ModelKind::mmsb: {
        const Eigen::MatrixXd v = s.F * s.B;
        for (std::size_t c = 0; c < cells.size(); ++c)
          total(static_cast<Eigen::Index>(c)) += v.row(cells[c].first).dot(s.F.row(cells[c].second));
        break;
      }
    }
  }
  return total / static_cast<double>(trace.samples.size());
}

Eigen::MatrixXd posterior_mean_grid(const Trace& trace, Eigen::Index resolution, std::optional<GridMode> mode) {
  if (trace.samples.empty()) throw UsageError("posterior grid needs at least one retained sample");
  if (trace.kind == ModelKind::mmsb) throw UsageError("the MMSB has no graphon to export");
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(resolution, resolution);
  for (const auto& s : trace.samples) {
    const Partition<double> p(SegmentDistribution<double>(s.theta1), SegmentDistribution<double>(s.theta2));
    const BlockIntensities<double> B(s.B);
    const bool piecewise = mode ? *mode == GridMode::piecewise : trace.kind == ModelKind::sbm || std::isinf(s.lambda);
    if (piecewise)
      total += intensity_grid(p, B, SmoothingParameter<double>(1.0), resolution, GridMode::piecewise);
    else
      total += intensity_grid(p, B, SmoothingParameter<double>(s.lambda), resolution, GridMode::smooth);
  }
  return total / static_cast<double>(trace.samples.size());
}

}  // namespace sgraphon
