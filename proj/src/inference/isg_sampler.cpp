#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sgraphon {

namespace {

constexpr double kMinRate = std::numeric_limits<double>::min();
constexpr double kMaxRate = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;

double cell_log_lik(bool linked, double g) { return bernoulli_log_prob(linked, std::clamp(g, 0.0, 1.0)); }

/// ISG chain with cached per-node weights and the full intensity matrix
/// G = W1 B W2^T. Acceptance ratios use the exact Bernoulli likelihood of
/// TRAIN cells under G.
class IsgChain {
 public:
  IsgChain(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg, LatentState state)
      : R_(R), h_(h), cfg_(cfg), state_(std::move(state)) {
    Eigen::MatrixXd B = state_.B.matrix().cwiseMax(kMinRate).cwiseMin(kMaxRate);
    state_.B = BlockIntensities<double>(std::move(B));
    w1_ = sender_weights(state_);
    w2_ = receiver_weights(state_);
    refresh_intensity();
  }

  void sweep(Rng& rng, AcceptanceLog& log) {
    if (cfg_.updates.coordinates) update_coordinates(rng, log);
    if (cfg_.updates.theta) update_segments(rng, log);
    if (cfg_.updates.blocks) update_blocks(rng, log);
    if (cfg_.updates.lambda) update_smoothing(rng, log);
  }

  TraceSample snapshot(std::size_t sweep) const {
    TraceSample s;
    s.sweep = sweep;
    s.lambda = state_.lambda.value();
    s.theta1 = state_.partition.dim1().theta();
    s.theta2 = state_.partition.dim2().theta();
    s.B = state_.B.matrix();
    s.train_log_likelihood = total_log_lik(g_);
    s.u1 = state_.u1;
    s.u2 = state_.u2;
    return s;
  }

 private:
  void refresh_intensity() { g_ = w1_ * state_.B.matrix() * w2_.transpose(); }

  double total_log_lik(const Eigen::MatrixXd& g) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < R_.size(); ++i)
      for (Eigen::Index j = 0; j < R_.size(); ++j)
        if (R_.is_train(i, j)) total += cell_log_lik(R_(i, j), g(i, j));
    return total;
  }

  void update_coordinates(Rng& rng, AcceptanceLog& log) {
    const Eigen::Index n = R_.size();
    const std::uint64_t base1 = rng.next_seed();
    const std::uint64_t base2 = rng.next_seed();

    // Senders: g_ij = w1_i . (B w2_j); the right factor is fixed while u1 moves.
    const Eigen::MatrixXd right = state_.B.matrix() * w2_.transpose();  // K x n
    Eigen::RowVectorXd proposed_row(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Rng task = Rng::substream(base1, {static_cast<std::uint64_t>(i)});
      const double proposal = task.beta(cfg_.alpha_u, cfg_.beta_u);
      const Eigen::RowVectorXd w = segment_weights(proposal, state_.partition.dim1(), state_.lambda).transpose();
      proposed_row = w * right;
      double delta = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (R_.is_train(i, j)) delta += cell_log_lik(R_(i, j), proposed_row(j)) - cell_log_lik(R_(i, j), g_(i, j));
      const double log_ratio = detail::log_beta_density(state_.u1(i), cfg_.alpha_u, cfg_.beta_u) -
                               detail::log_beta_density(proposal, cfg_.alpha_u, cfg_.beta_u) + delta;
      const bool accept = metropolis_accept(log_ratio, task);
      if (accept) {
        state_.u1(i) = proposal;
        w1_.row(i) = w;
        g_.row(i) = proposed_row;
      }
      log["u1"].record(accept);
    }

    // Receivers: g_ij = (w1_i B) . w2_j.
    const Eigen::MatrixXd left = w1_ * state_.B.matrix();  // n x K
    Eigen::VectorXd proposed_col(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Rng task = Rng::substream(base2, {static_cast<std::uint64_t>(j)});
      const double proposal = task.beta(cfg_.alpha_u, cfg_.beta_u);
      const Eigen::VectorXd w = segment_weights(proposal, state_.partition.dim2(), state_.lambda);
      proposed_col = left * w;
      double delta = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (R_.is_train(i, j)) delta += cell_log_lik(R_(i, j), proposed_col(i)) - cell_log_lik(R_(i, j), g_(i, j));
      const double log_ratio = detail::log_beta_density(state_.u2(j), cfg_.alpha_u, cfg_.beta_u) -
                               detail::log_beta_density(proposal, cfg_.alpha_u, cfg_.beta_u) + delta;
      const bool accept = metropolis_accept(log_ratio, task);
      if (accept) {
        state_.u2(j) = proposal;
        w2_.row(j) = w.transpose();
        g_.col(j) = proposed_col;
      }
      log["u2"].record(accept);
    }
  }

  void update_segments(Rng& rng, AcceptanceLog& log) {
    const double current = total_log_lik(g_);
    SegmentDistribution<double> proposal1(rng.dirichlet(h_.concentration));
    Eigen::MatrixXd w1 = weight_matrix(state_.u1, proposal1, state_.lambda);
    Eigen::MatrixXd g1 = w1 * state_.B.matrix() * w2_.transpose();
    const double ll1 = total_log_lik(g1);
    const bool accept1 = metropolis_accept(ll1 - current, rng);
    log["theta1"].record(accept1);
    double reference = current;
    if (accept1) {
      state_.partition = Partition<double>(std::move(proposal1), state_.partition.dim2());
      w1_ = std::move(w1);
      g_ = std::move(g1);
      reference = ll1;
    }

    SegmentDistribution<double> proposal2(rng.dirichlet(h_.concentration));
    Eigen::MatrixXd w2 = weight_matrix(state_.u2, proposal2, state_.lambda);
    Eigen::MatrixXd g2 = w1_ * state_.B.matrix() * w2.transpose();
    const bool accept2 = metropolis_accept(total_log_lik(g2) - reference, rng);
    log["theta2"].record(accept2);
    if (accept2) {
      state_.partition = Partition<double>(state_.partition.dim1(), std::move(proposal2));
      w2_ = std::move(w2);
      g_ = std::move(g2);
    }
  }

  // Logit-scale random walk per entry; the Beta prior contributes
  // alpha0 log b + beta0 log(1 - b) once the logit Jacobian b(1 - b) is included.
  void update_blocks(Rng& rng, AcceptanceLog& log) {
    const Eigen::Index K = state_.groups();
    const Eigen::Index n = R_.size();
    for (Eigen::Index k1 = 0; k1 < K; ++k1) {
      for (Eigen::Index k2 = 0; k2 < K; ++k2) {
        if (!detail::block_is_free(cfg_, k1, k2)) continue;
        const double b = state_.B(k1, k2);
        const double logit = std::log(b) - std::log1p(-b);
        const double step = cfg_.sigma_B * rng.normal();
        const double b_new = std::clamp(1.0 / (1.0 + std::exp(-(logit + step))), kMinRate, kMaxRate);
        const double diff = b_new - b;
        double delta = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double a = w1_(i, k1) * diff;
          if (a == 0.0) continue;
          for (Eigen::Index j = 0; j < n; ++j)
            if (R_.is_train(i, j))
              delta += cell_log_lik(R_(i, j), g_(i, j) + a * w2_(j, k2)) - cell_log_lik(R_(i, j), g_(i, j));
        }
        const double log_ratio = delta + h_.alpha0 * (std::log(b_new) - std::log(b)) +
                                 h_.beta0 * (std::log1p(-b_new) - std::log1p(-b));
        const bool accept = metropolis_accept(log_ratio, rng);
        log["B"].record(accept);
        if (accept) {
          state_.B.set(k1, k2, b_new);
          g_.noalias() += diff * w1_.col(k1) * w2_.col(k2).transpose();
        }
      }
    }
    refresh_intensity();
  }

  void update_smoothing(Rng& rng, AcceptanceLog& log) {
    const double proposal = rng.gamma(h_.lambda_shape, h_.lambda_rate);
    bool accept = false;
    if (proposal > 0.0 && std::isfinite(proposal)) {
      const SmoothingParameter<double> lambda(proposal);
      Eigen::MatrixXd w1 = weight_matrix(state_.u1, state_.partition.dim1(), lambda);
      Eigen::MatrixXd w2 = weight_matrix(state_.u2, state_.partition.dim2(), lambda);
      Eigen::MatrixXd g = w1 * state_.B.matrix() * w2.transpose();
      accept = metropolis_accept(total_log_lik(g) - total_log_lik(g_), rng);
      if (accept) {
        state_.lambda = lambda;
        w1_ = std::move(w1);
        w2_ = std::move(w2);
        g_ = std::move(g);
      }
    }
    log["lambda"].record(accept);
  }

  const RelationalMatrix& R_;
  const Hyperparameters& h_;
  const SamplerConfig& cfg_;
  LatentState state_;
  Eigen::MatrixXd w1_;
  Eigen::MatrixXd w2_;
  Eigen::MatrixXd g_;
};

}  // namespace

Trace run_isg_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg) {
  detail::check_chain_inputs(R, h, cfg, ModelKind::isg);
  IsgChain chain(R, h, cfg, detail::initial_latent_state(R, h, cfg, ModelKind::isg));
  Trace trace;
  trace.kind = ModelKind::isg;
  trace.n = R.size();
  trace.K = h.groups();
  trace.samples.reserve(cfg.retained_samples());
  // Sweep order: coordinates, segment distributions, block intensities, smoothing.
  for (std::size_t sweep = 1; sweep <= cfg.iterations; ++sweep) {
    Rng rng = Rng::substream(cfg.seed, {sweep});
    chain.sweep(rng, trace.acceptance);
    if (detail::is_retained(cfg, sweep)) trace.samples.push_back(chain.snapshot(sweep));
  }
  return trace;
}

}  // namespace sgraphon
