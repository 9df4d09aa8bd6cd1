#include "sgraphon/models.hpp"

#include "sgraphon/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sgraphon {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::sbm: return "sbm";
    case ModelKind::isg: return "isg";
    case ModelKind::lfsg: return "lfsg";
    case ModelKind::mmsb: return "mmsb";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "sbm") return ModelKind::sbm;
  if (name == "isg") return ModelKind::isg;
  if (name == "lfsg") return ModelKind::lfsg;
  if (name == "mmsb") return ModelKind::mmsb;
  throw UsageError("unknown model '" + std::string(name) + "' (expected sbm, isg, lfsg or mmsb)");
}

Hyperparameters Hyperparameters::symmetric(Eigen::Index K, double alpha0, double beta0, double concentration) {
  Hyperparameters h;
  h.alpha0 = alpha0;
  h.beta0 = beta0;
  h.concentration = Eigen::VectorXd::Constant(K, concentration);
  return h;
}

void Hyperparameters::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(alpha0) || !positive(beta0)) throw UsageError("alpha0 and beta0 must be positive");
  if (concentration.size() < 1) throw UsageError("K must be at least 1");
  for (Eigen::Index k = 0; k < concentration.size(); ++k)
    if (!positive(concentration(k))) throw UsageError("Dirichlet concentration must be positive");
  if (!positive(lambda_shape) || !positive(lambda_rate)) throw UsageError("lambda prior parameters must be positive");
}

namespace {

void check_labels(const LabelMatrix& labels, Eigen::Index n, Eigen::Index K, const char* what) {
  if (labels.rows() != n || labels.cols() != n)
    throw std::invalid_argument(std::string(what) + " must be n x n");
  if (labels.size() > 0 && (labels.minCoeff() < 0 || labels.maxCoeff() >= K))
    throw std::invalid_argument(std::string(what) + " out of range");
}

void check_coords(const Eigen::VectorXd& u, Eigen::Index n) {
  if (u.size() != n) throw std::invalid_argument("coordinate vectors must have equal length");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(u(i) >= 0.0 && u(i) <= 1.0)) throw std::invalid_argument("coordinates must lie in [0, 1]");
}

void require_kind(const LatentState& state, ModelKind expected) {
  if (state.kind != expected)
    throw std::invalid_argument("state of kind '" + std::string(to_string(state.kind)) +
                                "' passed to the " + std::string(to_string(expected)) + " generator");
}

}  // namespace

void LatentState::validate() const {
  const Eigen::Index n = size();
  const Eigen::Index K = groups();
  if (kind == ModelKind::mmsb) throw std::invalid_argument("MMSB uses MmsbState");
  if (B.groups() != K) throw std::invalid_argument("B must be K x K");
  check_coords(u1, n);
  check_coords(u2, n);
  const bool has_labels = labels_s || labels_r;
  const bool has_z = z1 || z2;
  if (has_labels && kind != ModelKind::lfsg) throw std::invalid_argument("pairwise labels are LFSG-only");
  if (has_z && kind != ModelKind::sbm) throw std::invalid_argument("node labels are SBM-only");
  if (has_labels) {
    if (!labels_s || !labels_r) throw std::invalid_argument("sender and receiver labels come together");
    check_labels(*labels_s, n, K, "sender labels");
    check_labels(*labels_r, n, K, "receiver labels");
  }
  if (has_z) {
    if (!z1 || !z2) throw std::invalid_argument("z1 and z2 come together");
    if (z1->size() != n || z2->size() != n) throw std::invalid_argument("node labels must have length n");
    if (n > 0 && (z1->minCoeff() < 0 || z2->minCoeff() < 0 || z1->maxCoeff() >= K || z2->maxCoeff() >= K))
      throw std::invalid_argument("node labels out of range");
  }
}

void MmsbState::validate() const {
  if (B.groups() != groups()) throw std::invalid_argument("B must be K x K");
  for (Eigen::Index i = 0; i < F.rows(); ++i) {
    if ((F.row(i).array() < 0.0).any() || std::abs(F.row(i).sum() - 1.0) > 1e-9)
      throw std::invalid_argument("each membership row must be a probability vector");
  }
  if (labels_s) check_labels(*labels_s, size(), groups(), "sender labels");
  if (labels_r) check_labels(*labels_r, size(), groups(), "receiver labels");
}

namespace {

BlockIntensities<double> draw_blocks(const Hyperparameters& h, Rng& rng) {
  const Eigen::Index K = h.groups();
  Eigen::MatrixXd B(K, K);
  for (Eigen::Index k1 = 0; k1 < K; ++k1)
    for (Eigen::Index k2 = 0; k2 < K; ++k2) B(k1, k2) = rng.beta(h.alpha0, h.beta0);
  return BlockIntensities<double>(std::move(B));
}

Eigen::VectorXd draw_coords(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.uniform();
  return u;
}

// Fill every cell of an n x n relation using per-row substreams; `draw(i, j, row_rng)`
// returns the sampled entry.
template <typename Draw>
RelationalMatrix fill_rows(Eigen::Index n, Rng& rng, Draw&& draw) {
  RelationalMatrix R(n);
  const std::uint64_t base = rng.next_seed();
  for (Eigen::Index i = 0; i < n; ++i) {
    Rng row_rng = Rng::substream(base, {static_cast<std::uint64_t>(i)});
    for (Eigen::Index j = 0; j < n; ++j) R.set(i, j, draw(i, j, row_rng));
  }
  return R;
}

}  // namespace

LatentState sample_prior(const Hyperparameters& h, Eigen::Index n, ModelKind kind, Rng& rng) {
  if (kind == ModelKind::mmsb) throw UsageError("use sample_mmsb_prior for the MMSB");
  if (n < 1) throw UsageError("n must be at least 1");
  h.validate();
  auto B = draw_blocks(h, rng);
  SegmentDistribution<double> theta1(rng.dirichlet(h.concentration));
  SegmentDistribution<double> theta2(rng.dirichlet(h.concentration));
  Eigen::VectorXd u1 = draw_coords(n, rng);
  Eigen::VectorXd u2 = draw_coords(n, rng);
  double lambda = rng.gamma(h.lambda_shape, h.lambda_rate);
  if (!(lambda > 0.0)) lambda = std::numeric_limits<double>::min();
  LatentState state{kind, Partition<double>(std::move(theta1), std::move(theta2)), std::move(B),
                    std::move(u1), std::move(u2), SmoothingParameter<double>(lambda),
                    std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  return state;
}

MmsbState sample_mmsb_prior(const Hyperparameters& h, Eigen::Index n, Rng& rng) {
  if (n < 1) throw UsageError("n must be at least 1");
  h.validate();
  auto B = draw_blocks(h, rng);
  Eigen::MatrixXd F(n, h.groups());
  for (Eigen::Index i = 0; i < n; ++i) F.row(i) = rng.dirichlet(h.concentration).transpose();
  return MmsbState{std::move(F), std::move(B), std::nullopt, std::nullopt};
}

Eigen::MatrixXd sender_weights(const LatentState& state) {
  return weight_matrix(state.u1, state.partition.dim1(), state.lambda);
}

Eigen::MatrixXd receiver_weights(const LatentState& state) {
  return weight_matrix(state.u2, state.partition.dim2(), state.lambda);
}

namespace {
LabelVector lookup_all(const Eigen::VectorXd& u, const SegmentDistribution<double>& seg) {
  LabelVector z(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) z(i) = static_cast<Label>(segment_lookup(u(i), seg));
  return z;
}
}  // namespace

RelationalMatrix generate_sbm(LatentState& state, Rng& rng) {
  require_kind(state, ModelKind::sbm);
  state.z1 = lookup_all(state.u1, state.partition.dim1());
  state.z2 = lookup_all(state.u2, state.partition.dim2());
  const auto& z1 = *state.z1;
  const auto& z2 = *state.z2;
  return fill_rows(state.size(), rng, [&](Eigen::Index i, Eigen::Index j, Rng& r) {
    return r.bernoulli(state.B(z1(i), z2(j)));
  });
}

RelationalMatrix generate_isg(const LatentState& state, Rng& rng) {
  require_kind(state, ModelKind::isg);
  const Eigen::MatrixXd g = intensity_matrix(state);
  return fill_rows(state.size(), rng, [&](Eigen::Index i, Eigen::Index j, Rng& r) {
    return r.bernoulli(g(i, j));
  });
}

RelationalMatrix generate_lfsg(LatentState& state, Rng& rng) {
  require_kind(state, ModelKind::lfsg);
  const Eigen::Index n = state.size();
  const Eigen::MatrixXd w1 = sender_weights(state);
  const Eigen::MatrixXd w2 = receiver_weights(state);
  LabelMatrix s(n, n), r(n, n);
  auto R = fill_rows(n, rng, [&](Eigen::Index i, Eigen::Index j, Rng& row_rng) {
    s(i, j) = static_cast<Label>(row_rng.categorical(w1.row(i)));
    r(i, j) = static_cast<Label>(row_rng.categorical(w2.row(j)));
    return row_rng.bernoulli(state.B(s(i, j), r(i, j)));
  });
  state.labels_s = std::move(s);
  state.labels_r = std::move(r);
  return R;
}

RelationalMatrix generate_mmsb(MmsbState& state, Rng& rng) {
  const Eigen::Index n = state.size();
  LabelMatrix s(n, n), r(n, n);
  auto R = fill_rows(n, rng, [&](Eigen::Index i, Eigen::Index j, Rng& row_rng) {
    s(i, j) = static_cast<Label>(row_rng.categorical(state.F.row(i)));
    r(i, j) = static_cast<Label>(row_rng.categorical(state.F.row(j)));
    return row_rng.bernoulli(state.B(s(i, j), r(i, j)));
  });
  state.labels_s = std::move(s);
  state.labels_r = std::move(r);
  return R;
}

Eigen::MatrixXd intensity_matrix(const LatentState& state) {
  if (state.kind == ModelKind::sbm) {
    const LabelVector z1 = state.z1 ? *state.z1 : lookup_all(state.u1, state.partition.dim1());
    const LabelVector z2 = state.z2 ? *state.z2 : lookup_all(state.u2, state.partition.dim2());
    Eigen::MatrixXd g(state.size(), state.size());
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = state.B(z1(i), z2(j));
    return g;
  }
  Eigen::MatrixXd g = sender_weights(state) * state.B.matrix() * receiver_weights(state).transpose();
  return g.cwiseMax(0.0).cwiseMin(1.0);
}

Eigen::MatrixXd intensity_matrix(const MmsbState& state) {
  return state.F * state.B.matrix() * state.F.transpose();
}

double log_likelihood(const LatentState& state, const RelationalMatrix& R) {
  const Eigen::Index n = R.size();
  if (state.size() != n) throw std::invalid_argument("state and relation sizes differ");
  double total = 0.0;
  if (state.kind == ModelKind::lfsg) {
    if (!state.labels_s || !state.labels_r) throw std::invalid_argument("LFSG likelihood needs labels");
    const auto& s = *state.labels_s;
    const auto& r = *state.labels_r;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (R.is_train(i, j)) total += bernoulli_log_prob(R(i, j), state.B(s(i, j), r(i, j)));
    return total;
  }
  const Eigen::MatrixXd g = intensity_matrix(state);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (R.is_train(i, j)) total += bernoulli_log_prob(R(i, j), g(i, j));
  return total;
}

double log_likelihood(const MmsbState& state, const RelationalMatrix& R) {
  if (!state.labels_s || !state.labels_r) throw std::invalid_argument("MMSB likelihood needs labels");
  const auto& s = *state.labels_s;
  const auto& r = *state.labels_r;
  double total = 0.0;
  for (Eigen::Index i = 0; i < R.size(); ++i)
    for (Eigen::Index j = 0; j < R.size(); ++j)
      if (R.is_train(i, j)) total += bernoulli_log_prob(R(i, j), state.B(s(i, j), r(i, j)));
  return total;
}

}  // namespace sgraphon
