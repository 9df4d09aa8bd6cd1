#pragma once

#include "sgraphon/graphon.hpp"
#include "sgraphon/relational_data.hpp"
#include "sgraphon/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <variant>

namespace sgraphon {

enum class ModelKind { sbm, isg, lfsg, mmsb };

std::string_view to_string(ModelKind kind);
/// Accepts "sbm", "isg", "lfsg", "mmsb"; throws UsageError otherwise.
ModelKind parse_model_kind(std::string_view name);

using Label = std::int32_t;
using LabelMatrix = Eigen::Matrix<Label, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using LabelVector = Eigen::Matrix<Label, Eigen::Dynamic, 1>;

/// Floor applied to segment weights and probabilities before taking logs.
inline constexpr double kWeightFloor = 1e-300;

struct Hyperparameters {
  double alpha0 = 1.0;           // Beta shape for block intensities
  double beta0 = 1.0;
  Eigen::VectorXd concentration;  // Dirichlet parameter for segment distributions (length K)
  double lambda_shape = 1.0;      // Gamma prior on the smoothing parameter
  double lambda_rate = 1.0;

  static Hyperparameters symmetric(Eigen::Index K, double alpha0, double beta0, double concentration = 1.0);
  Eigen::Index groups() const { return concentration.size(); }
  void validate() const;  // throws UsageError
};

/// Coordinates, partition, block rates and smoothing for the SBM, ISG and LFSG.
///
/// Labels are 0-based. SBM states carry per-node labels z1/z2; LFSG states carry
/// per-cell labels (s, r); ISG states carry neither.
struct LatentState {
  ModelKind kind;
  Partition<double> partition;
  BlockIntensities<double> B;
  Eigen::VectorXd u1;
  Eigen::VectorXd u2;
  SmoothingParameter<double> lambda;
  std::optional<LabelMatrix> labels_s;
  std::optional<LabelMatrix> labels_r;
  std::optional<LabelVector> z1;
  std::optional<LabelVector> z2;

  Eigen::Index size() const { return u1.size(); }
  Eigen::Index groups() const { return partition.groups(); }
  void validate() const;  // throws std::invalid_argument
};

/// Mixed-membership baseline: one group distribution per node (rows of F).
struct MmsbState {
  Eigen::MatrixXd F;
  BlockIntensities<double> B;
  std::optional<LabelMatrix> labels_s;
  std::optional<LabelMatrix> labels_r;

  Eigen::Index size() const { return F.rows(); }
  Eigen::Index groups() const { return F.cols(); }
  void validate() const;
};

LatentState sample_prior(const Hyperparameters& h, Eigen::Index n, ModelKind kind, Rng& rng);
MmsbState sample_mmsb_prior(const Hyperparameters& h, Eigen::Index n, Rng& rng);

/// Rows of R are drawn from per-row substreams keyed off one value taken from rng.
RelationalMatrix generate_sbm(LatentState& state, Rng& rng);
RelationalMatrix generate_isg(const LatentState& state, Rng& rng);
RelationalMatrix generate_lfsg(LatentState& state, Rng& rng);
RelationalMatrix generate_mmsb(MmsbState& state, Rng& rng);

/// Per-node weight matrices (n x K) for each axis.
Eigen::MatrixXd sender_weights(const LatentState& state);
Eigen::MatrixXd receiver_weights(const LatentState& state);

/// n x n edge probabilities implied by the state marginally over any labels:
/// mixture intensity for ISG/LFSG, B[z1_i, z2_j] for SBM.
Eigen::MatrixXd intensity_matrix(const LatentState& state);
/// F_i^T B F_j for every pair.
Eigen::MatrixXd intensity_matrix(const MmsbState& state);

/// log P(R = r | p) for one Bernoulli cell; -inf when p rules out r.
inline double bernoulli_log_prob(bool r, double p) { return r ? std::log(p) : std::log1p(-p); }

/// Sum of Bernoulli log-probabilities over TRAIN cells. ISG uses the mixture
/// intensity, LFSG the labelled B[s, r], SBM B[z1, z2].
double log_likelihood(const LatentState& state, const RelationalMatrix& R);
double log_likelihood(const MmsbState& state, const RelationalMatrix& R);

/// Flat "key = values" snapshot: kind, n, K, theta1, theta2, B (row-major), u1, u2,
/// lambda, plus z1/z2 when present. MMSB snapshots hold kind, n, K, B and F.
void write_state(std::ostream& out, const LatentState& state);
void write_state(std::ostream& out, const MmsbState& state);
std::variant<LatentState, MmsbState> read_state(std::istream& in);

}  // namespace sgraphon
