#pragma once

// MCMC posterior samplers for the LFSG, ISG, SBM and MMSB.
//
// Every sweep s of a chain seeded with `seed` draws from Rng::substream(seed, {s});
// inside a sweep, per-node and per-row work uses further substreams keyed by the
// node or row index, so the result does not depend on the order those tasks run.

#include "sgraphon/graphon.hpp"
#include "sgraphon/models.hpp"
#include "sgraphon/relational_data.hpp"
#include "sgraphon/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sgraphon {

/// Label tallies over TRAIN cells.
///
/// m1(i, k) = #{j : s_ij = k}, m2(i, k) = #{j : r_ji = k},
/// N1/N0(k1, k2) = number of linked / unlinked cells labelled (k1, k2).
struct SufficientCounts {
  Eigen::MatrixXi m1;
  Eigen::MatrixXi m2;
  Eigen::MatrixXi N1;
  Eigen::MatrixXi N0;

  bool operator==(const SufficientCounts& other) const;
};

/// Recount from scratch. Labels outside TRAIN cells are ignored; an
/// out-of-range label on a TRAIN cell throws std::invalid_argument.
SufficientCounts counts_from_labels(const LabelMatrix& labels_s, const LabelMatrix& labels_r,
                                    const RelationalMatrix& R, Eigen::Index K);

/// Which update families run each sweep. Disabled families keep their initial values.
struct UpdateSwitches {
  bool coordinates = true;
  bool theta = true;
  bool blocks = true;
  bool labels = true;
  bool lambda = true;
  bool memberships = true;  // MMSB rows of F
};

struct SamplerConfig {
  ModelKind model = ModelKind::lfsg;
  std::size_t iterations = 2000;
  std::size_t burn_in = 1000;
  std::size_t thin = 5;
  std::uint64_t seed = 0;
  double alpha_u = 1.0;  // Beta independence proposal for coordinates
  double beta_u = 1.0;
  double sigma_B = 0.2;  // ISG logit random-walk step
  UpdateSwitches updates;
  /// K x K, non-zero marks a block intensity the sampler may move. Empty means all.
  Eigen::MatrixXi free_blocks;
  std::optional<LatentState> initial_state;
  std::optional<MmsbState> initial_mmsb;
  /// Recount label statistics from scratch every this many sweeps and throw
  /// NumericalError on mismatch. 0 disables the check.
  std::size_t recount_every = 0;

  void validate() const;  // throws UsageError
  std::size_t retained_samples() const { return (iterations - burn_in) / thin; }
};

struct AcceptanceRate {
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  double rate() const { return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0; }
  void record(bool accept) {
    ++proposed;
    accepted += accept ? 1 : 0;
  }
};

using AcceptanceLog = std::map<std::string, AcceptanceRate>;

/// One retained posterior draw. Fields that do not apply to the model are empty;
/// lambda is +inf for the SBM and NaN for the MMSB.
struct TraceSample {
  std::size_t sweep = 0;
  double lambda = 0.0;
  Eigen::VectorXd theta1;
  Eigen::VectorXd theta2;
  Eigen::MatrixXd B;
  double train_log_likelihood = 0.0;
  Eigen::VectorXd u1;
  Eigen::VectorXd u2;
  LabelVector z1;
  LabelVector z2;
  Eigen::MatrixXd F;
};

/// Sender (m1) and receiver (m2) label counts pooled over retained sweeps.
struct LabelTally {
  Eigen::MatrixXd sender;
  Eigen::MatrixXd receiver;
  std::size_t sweeps = 0;
};

struct Trace {
  ModelKind kind = ModelKind::lfsg;
  Eigen::Index n = 0;
  Eigen::Index K = 0;
  std::vector<TraceSample> samples;
  AcceptanceLog acceptance;
  std::optional<LabelTally> labels;  // LFSG and MMSB only
};

// ---------------------------------------------------------------------------
// Acceptance ratios (log scale). Exposed so they can be checked in isolation.

/// Coordinate independence-MH ratio:
/// log Be(current) - log Be(proposal) + sum_k m_k (log w_k(proposal) - log w_k(current)).
double log_accept_coordinate(double current, double proposal, const Eigen::VectorXi& label_counts,
                             const SegmentDistribution<double>& seg, SmoothingParameter<double> lambda,
                             double alpha_u, double beta_u);

/// Segment-distribution ratio with a prior-draw proposal (prior terms cancel).
double log_accept_theta(const SegmentDistribution<double>& current, const SegmentDistribution<double>& proposal,
                        const Eigen::VectorXd& coords, const Eigen::MatrixXi& label_counts,
                        SmoothingParameter<double> lambda);

/// Smoothing-parameter ratio over both axes with a prior-draw proposal.
double log_accept_lambda(const LatentState& state, SmoothingParameter<double> proposal,
                         const SufficientCounts& counts);

enum class LabelSide { sender, receiver };

/// Exact conditional of one label: P(k) proportional to weights(k) * B^R (1 - B)^(1 - R),
/// where B is B(k, partner) for a sender label and B(partner, k) for a receiver label.
Eigen::VectorXd label_conditional(const Eigen::VectorXd& weights, const BlockIntensities<double>& B,
                                  bool linked, Label partner, LabelSide side);

/// log(uniform) < log_ratio; NaN never accepts.
bool metropolis_accept(double log_ratio, Rng& rng);

// ---------------------------------------------------------------------------
// LFSG update steps (one family each, in sweep order).

/// Both coordinate axes, one independence-MH step per node.
void update_u(LatentState& state, const SufficientCounts& counts, const SamplerConfig& cfg, Rng& rng,
              AcceptanceLog* log = nullptr);
void update_theta(LatentState& state, const SufficientCounts& counts, const Hyperparameters& h, Rng& rng,
                  AcceptanceLog* log = nullptr);
/// Conjugate draw B ~ Beta(alpha0 + N1, beta0 + N0) for every entry.
BlockIntensities<double> update_B(const SufficientCounts& counts, const Hyperparameters& h, Rng& rng);
/// All sender labels then all receiver labels on TRAIN cells. `counts`, when
/// given, is maintained incrementally.
void update_labels(LatentState& state, const RelationalMatrix& R, Rng& rng, SufficientCounts* counts = nullptr);
void update_lambda(LatentState& state, const SufficientCounts& counts, const Hyperparameters& h, Rng& rng,
                   AcceptanceLog* log = nullptr);

// ---------------------------------------------------------------------------
// Chains. R carries the TRAIN/TEST mask; TEST cells never enter a likelihood.

Trace run_lfsg_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg);
Trace run_isg_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg);
Trace run_sbm_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg);
Trace run_mmsb_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg);
/// Dispatch on cfg.model.
Trace run_sampler(const RelationalMatrix& R, const Hyperparameters& h, const SamplerConfig& cfg);

using CellList = std::vector<std::pair<Eigen::Index, Eigen::Index>>;

/// Mixture intensities for the listed cells, sharing one weight vector per node:
/// O(nK) weight evaluations plus O(K^2) per cell.
Eigen::VectorXd link_intensities(const LatentState& state, const CellList& cells);

/// Posterior mean edge probability for each cell, averaged over retained samples.
Eigen::VectorXd posterior_predictive(const Trace& trace, const CellList& cells);

/// Average intensity grid over retained samples. Without an explicit mode, samples
/// with finite lambda use the smooth graphon and SBM samples the piecewise one.
Eigen::MatrixXd posterior_mean_grid(const Trace& trace, Eigen::Index resolution,
                                    std::optional<GridMode> mode = std::nullopt);

/// CSV with header: sweep, lambda, theta1_*, theta2_*, B_k1_k2 (row-major), train_loglik.
void write_trace_csv(std::ostream& out, const Trace& trace);
/// Reads back the summary columns (no coordinates or labels). Throws DataError.
Trace read_trace_csv(std::istream& in, ModelKind kind);
/// "family = rate" lines in family-name order.
void write_acceptance(std::ostream& out, const Trace& trace);

}  // namespace sgraphon
