#include "sgraphon/errors.hpp"
#include "sgraphon/inference.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace sgraphon;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

std::vector<double> stdvec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

LatentState lfsg_state(const Eigen::VectorXd& t1, const Eigen::VectorXd& t2, const Eigen::MatrixXd& B,
                       Eigen::VectorXd u1, Eigen::VectorXd u2, double lambda) {
  return LatentState{ModelKind::lfsg,
                     Partition<double>(SegmentDistribution<double>(t1), SegmentDistribution<double>(t2)),
                     BlockIntensities<double>(B),
                     std::move(u1),
                     std::move(u2),
                     SmoothingParameter<double>(lambda),
                     std::nullopt, std::nullopt, std::nullopt, std::nullopt};
}

double beta_pdf(double x, double a, double b) {
  return std::pow(x, a - 1) * std::pow(1 - x, b - 1) / std::exp(oracle::log_beta_fn(a, b));
}

/// prod_k (w_new_k / w_old_k)^m_k in direct space.
double weight_ratio(const std::vector<long double>& w_new, const std::vector<long double>& w_old,
                    const Eigen::VectorXi& m) {
  long double r = 1.0L;
  for (Eigen::Index k = 0; k < m.size(); ++k) r *= std::pow(w_new[k] / w_old[k], static_cast<long double>(m(k)));
  return static_cast<double>(r);
}

/// Brute-force recount of every statistic with one loop per index.
SufficientCounts naive_counts(const LabelMatrix& s, const LabelMatrix& r, const RelationalMatrix& R, int K) {
  const int n = static_cast<int>(R.size());
  SufficientCounts c{Eigen::MatrixXi::Zero(n, K), Eigen::MatrixXi::Zero(n, K), Eigen::MatrixXi::Zero(K, K),
                     Eigen::MatrixXi::Zero(K, K)};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < n; ++j) {
        if (R.is_train(i, j) && s(i, j) == k) ++c.m1(i, k);
        if (R.is_train(j, i) && r(j, i) == k) ++c.m2(i, k);
      }
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (R.is_train(i, j) && s(i, j) == a && r(i, j) == b) ++(R(i, j) ? c.N1 : c.N0)(a, b);
  return c;
}

RelationalMatrix random_relation(int n, Rng& rng, double test_share = 0.3) {
  RelationalMatrix R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      R.set(i, j, rng.bernoulli(0.4));
      if (i != j && rng.bernoulli(test_share)) R.set_role(i, j, CellRole::test);
    }
  return R;
}

LabelMatrix random_labels(int n, int K, Rng& rng) {
  LabelMatrix L(n, n);
  for (int i = 0; i < n * n; ++i) L.data()[i] = static_cast<Label>(rng.uniform_index(K));
  return L;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sufficient counts

TEST(CountsFromLabels, SingleNodeHasNoCells) {
  const auto c = counts_from_labels(LabelMatrix::Zero(1, 1), LabelMatrix::Zero(1, 1), RelationalMatrix(1), 2);
  EXPECT_EQ(c.m1.sum() + c.m2.sum() + c.N1.sum() + c.N0.sum(), 0);
}

TEST(CountsFromLabels, TwoByTwoDirectCount) {
  RelationalMatrix R(2);
  R.set(0, 1, true);
  const auto c = counts_from_labels(LabelMatrix::Zero(2, 2), LabelMatrix::Zero(2, 2), R, 1);
  EXPECT_EQ(c.N1(0, 0), 1);
  EXPECT_EQ(c.N0(0, 0), 1);
  EXPECT_EQ(c.m1(0, 0), 1);
  EXPECT_EQ(c.m2(1, 0), 1);
}

TEST(CountsFromLabels, MatchesNaiveRecount) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto R = random_relation(5, rng);
    const auto s = random_labels(5, 3, rng), r = random_labels(5, 3, rng);
    EXPECT_EQ(counts_from_labels(s, r, R, 3), naive_counts(s, r, R, 3));
    const auto c = counts_from_labels(s, r, R, 3);
    EXPECT_EQ(c.N1.sum() + c.N0.sum(), static_cast<int>(R.cells_with_role(CellRole::train).size()));
  }
}

TEST(CountsFromLabels, OutOfRangeRejectedOnlyOnTrainCells) {
  RelationalMatrix R(2);
  LabelMatrix s = LabelMatrix::Zero(2, 2);
  s(0, 0) = 7;  // diagonal is excluded: ignored
  EXPECT_NO_THROW(counts_from_labels(s, LabelMatrix::Zero(2, 2), R, 2));
  s(0, 1) = 2;
  EXPECT_THROW(counts_from_labels(s, LabelMatrix::Zero(2, 2), R, 2), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Acceptance ratios against direct-space evaluation

TEST(LogAcceptCoordinate, EmptyCountsAndSameValue) {
  const SegmentDistribution<double> seg(vec({0.3, 0.7}));
  const SmoothingParameter<double> l(4.0);
  EXPECT_EQ(log_accept_coordinate(0.2, 0.9, Eigen::VectorXi::Zero(2), seg, l, 1.0, 1.0), 0.0);
  EXPECT_EQ(log_accept_coordinate(0.4, 0.4, Eigen::Vector2i(3, 5), seg, l, 2.0, 3.0), 0.0);
}

TEST(LogAcceptCoordinate, MatchesDirectFormula) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const Eigen::VectorXd theta = rng.dirichlet(Eigen::VectorXd::Ones(2));
    const double l = std::exp(rng.uniform() * 4.0 - 1.0);
    const double cur = rng.uniform(), prop = rng.uniform();
    const Eigen::VectorXi m(Eigen::Vector2i(static_cast<int>(rng.uniform_index(4)), static_cast<int>(rng.uniform_index(4))));
    const double au = 0.5 + 2.0 * rng.uniform(), bu = 0.5 + 2.0 * rng.uniform();
    const double direct = beta_pdf(cur, au, bu) / beta_pdf(prop, au, bu) *
                          weight_ratio(oracle::segment_weights(prop, stdvec(theta), l),
                                       oracle::segment_weights(cur, stdvec(theta), l), m);
    const double logged = log_accept_coordinate(cur, prop, m, SegmentDistribution<double>(theta),
                                                SmoothingParameter<double>(l), au, bu);
    EXPECT_NEAR(std::exp(logged), direct, 1e-10 * std::max(1.0, direct));
  }
}

TEST(LogAcceptTheta, EmptyCountsAndOracle) {
  Rng rng(3);
  const Eigen::VectorXd u = vec({0.15, 0.8});
  EXPECT_EQ(log_accept_theta(SegmentDistribution<double>(vec({0.5, 0.5})), SegmentDistribution<double>(vec({0.2, 0.8})),
                             u, Eigen::MatrixXi::Zero(2, 2), SmoothingParameter<double>(3.0)),
            0.0);
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd cur = rng.dirichlet(Eigen::VectorXd::Ones(2));
    const Eigen::VectorXd prop = rng.dirichlet(Eigen::VectorXd::Ones(2));
    Eigen::MatrixXi m(2, 2);
    for (int i = 0; i < 4; ++i) m.data()[i] = static_cast<int>(rng.uniform_index(4));
    const double l = 2.0;
    double direct = 1.0;
    for (int i = 0; i < 2; ++i)
      direct *= weight_ratio(oracle::segment_weights(u(i), stdvec(prop), l),
                             oracle::segment_weights(u(i), stdvec(cur), l), m.row(i).transpose());
    const double logged = log_accept_theta(SegmentDistribution<double>(cur), SegmentDistribution<double>(prop), u, m,
                                           SmoothingParameter<double>(l));
    EXPECT_NEAR(std::exp(logged), direct, 1e-10 * std::max(1.0, direct));
  }
}

TEST(LogAcceptLambda, EmptyCountsSameValueAndOracle) {
  Rng rng(4);
  Eigen::MatrixXd B(2, 2);
  B << 0.7, 0.2, 0.1, 0.6;
  const auto state = lfsg_state(vec({0.4, 0.6}), vec({0.7, 0.3}), B, vec({0.1, 0.55}), vec({0.35, 0.95}), 2.0);
  SufficientCounts zero{Eigen::MatrixXi::Zero(2, 2), Eigen::MatrixXi::Zero(2, 2), Eigen::MatrixXi::Zero(2, 2),
                        Eigen::MatrixXi::Zero(2, 2)};
  EXPECT_EQ(log_accept_lambda(state, SmoothingParameter<double>(9.0), zero), 0.0);
  SufficientCounts c = zero;
  c.m1 << 1, 0, 1, 1;
  c.m2 << 0, 2, 1, 0;
  EXPECT_EQ(log_accept_lambda(state, SmoothingParameter<double>(2.0), c), 0.0);
  for (int t = 0; t < 100; ++t) {
    const double prop = std::exp(rng.uniform() * 4.0 - 2.0);
    double direct = 1.0;
    for (int i = 0; i < 2; ++i) {
      direct *= weight_ratio(oracle::segment_weights(state.u1(i), {0.4, 0.6}, prop),
                             oracle::segment_weights(state.u1(i), {0.4, 0.6}, 2.0), c.m1.row(i).transpose());
      direct *= weight_ratio(oracle::segment_weights(state.u2(i), {0.7, 0.3}, prop),
                             oracle::segment_weights(state.u2(i), {0.7, 0.3}, 2.0), c.m2.row(i).transpose());
    }
    EXPECT_NEAR(std::exp(log_accept_lambda(state, SmoothingParameter<double>(prop), c)), direct,
                1e-10 * std::max(1.0, direct));
  }
}

TEST(MetropolisAccept, Edges) {
  Rng rng(5);
  EXPECT_TRUE(metropolis_accept(0.0, rng));
  EXPECT_TRUE(metropolis_accept(3.0, rng));
  EXPECT_FALSE(metropolis_accept(std::nan(""), rng));
  EXPECT_FALSE(metropolis_accept(-INFINITY, rng));
  int hits = 0;
  for (int i = 0; i < 20000; ++i) hits += metropolis_accept(std::log(0.3), rng);
  EXPECT_NEAR(hits / 20000.0, 0.3, 0.015);
}

// ---------------------------------------------------------------------------
// Label conditionals

TEST(LabelConditional, SingleGroupAndFlatRows) {
  const auto one = label_conditional(vec({1.0}), BlockIntensities<double>::constant(1, 0.3), true, 0, LabelSide::sender);
  EXPECT_DOUBLE_EQ(one(0), 1.0);
  Eigen::MatrixXd B(3, 3);
  B << 0.2, 0.2, 0.2, 0.5, 0.5, 0.5, 0.9, 0.9, 0.9;  // identical columns: receiver label irrelevant
  const Eigen::VectorXd w = vec({0.2, 0.3, 0.5});
  const auto p = label_conditional(w, BlockIntensities<double>(B), true, 1, LabelSide::receiver);
  EXPECT_NEAR((p - w).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(LabelConditional, MatchesHandNormalisation) {
  Eigen::MatrixXd B(2, 2);
  B << 0.8, 0.3, 0.1, 0.6;
  const Eigen::VectorXd w = vec({0.35, 0.65});
  // Sender label given receiver label 1 and a link: weights (0.35 * 0.3, 0.65 * 0.6).
  const double a = 0.35 * 0.3, b = 0.65 * 0.6;
  const auto p = label_conditional(w, BlockIntensities<double>(B), true, 1, LabelSide::sender);
  EXPECT_NEAR(p(0), a / (a + b), 1e-12);
  // Receiver label given sender label 0 and no link: weights (0.35 * 0.2, 0.65 * 0.7).
  const double c = 0.35 * 0.2, d = 0.65 * 0.7;
  const auto q = label_conditional(w, BlockIntensities<double>(B), false, 0, LabelSide::receiver);
  EXPECT_NEAR(q(1), d / (c + d), 1e-12);
}

TEST(LabelConditional, ImpossibleEverywhereIsNumericalError) {
  const auto B = BlockIntensities<double>::constant(2, 0.0);
  EXPECT_THROW(label_conditional(vec({0.5, 0.5}), B, true, 0, LabelSide::sender), NumericalError);
}

// ---------------------------------------------------------------------------
// Update steps

TEST(UpdateB, ConjugateMoments) {
  Rng rng(6);
  auto h = Hyperparameters::symmetric(1, 0.5, 0.5);
  SufficientCounts c{Eigen::MatrixXi::Zero(1, 1), Eigen::MatrixXi::Zero(1, 1), Eigen::MatrixXi::Constant(1, 1, 3),
                     Eigen::MatrixXi::Constant(1, 1, 2)};
  const int draws = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double b = update_B(c, h, rng)(0, 0);
    sum += b;
    sq += b * b;
  }
  const double a = 3.5, bb = 2.5;
  const double mean = a / (a + bb), var = a * bb / ((a + bb) * (a + bb) * (a + bb + 1));
  EXPECT_NEAR(sum / draws, mean, 3.0 * std::sqrt(var / draws));
  EXPECT_NEAR(sq / draws - (sum / draws) * (sum / draws), var, 0.03 * var);

  c.N1.setZero();
  c.N0.setZero();
  sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += update_B(c, h, rng)(0, 0);
  EXPECT_NEAR(sum / draws, 0.5, 3.0 * std::sqrt(0.125 / draws));
}

TEST(UpdateU, EmptyCountsAlwaysAccept) {
  Rng rng(7);
  auto state = lfsg_state(vec({0.5, 0.5}), vec({0.5, 0.5}), Eigen::MatrixXd::Constant(2, 2, 0.5), vec({0.1, 0.2, 0.3}),
                          vec({0.4, 0.5, 0.6}), 3.0);
  SufficientCounts zero{Eigen::MatrixXi::Zero(3, 2), Eigen::MatrixXi::Zero(3, 2), Eigen::MatrixXi::Zero(2, 2),
                        Eigen::MatrixXi::Zero(2, 2)};
  SamplerConfig cfg;
  AcceptanceLog log;
  for (int t = 0; t < 20; ++t) update_u(state, zero, cfg, rng, &log);
  EXPECT_EQ(log["u1"].accepted, 60u);
  EXPECT_EQ(log["u2"].rate(), 1.0);
}

TEST(UpdateTheta, EmptyCountsAcceptAndSingleGroupFixed) {
  Rng rng(8);
  auto state = lfsg_state(vec({0.5, 0.5}), vec({0.5, 0.5}), Eigen::MatrixXd::Constant(2, 2, 0.5), vec({0.1}),
                          vec({0.4}), 3.0);
  SufficientCounts zero{Eigen::MatrixXi::Zero(1, 2), Eigen::MatrixXi::Zero(1, 2), Eigen::MatrixXi::Zero(2, 2),
                        Eigen::MatrixXi::Zero(2, 2)};
  AcceptanceLog log;
  update_theta(state, zero, Hyperparameters::symmetric(2, 1, 1), rng, &log);
  EXPECT_EQ(log["theta1"].accepted, 1u);
  EXPECT_EQ(log["theta2"].accepted, 1u);
  EXPECT_NE(state.partition.dim1().theta()(0), 0.5);

  auto single = lfsg_state(vec({1.0}), vec({1.0}), Eigen::MatrixXd::Constant(1, 1, 0.5), vec({0.1}), vec({0.4}), 3.0);
  SufficientCounts c1{Eigen::MatrixXi::Constant(1, 1, 1), Eigen::MatrixXi::Constant(1, 1, 1),
                      Eigen::MatrixXi::Zero(1, 1), Eigen::MatrixXi::Zero(1, 1)};
  update_theta(single, c1, Hyperparameters::symmetric(1, 1, 1), rng);
  EXPECT_EQ(single.partition.dim1().theta()(0), 1.0);
}

TEST(UpdateLambda, EmptyCountsAlwaysAccept) {
  Rng rng(9);
  auto state = lfsg_state(vec({0.5, 0.5}), vec({0.5, 0.5}), Eigen::MatrixXd::Constant(2, 2, 0.5), vec({0.1}),
                          vec({0.4}), 3.0);
  SufficientCounts zero{Eigen::MatrixXi::Zero(1, 2), Eigen::MatrixXi::Zero(1, 2), Eigen::MatrixXi::Zero(2, 2),
                        Eigen::MatrixXi::Zero(2, 2)};
  AcceptanceLog log;
  for (int t = 0; t < 50; ++t) update_lambda(state, zero, Hyperparameters::symmetric(2, 1, 1), rng, &log);
  EXPECT_EQ(log["lambda"].accepted, 50u);
}

TEST(UpdateLabels, SingleGroupAndIncrementalCounts) {
  Rng rng(10);
  const auto R = random_relation(6, rng);
  auto one = lfsg_state(vec({1.0}), vec({1.0}), Eigen::MatrixXd::Constant(1, 1, 0.4), Eigen::VectorXd::Constant(6, 0.3),
                        Eigen::VectorXd::Constant(6, 0.6), 2.0);
  one.labels_s = LabelMatrix::Zero(6, 6);
  one.labels_r = LabelMatrix::Zero(6, 6);
  update_labels(one, R, rng);
  EXPECT_EQ(one.labels_s->maxCoeff(), 0);

  Eigen::MatrixXd B(3, 3);
  for (int i = 0; i < 9; ++i) B.data()[i] = 0.05 + 0.1 * i;
  Eigen::VectorXd u1(6), u2(6);
  for (int i = 0; i < 6; ++i) {
    u1(i) = rng.uniform();
    u2(i) = rng.uniform();
  }
  auto state = lfsg_state(vec({0.2, 0.3, 0.5}), vec({0.6, 0.2, 0.2}), B, u1, u2, 4.0);
  state.labels_s = random_labels(6, 3, rng);
  state.labels_r = random_labels(6, 3, rng);
  auto counts = counts_from_labels(*state.labels_s, *state.labels_r, R, 3);
  for (int t = 0; t < 50; ++t) {
    update_labels(state, R, rng, &counts);
    ASSERT_EQ(counts, naive_counts(*state.labels_s, *state.labels_r, R, 3)) << "sweep " << t;
  }
}

// ---------------------------------------------------------------------------
// Config, traces and prediction

TEST(SamplerConfig, ValidationAndTraceLength) {
  SamplerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.retained_samples(), 200u);
  cfg.burn_in = cfg.iterations;
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg.burn_in = 0;
  cfg.thin = 0;
  EXPECT_THROW(cfg.validate(), UsageError);
}

TEST(PosteriorPredictive, AveragesSamples) {
  Trace trace;
  trace.kind = ModelKind::lfsg;
  trace.n = 2;
  trace.K = 2;
  const CellList cells{{0, 1}, {1, 0}, {1, 1}};
  std::vector<Eigen::VectorXd> expected;
  Rng rng(11);
  for (int t = 0; t < 3; ++t) {
    TraceSample s;
    s.lambda = 1.0 + t;
    s.theta1 = rng.dirichlet(Eigen::VectorXd::Ones(2));
    s.theta2 = rng.dirichlet(Eigen::VectorXd::Ones(2));
    s.B = Eigen::MatrixXd::NullaryExpr(2, 2, [&]() { return rng.uniform(); });
    s.u1 = vec({rng.uniform(), rng.uniform()});
    s.u2 = vec({rng.uniform(), rng.uniform()});
    const Partition<double> p(SegmentDistribution<double>(s.theta1), SegmentDistribution<double>(s.theta2));
    Eigen::VectorXd e(3);
    for (int c = 0; c < 3; ++c)
      e(c) = mixture_intensity(s.u1(cells[c].first), s.u2(cells[c].second), p, BlockIntensities<double>(s.B),
                               SmoothingParameter<double>(s.lambda));
    expected.push_back(e);
    trace.samples.push_back(s);
  }
  Trace single = trace;
  single.samples.resize(1);
  EXPECT_LT((posterior_predictive(single, cells) - expected[0]).cwiseAbs().maxCoeff(), 1e-15);
  const Eigen::VectorXd mean = (expected[0] + expected[1] + expected[2]) / 3.0;
  EXPECT_LT((posterior_predictive(trace, cells) - mean).cwiseAbs().maxCoeff(), 1e-15);

  Trace same = single;
  same.samples.push_back(single.samples[0]);
  same.samples.push_back(single.samples[0]);
  EXPECT_LT((posterior_predictive(same, cells) - expected[0]).cwiseAbs().maxCoeff(), 1e-15);

  Trace empty;
  EXPECT_THROW(posterior_predictive(empty, cells), UsageError);
}

TEST(PosteriorPredictive, SbmAndMmsbRules) {
  Trace sbm;
  sbm.kind = ModelKind::sbm;
  TraceSample s;
  s.B = Eigen::Matrix2d{{0.9, 0.2}, {0.3, 0.4}};
  s.z1 = LabelVector::Zero(2);
  s.z2 = LabelVector::Zero(2);
  s.z1(1) = 1;
  s.z2(0) = 1;
  sbm.samples.push_back(s);
  const CellList cells{{0, 0}, {1, 1}};
  const auto p = posterior_predictive(sbm, cells);
  EXPECT_EQ(p(0), 0.2);  // B[z1=0, z2=1]
  EXPECT_EQ(p(1), 0.3);  // B[z1=1, z2=0]

  Trace mm;
  mm.kind = ModelKind::mmsb;
  TraceSample m;
  m.B = s.B;
  m.F = Eigen::Matrix2d{{0.5, 0.5}, {1.0, 0.0}};
  mm.samples.push_back(m);
  const auto q = posterior_predictive(mm, {{0, 1}});
  // 0.5 * 1.0 * 0.9 + 0.5 * 1.0 * 0.3
  EXPECT_NEAR(q(0), 0.6, 1e-15);
}

TEST(TraceCsv, HeaderRoundTripAndAcceptance) {
  Trace trace;
  trace.kind = ModelKind::sbm;
  trace.K = 2;
  TraceSample s;
  s.sweep = 12;
  s.lambda = std::numeric_limits<double>::infinity();
  s.theta1 = vec({0.25, 0.75});
  s.theta2 = vec({0.5, 0.5});
  s.B = Eigen::Matrix2d{{0.1, 0.2}, {0.3, 0.4}};
  s.train_log_likelihood = -12.5;
  trace.samples.push_back(s);
  trace.acceptance["u1"].record(true);
  trace.acceptance["u1"].record(false);
  std::ostringstream out;
  write_trace_csv(out, trace);
  EXPECT_EQ(out.str(),
            "sweep,lambda,theta1_0,theta1_1,theta2_0,theta2_1,B_0_0,B_0_1,B_1_0,B_1_1,train_loglik\n"
            "12,inf,0.25,0.75,0.5,0.5,0.1,0.2,0.3,0.4,-12.5\n");
  std::istringstream in(out.str());
  const Trace back = read_trace_csv(in, ModelKind::sbm);
  ASSERT_EQ(back.samples.size(), 1u);
  EXPECT_EQ(back.K, 2);
  EXPECT_EQ(back.samples[0].B, s.B);
  EXPECT_EQ(back.samples[0].sweep, 12u);
  std::ostringstream acc;
  write_acceptance(acc, trace);
  EXPECT_EQ(acc.str(), "u1 = 0.5\n");
  std::istringstream bad("sweep,lambda\n1,2\n");
  EXPECT_THROW(read_trace_csv(bad, ModelKind::lfsg), DataError);
}
