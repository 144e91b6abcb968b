// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "maxent/calibration.hpp"

namespace maxent {
namespace {

ModelTemplate gmm_template() {
  ModelTemplate t;
  t.kind = TemplateKind::kNormalMixture;
  t.components = 2;
  t.interval = {-10.0, 30.0};
  t.n = 6;
  return t;
}

ModelTemplate expmix_template() {
  ModelTemplate t;
  t.kind = TemplateKind::kExponentialMixture;
  t.components = 2;
  t.interval = {0.0, 10.0};
  t.n = 6;
  return t;
}

TEST(Observed, LoaderPreparesSquareRoots) {
  Eigen::VectorXd p(8);
  p << 0.05, 0.1, 0.2, 0.15, 0.1, 0.1, 0.2, 0.1;
  const ObservedOracle o = compile_observed(p);
  EXPECT_EQ(o.n, 3);
  EXPECT_LE((o.state().amplitudes().real() - p.cwiseSqrt()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::VectorXd bad = p;
  bad(0) = -0.05;
  EXPECT_THROW(compile_observed(bad), Error);
  EXPECT_THROW(compile_observed(Eigen::VectorXd::Constant(6, 1.0 / 6.0)), Error);
}

TEST(Loss, ZeroAtTruthAndBounded) {
  const ModelTemplate t = gmm_template();
  const Eigen::VectorXd truth = encode_normal_mixture(t.interval, {6, 14}, {16, 22.5}, {0.45, 0.55});
  const ObservedOracle o = compile_observed(t.distribution(truth));
  const TrainingConfig cfg;
  EXPECT_NEAR(loss(truth, o, t, cfg), 0.0, 1e-12);
  for (unsigned s = 0; s < 5; ++s) {
    const double l = loss(t.random_init(s), o, t, cfg);
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0 + 1e-9);
  }
}

TEST(Loss, CircuitBackendAtTruthWithinPreparationError) {
  const ModelTemplate t = gmm_template();
  const Eigen::VectorXd truth = encode_normal_mixture(t.interval, {6, 14}, {16, 22.5}, {0.45, 0.55});
  const ObservedOracle o = compile_observed(t.distribution(truth));
  TrainingConfig cfg;
  cfg.backend = Backend::kCircuit;
  EXPECT_LE(loss(truth, o, t, cfg), 2.0 * cfg.prep_eps);
}

TEST(Loss, ShotEstimateIsSeededAndClose) {
  const ModelTemplate t = expmix_template();
  const Eigen::VectorXd truth = encode_exponential_mixture({0.4, 2.0}, {0.5, 0.5});
  const ObservedOracle o = compile_observed(t.distribution(truth));
  const Eigen::VectorXd x = t.random_init(4);
  TrainingConfig exact;
  TrainingConfig shots;
  shots.shots = 100000;
  shots.seed = 11;
  const double a = loss(x, o, t, shots), b = loss(x, o, t, shots);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a, loss(x, o, t, exact), 0.01);
}

TEST(Gradient, FiniteDifferenceSelfConsistency) {
  const ModelTemplate t = gmm_template();
  const Eigen::VectorXd truth = encode_normal_mixture(t.interval, {6, 14}, {16, 22.5}, {0.45, 0.55});
  const ObservedOracle o = compile_observed(t.distribution(truth));
  for (unsigned s = 0; s < 3; ++s)
    EXPECT_LE(gradient_consistency(t.random_init(s), o, t, TrainingConfig{}), 1e-3);
}

TEST(Train, InitAtTruthStopsImmediately) {
  const ModelTemplate t = gmm_template();
  const Eigen::VectorXd truth = encode_normal_mixture(t.interval, {6, 14}, {16, 22.5}, {0.45, 0.55});
  const ObservedOracle o = compile_observed(t.distribution(truth));
  const TrainingTrace tr = train(TrainingConfig{}, o, t, truth);
  EXPECT_TRUE(tr.converged);
  EXPECT_LE(tr.records.size(), 2u);
}

TEST(Train, ExponentialMixtureImproves) {
  const ModelTemplate t = expmix_template();
  const Eigen::VectorXd truth = encode_exponential_mixture({0.4, 2.0}, {0.5, 0.5});
  const ObservedOracle o = compile_observed(t.distribution(truth));
  const TrainingTrace tr = train(TrainingConfig{}, o, t, t.random_init(0));
  EXPECT_LT(tr.best_loss, tr.records.front().loss);
  for (std::size_t i = 1; i < tr.records.size(); ++i)
    EXPECT_LE(tr.records[i].best_loss, tr.records[i - 1].best_loss);
  EXPECT_LT(tr.records.back().kl, tr.records.front().kl);
}

TEST(Train, FamilyTemplateRecoversRate) {
  ModelTemplate t;
  t.kind = TemplateKind::kFamily;
  t.family = Family::kExponential;
  t.interval = {0.0, 4.0};
  t.n = 6;
  const Eigen::VectorXd truth = Eigen::VectorXd::Constant(1, -1.5);
  const ObservedOracle o = compile_observed(t.distribution(truth));
  const TrainingTrace tr = train(TrainingConfig{}, o, t, t.random_init(2));
  const auto& stats = tr.records.back().stats;
  ASSERT_EQ(stats.size(), 1u);
  EXPECT_EQ(stats[0].first, "rate");
  EXPECT_NEAR(stats[0].second, 1.5, 0.02);
}

TEST(Train, RejectsBadConfig) {
  const ModelTemplate t = expmix_template();
  const ObservedOracle o = compile_observed(t.distribution(t.random_init(0)));
  TrainingConfig cfg;
  cfg.lr = 0.0;
  EXPECT_THROW(train(cfg, o, t, t.random_init(1)), Error);
  EXPECT_THROW(train(TrainingConfig{}, o, t, Eigen::VectorXd::Zero(3)), Error);
}

TEST(Template, ExtractionThroughMultipliers) {
  const ModelTemplate t = gmm_template();
  const Eigen::VectorXd th = encode_normal_mixture(t.interval, {6, 14}, {16, 22.5}, {0.45, 0.55});
  const auto s = t.extract(th);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_NEAR(s[0].second, 6.0, 1e-10);
  EXPECT_NEAR(s[1].second, 16.0, 1e-10);
  EXPECT_NEAR(s[2].second, 0.45, 1e-12);
  EXPECT_NEAR(s[3].second, 14.0, 1e-10);
  EXPECT_NEAR(s[4].second, 22.5, 1e-10);
  EXPECT_EQ(t.random_init(3), t.random_init(3));
}

}  // namespace
}  // namespace maxent
