// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "maxent/medl.hpp"

namespace maxent {
namespace {

FamilyParams exponential(double rate) {
  FamilyParams p;
  p.family = Family::kExponential;
  p.rate = rate;
  return p;
}

TEST(DegreeBound, FloorFormula) {
  EXPECT_EQ(exp_degree_bound(1.0, 0.0, 1e-3), static_cast<int>(std::ceil(std::log2(2e3))));
  EXPECT_EQ(exp_degree_bound(10.0, 0.0, 1e-3), static_cast<int>(std::ceil(20.0 * std::numbers::e)));
  EXPECT_GE(exp_degree_bound(0.0, 100.0, 1e-3), 1);
  EXPECT_THROW(exp_degree_bound(1.0, 0.0, 0.0), Error);
}

TEST(Lcc, AllZeroMultipliersRejected) {
  MaxEntModel m;
  m.constraints = {ConstraintSpec::linear()};
  m.multipliers = {0.0};
  m.n = 4;
  m.update_norms();
  EXPECT_THROW(lcc_from_model(m), Error);
}

TEST(Lcc, ValuesReproduceCenteredExponent) {
  FamilyParams p;
  p.family = Family::kChiSquared;
  p.k = 5.0;
  const MaxEntModel m = model_from_family(p, 5);
  const Lcc l = lcc_from_model(m);
  const Eigen::VectorXd e = m.exponent();
  const Eigen::VectorXd got = (l.constant + l.beta * l.values.array()).matrix();
  // The log term is a degree-32 interpolant of log1p(c u) with c close to 1,
  // accurate to about 2e-4 at the singular end.
  EXPECT_LE((got - e).cwiseAbs().maxCoeff(), 1e-3);
  const Eigen::VectorXd mid = (got - e).segment(4, got.size() - 4);
  EXPECT_LE(mid.cwiseAbs().maxCoeff(), 5e-5);
  EXPECT_LE(l.values.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
}

TEST(Medl, ExponentialMeetsAccuracyAndProbabilityLaw) {
  const MaxEntModel m = model_from_family(exponential(2.0), 6);
  const MedlResult r = run_medl(m);
  EXPECT_GE(r.fidelity, 0.99);
  EXPECT_FALSE(r.kl_infinite);
  EXPECT_LE(r.kl, 1e-3);
  EXPECT_LE(r.tv, 0.02);
  EXPECT_EQ(r.simulated.p.size(), 64);
  EXPECT_NEAR(r.success_probability / r.theoretical_probability, 1.0, 0.05);
}

TEST(Medl, CircuitMatchesClassicalPrediction) {
  FamilyParams p;
  p.mu = 1.0;
  p.sigma2 = 2.0;
  const MaxEntModel m = model_from_family(p, 5);
  const MedlCircuit c = build_medl(m);
  const MedlResult r = run_medl(m, c, 1e-3);
  const Eigen::VectorXd pred = c.predicted / c.predicted.norm();
  const Eigen::VectorXd got = r.state.amplitudes().real();
  EXPECT_LE((pred - got).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(r.state.amplitudes().imag().cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(r.success_probability, c.predicted.squaredNorm() / 32.0, 1e-10);
}

TEST(Medl, SquareRootConventionTargetsAmplitudes) {
  const MaxEntModel m = model_from_family(exponential(1.0), 6, std::nullopt, Convention::kSqrt);
  const MedlResult r = run_medl(m);
  EXPECT_GE(r.amplitude_fidelity, 0.999);
  EXPECT_GE(r.fidelity, 0.999);
}

TEST(Medl, UniformLimitHasQuarterProbability) {
  MaxEntModel m;
  m.constraints = {ConstraintSpec::linear()};
  m.multipliers = {1e-10};
  m.n = 6;
  m.update_norms();
  const MedlResult r = run_medl(m);
  EXPECT_NEAR(r.success_probability, 0.25, 1e-9);
}

TEST(Medl, FixedDegreeStructureIsStatic) {
  MedlOptions o;
  o.exp_degree = 24;
  std::string first;
  for (double rate : {0.3, 1.0, 2.5, 4.0}) {
    const MedlCircuit c = build_medl(model_from_family(exponential(rate), 5, Interval{0.0, 3.0}), o);
    const std::string sig = structure_signature(*c.circuit);
    if (first.empty()) first = sig;
    EXPECT_EQ(sig, first) << "rate " << rate;
  }
}

TEST(Medl, InvalidEpsRejected) {
  MedlOptions o;
  o.eps = 0.0;
  EXPECT_THROW(build_medl(model_from_family(exponential(1.0), 4), o), Error);
}

TEST(Depth, ScalesWithEpsAndSize) {
  FamilyParams p;
  p.mu = 0.0;
  const MaxEntModel m6 = model_from_family(p, 6);
  const DepthEstimate a = depth_estimate(m6, 1e-2);
  const DepthEstimate b = depth_estimate(m6, 1e-4);
  EXPECT_GT(b.log_inv, a.log_inv);
  EXPECT_NEAR(b.log_inv - a.log_inv, std::log2(100.0), 1e-9);
  EXPECT_GE(b.d_exp, a.d_exp);
  const DepthEstimate c = depth_estimate(model_from_family(p, 8), 1e-2);
  EXPECT_EQ(c.n, 8);
  EXPECT_EQ(c.m, 2);
}

TEST(Decode, Conventions) {
  CVector a(2);
  a << cplx(0.6, 0.0), cplx(-0.8, 0.0);
  const Eigen::VectorXd d = decode_distribution(a, Convention::kDensity);
  EXPECT_NEAR(d(0), 0.6 / 1.4, 1e-15);
  const Eigen::VectorXd s = decode_distribution(a, Convention::kSqrt);
  EXPECT_NEAR(s(1), 0.64, 1e-15);
  EXPECT_THROW(decode_distribution(CVector::Zero(2), Convention::kSqrt), Error);
}

}  // namespace
}  // namespace maxent
