// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "maxent/model.hpp"
#include "maxent/statevector.hpp"

namespace maxent {
namespace {

TEST(SpecialFunctions, SpotValues) {
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-10);
  EXPECT_NEAR(gamma_fn(5.0), 24.0, 1e-10);
  EXPECT_NEAR(digamma(1.0), -kEulerGamma, 1e-10);
  EXPECT_NEAR(digamma(0.5), -kEulerGamma - 2.0 * std::log(2.0), 1e-10);
}

TEST(SpecialFunctions, LowerGammaTwoIdentity) {
  for (double t = 0.0; t <= 20.0; t += 0.25) {
    EXPECT_NEAR(lower_gamma2(t), 1.0 - std::exp(-t) * (1.0 + t), 1e-12);
    EXPECT_NEAR(gamma_p(2.0, t), lower_gamma2(t), 1e-12);
  }
}

TEST(Metrics, IdenticalAndDisjoint) {
  Eigen::VectorXd p(4), q(4);
  p << 0.1, 0.2, 0.3, 0.4;
  Metrics m = metrics(p, p);
  EXPECT_NEAR(m.fidelity, 1.0, 1e-15);
  EXPECT_EQ(m.kl, 0.0);
  EXPECT_EQ(m.tv, 0.0);
  p << 0.5, 0.5, 0.0, 0.0;
  q << 0.0, 0.0, 0.5, 0.5;
  m = metrics(p, q);
  EXPECT_EQ(m.fidelity, 0.0);
  EXPECT_TRUE(m.kl_infinite);
  EXPECT_NEAR(m.tv, 1.0, 1e-15);
}

// Unit-variance normals one sigma apart, against closed forms of the
// continuous fidelity, KL and TV.
TEST(Metrics, MatchContinuousLimit) {
  const Interval iv{-12.0, 13.0};
  FamilyParams a, b;
  b.mu = 1.0;
  const Metrics m = metrics(density_from_family(a, iv, 14).p, density_from_family(b, iv, 14).p);
  EXPECT_NEAR(m.fidelity, std::exp(-0.25), 1e-3);
  EXPECT_NEAR(m.kl, 0.5, 1e-3);
  EXPECT_NEAR(m.tv, std::erf(0.5 / std::numbers::sqrt2), 1e-3);
}

TEST(Density, FamilyShapes) {
  FamilyParams e;
  e.family = Family::kExponential;
  const GridDensity de = density_from_family(e, {0.0, 5.0}, 6);
  Eigen::Index arg = 0;
  de.p.maxCoeff(&arg);
  EXPECT_EQ(arg, 0);

  FamilyParams nrm;
  nrm.mu = 0.0;
  const GridDensity dn = density_from_family(nrm, {-4.0, 4.0}, 6);
  EXPECT_LE((dn.p - dn.p.reverse()).cwiseAbs().maxCoeff(), 1e-15);

  FamilyParams r;
  r.family = Family::kRayleigh;
  const GridDensity dr = density_from_family(r, {0.0, 4.0}, 6);
  dr.p.maxCoeff(&arg);
  EXPECT_NEAR(dr.x(arg), 1.0, 0.5 * 4.0 / 63.0 + 1e-12);
  EXPECT_NEAR(dr.p.sum(), 1.0, 1e-12);
}

TEST(Density, SingleComponentMixture) {
  FamilyParams p;
  p.mu = 2.0;
  p.sigma2 = 3.0;
  const Interval iv{-6.0, 10.0};
  const GridDensity mix = mixture_density({p}, {1.0}, iv, 6);
  EXPECT_LE((mix.p - density_from_family(p, iv, 6).p).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(mixture_density({p}, {0.5, 0.5}, iv, 6), Error);
}

std::vector<FamilyParams> all_families() {
  std::vector<FamilyParams> out;
  FamilyParams p;
  p.family = Family::kNormal;
  p.mu = 1.5;
  p.sigma2 = 2.0;
  out.push_back(p);
  p.family = Family::kExponential;
  p.rate = 0.7;
  out.push_back(p);
  p.family = Family::kPareto;
  p.alpha = 2.5;
  p.xm = 1.0;
  out.push_back(p);
  p.family = Family::kRayleigh;
  p.sigma = 1.3;
  out.push_back(p);
  p.family = Family::kChi;
  p.k = 3.0;
  out.push_back(p);
  p.family = Family::kChiSquared;
  p.k = 5.0;
  out.push_back(p);
  return out;
}

TEST(Multipliers, RoundTripAllFamilies) {
  for (const FamilyParams& p : all_families()) {
    const MaxEntModel m = model_from_family(p, 6);
    const FamilyParams back = family_from_model(m);
    const MaxEntModel again = model_from_family(back, 6, m.interval);
    for (int k = 0; k < m.size(); ++k)
      EXPECT_NEAR(again.multipliers[k], m.multipliers[k], 1e-10) << to_string(p.family);
  }
}

TEST(Multipliers, DensityMatchesFamily) {
  for (const FamilyParams& p : all_families()) {
    const MaxEntModel m = model_from_family(p, 7);
    const GridDensity a = density_from_multipliers(m);
    const GridDensity b = density_from_family(p, m.interval, 7);
    EXPECT_LE((a.p - b.p).cwiseAbs().maxCoeff(), 1e-10) << to_string(p.family);
  }
}

TEST(Multipliers, ZeroMultipliersGiveUniform) {
  MaxEntModel m;
  m.constraints = {ConstraintSpec::linear(), ConstraintSpec::power_of(2)};
  m.multipliers = {0.0, 0.0};
  m.interval = {-1.0, 3.0};
  m.n = 5;
  m.update_norms();
  const GridDensity d = density_from_multipliers(m);
  EXPECT_LE((d.p.array() - 1.0 / 32.0).abs().maxCoeff(), 1e-15);
  EXPECT_NEAR(m.filling_rate(), 1.0, 1e-15);
}

TEST(Multipliers, ChiSquaredReconstruction) {
  FamilyParams p;
  p.family = Family::kChiSquared;
  p.k = 4.0;
  const MaxEntModel m = model_from_family(p, 6);
  const GridDensity d = density_from_multipliers(m);
  Eigen::VectorXd analytic(d.x.size());
  for (Eigen::Index i = 0; i < d.x.size(); ++i) analytic(i) = d.x(i) * std::exp(-d.x(i) / 2.0);
  analytic /= analytic.sum();
  EXPECT_LE((d.p - analytic).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Multipliers, LargeMultipliersDoNotOverflow) {
  MaxEntModel m;
  m.constraints = {ConstraintSpec::linear()};
  m.multipliers = {-5000.0};
  m.interval = {0.0, 1.0};
  m.n = 6;
  m.update_norms();
  const GridDensity d = density_from_multipliers(m);
  EXPECT_TRUE(d.p.allFinite());
  EXPECT_NEAR(d.p.sum(), 1.0, 1e-12);
}

TEST(Centered, ReproducesExponent) {
  for (const FamilyParams& p : all_families()) {
    const MaxEntModel m = model_from_family(p, 6);
    const CenteredModel cm = centered(m);
    const Eigen::VectorXd u = cm.u_grid(6);
    const Eigen::VectorXd e = m.exponent();
    for (Eigen::Index i = 0; i < u.size(); ++i)
      EXPECT_NEAR(cm(u(i)), e(i), 1e-9 * (1.0 + std::abs(e(i)))) << to_string(p.family);
  }
}

}  // namespace
}  // namespace maxent
