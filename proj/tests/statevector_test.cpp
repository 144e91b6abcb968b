// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/statevector.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace maxent {
namespace {

Statevector zero_state(int n) {
  RegisterLayout l;
  l.add("q", n);
  return Statevector(l);
}

// Random circuit over the full gate set, with nested controlled blocks so
// that the fused path is exercised as well as the plain one.
Circuit random_circuit(int n, int ops, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> qd(0, n - 1), kd(0, 7), cd(0, 2);
  std::uniform_real_distribution<double> ad(-3.0, 3.0);
  auto rand_gate = [&](Circuit& c, std::uint64_t avoid) {
    int t;
    do t = qd(rng); while (avoid >> t & 1);
    std::vector<Control> cs;
    const int nc = cd(rng);
    std::uint64_t used = avoid | (std::uint64_t{1} << t);
    for (int k = 0; k < nc; ++k) {
      const int q = qd(rng);
      if (used >> q & 1) continue;
      used |= std::uint64_t{1} << q;
      cs.push_back({q, static_cast<bool>(rng() & 1)});
    }
    c.gate(static_cast<GateKind>(kd(rng)), t, ad(rng), cs);
  };
  Circuit c(n);
  // Child uses every qubit except the top one, which may control it.
  auto child = std::make_shared<Circuit>(n);
  for (int k = 0; k < 24; ++k) rand_gate(*child, std::uint64_t{1} << (n - 1));
  for (int k = 0; k < ops; ++k) {
    if (k % 25 == 0) {
      c.append(child, {{n - 1, static_cast<bool>(rng() & 1)}}, (rng() & 1) != 0);
    } else {
      rand_gate(c, 0);
    }
  }
  return c;
}

TEST(Statevector, HadamardOnZero) {
  auto s = apply(zero_state(1), Circuit(1).h(0));
  EXPECT_NEAR(std::abs(s.amplitudes()(0) - std::sqrt(0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitudes()(1) - std::sqrt(0.5)), 0.0, 1e-15);
}

TEST(Statevector, RyPiFlips) {
  auto s = apply(zero_state(1), Circuit(1).ry(0, std::numbers::pi));
  EXPECT_NEAR(std::abs(s.amplitudes()(1)), 1.0, 1e-15);
}

TEST(Statevector, BellPostSelection) {
  auto s = apply(zero_state(2), Circuit(2).h(0).cx(0, 1));
  auto ps = post_select(s, std::vector<int>{0}, 0);
  EXPECT_NEAR(ps.probability, 0.5, 1e-15);
  EXPECT_NEAR(std::abs(ps.state.amplitudes()(0)), 1.0, 1e-15);
}

TEST(Statevector, ZeroProbabilityThrows) {
  auto s = apply(zero_state(2), Circuit(2).x(0));
  try {
    post_select(s, std::vector<int>{0}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroProbability);
  }
}

TEST(Statevector, RegisterOutcomeIsBinaryLiteral) {
  RegisterLayout l;
  l.add("a", 1);
  l.add("b", 2);
  auto s = apply(Statevector(l), Circuit(3).x(2));  // b = "10"
  auto ps = post_select(s, "b", "10");
  EXPECT_NEAR(ps.probability, 1.0, 1e-15);
  EXPECT_FALSE(ps.state.layout().contains("b"));
  EXPECT_THROW(post_select(s, "c", "0"), Error);
}

TEST(Statevector, InnerProducts) {
  auto a = zero_state(1);
  auto b = apply(a, Circuit(1).x(0));
  EXPECT_NEAR(std::abs(inner_product(a, a) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(inner_product(a, b)), 0.0, 1e-15);
  RegisterLayout other;
  other.add("r", 1);
  EXPECT_THROW(inner_product(a, Statevector(other)), Error);
}

TEST(Statevector, InvalidOps) {
  Circuit c(2);
  EXPECT_THROW(c.h(2), Error);
  EXPECT_THROW(c.ry(0, std::nan("")), Error);
  EXPECT_THROW(c.gate(GateKind::X, 0, 0.0, {{0, true}}), Error);
}

TEST(Statevector, RandomCircuitsPreserveNormAndInvert) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 10;
    Circuit c = random_circuit(n, 200, rng);
    CVector psi = CVector::Random(Eigen::Index{1} << n);
    psi.normalize();
    Simulator sim;
    CVector out = psi;
    sim.run(out, n, c);
    EXPECT_LT(std::abs(out.squaredNorm() - 1.0), 1e-9);
    sim.run(out, n, adjoint(c));
    EXPECT_LT((out - psi).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Statevector, FusedMatchesExpanded) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 4 + trial;
    auto inner = std::make_shared<Circuit>(random_circuit(n - 1, 60, rng));
    Circuit outer(n);
    for (int k = 0; k < 5; ++k) outer.append(inner, {{n - 1, k % 2 == 0}}, k % 3 == 1);
    CVector psi = CVector::Random(Eigen::Index{1} << n);
    CVector a = psi, b = psi;
    Simulator fused, plain;
    plain.set_fusion(false);
    fused.run(a, n, outer);
    plain.run(b, n, outer);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(Statevector, PostSelectProbabilitiesSumToOne) {
  std::mt19937_64 rng(3);
  auto s = apply(zero_state(5), random_circuit(5, 80, rng));
  double total = 0.0;
  for (std::uint64_t o = 0; o < 4; ++o) {
    CVector b = project(s.amplitudes(), 5, {1, 3}, o);
    total += b.squaredNorm();
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Statevector, ExtractBlockOfComposition) {
  std::mt19937_64 rng(5);
  const int n = 6;
  auto c1 = std::make_shared<Circuit>(random_circuit(n, 40, rng));
  auto c2 = std::make_shared<Circuit>(random_circuit(n, 40, rng));
  Circuit both(n);
  both.append(c1).append(c2);
  CMatrix u1 = circuit_unitary(*c1), u2 = circuit_unitary(*c2);
  CMatrix full = u2 * u1;
  CMatrix blk = extract_block(both, 2);
  EXPECT_LT((blk - full.topLeftCorner(16, 16)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((extract_block(Circuit(2), 1) - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_THROW(extract_block(Circuit(13), 1), Error);
}

TEST(Statevector, SignatureIgnoresAngles) {
  Circuit a(2), b(2);
  a.ry(0, 0.1).cx(0, 1);
  b.ry(0, 0.7).cx(0, 1);
  EXPECT_EQ(structure_signature(a), structure_signature(b));
  b.rz(1, 0.2);
  EXPECT_NE(structure_signature(a), structure_signature(b));
}

}  // namespace
}  // namespace maxent
