// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/block_encoding.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace maxent {
namespace {

double max_offdiag(const CMatrix& m) {
  CMatrix o = m;
  o.diagonal().setZero();
  return o.cwiseAbs().maxCoeff();
}

TEST(LinearBe, SmallWidths) {
  for (int n = 1; n <= 6; ++n) {
    const BlockEncoding be = linear_diagonal_be(n);
    const CMatrix b = be.block();
    const double den = std::ldexp(1.0, n) - 1.0;
    for (int j = 0; j < (1 << n); ++j) EXPECT_NEAR(std::abs(b(j, j) - j / den), 0.0, 1e-12);
    EXPECT_LT(max_offdiag(b), 1e-12);
    EXPECT_EQ(be.alpha, 1.0);
  }
  EXPECT_EQ(linear_diagonal_be(3).ancillas, 2);
  EXPECT_THROW(linear_diagonal_be(0), Error);
}

TEST(LinearBe, SignedVersion) {
  const int n = 4;
  const CMatrix b = signed_linear_be(n).block();
  for (int j = 0; j < 16; ++j) EXPECT_NEAR(b(j, j).real(), 2.0 * j / 15.0 - 1.0, 1e-12);
}

TEST(AmplitudeLoader, SignedVector) {
  Eigen::VectorXd a(8);
  a << 0.1, -0.3, 0.2, 0.0, 0.5, -0.4, 0.6, 0.2;
  a.normalize();
  RegisterLayout l;
  l.add("r", 3);
  Statevector s = apply(Statevector(l), amplitude_loader(a, {0, 1, 2}, 3));
  EXPECT_LT((s.amplitudes().real() - a).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SparseSpp, ProductsAndSupport) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (auto scheme : {SignScheme::kAngle, SignScheme::kOpposedRx}) {
    for (int trial = 0; trial < 50; ++trial) {
      const int m = 1 + trial % 6;
      std::vector<double> y(m);
      for (double& v : y) v = d(rng);
      if (trial % 7 == 3 && m > 2) y[1] = 0.0;
      const auto pair = sparse_spp(y, scheme);
      EXPECT_LT(pair.epsilon, 1e-10);
      // Nothing outside the one-hot codes.
      RegisterLayout l;
      l.add("p", pair.width);
      for (const auto& c : {pair.left, pair.right}) {
        const CVector amps = apply(Statevector(l), *c).amplitudes();
        double inside = 0.0;
        for (int j = 0; j < m; ++j) inside += std::norm(amps(pair.basis(j)));
        EXPECT_NEAR(inside, 1.0, 1e-12);
      }
    }
  }
}

TEST(SparseSpp, SingleAndTrailingZeros) {
  const auto one = sparse_spp({1.0});
  EXPECT_EQ(one.width, 1);
  EXPECT_NEAR(std::abs(pair_amplitudes(*one.left, 1)[0]), 1.0, 1e-15);
  const auto neg = sparse_spp({-2.0});
  EXPECT_LT(neg.epsilon, 1e-12);
  const auto tz = sparse_spp({0.3, -0.2, 0.0, 0.0});
  EXPECT_LT(tz.epsilon, 1e-12);
  EXPECT_THROW(sparse_spp({0.0, 0.0}), Error);
}

TEST(SparseSpp, TwoTermsSigned) {
  const auto pair = sparse_spp({0.3, -0.7});
  const auto c = pair_amplitudes(*pair.left, 2);
  const auto d = pair_amplitudes(*pair.right, 2);
  EXPECT_NEAR((pair.beta * std::conj(c[0]) * d[0]).real(), 0.3, 1e-12);
  EXPECT_NEAR((pair.beta * std::conj(c[1]) * d[1]).real(), -0.7, 1e-12);
}

TEST(SparseSpp, MultiplierFormAgrees) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.05, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + trial % 6;
    std::vector<double> lam(m), fmax(m), y(m);
    for (int k = 0; k < m; ++k) {
      lam[k] = d(rng);
      fmax[k] = d(rng);
      y[k] = 2.0 * lam[k] * fmax[k];
    }
    const auto a = ladder_angles(y);
    const auto b = multiplier_angles(lam, fmax);
    for (int k = 0; k + 1 < m; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
    EXPECT_EQ(b[m - 1], 0.0);
  }
}

TEST(Lcu, SingleTermIsIdentityMap) {
  std::mt19937_64 rng(2);
  const auto t = testing::random_block_encoding(2, 2, rng);
  const auto be = lcu_combine(sparse_spp({1.0}), {t});
  EXPECT_LT((be.block() - t.block()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Lcu, LinearOperatorFromTerms) {
  const int n = 3;
  const double denom = 2.0 * 7.0;
  std::vector<double> y{0.5};
  std::vector<BlockEncoding> terms;
  auto id = std::make_shared<Circuit>(n + 1);
  id->h(n).h(n);
  terms.push_back({id, n, 1, 1.0, 0.0});
  for (int j = 1; j <= n; ++j) {
    auto mz = std::make_shared<Circuit>(n + 1);
    mz->z(j - 1).phase(j - 1, std::numbers::pi);
    terms.push_back({mz, n, 1, 1.0, 0.0});
    y.push_back(std::ldexp(1.0, j - 1) / denom);
  }
  const auto be = lcu_combine(sparse_spp(y), terms);
  const CMatrix expect = linear_diagonal_be(n).block();
  EXPECT_LT((be.alpha * be.block() - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Lcu, DiagonalMix) {
  std::mt19937_64 rng(3);
  const auto a1 = testing::random_diagonal_be(3, rng);
  const auto a2 = testing::random_diagonal_be(3, rng);
  const auto be = lcu_combine(sparse_spp({0.4, 0.6}), {a1, a2});
  const CMatrix target = 0.4 * a1.block() + 0.6 * a2.block();
  EXPECT_LT((be.alpha * be.block() - target).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Lcu, RandomContract) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    const int m = 1 + trial % 3;
    std::vector<BlockEncoding> terms;
    std::vector<double> y(m);
    for (int j = 0; j < m; ++j) {
      terms.push_back(testing::random_block_encoding(n, 2, rng));
      y[j] = d(rng);
    }
    const auto be = lcu_combine(sparse_spp(y), terms);
    const double err = block_error(be, testing::lcu_target(y, terms));
    EXPECT_LE(err, be.epsilon + 1e-9);
  }
}

}  // namespace
}  // namespace maxent
