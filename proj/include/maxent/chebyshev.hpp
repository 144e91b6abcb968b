// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Chebyshev series on [-1, 1] and a sup-norm-constrained least-squares fit.

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace maxent {

// p(x) = sum_k c_k T_k(x).
class ChebSeries {
 public:
  ChebSeries() : c_(Eigen::VectorXd::Zero(1)) {}
  explicit ChebSeries(Eigen::VectorXd c);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Eigen::VectorXd& coeffs() const { return c_; }

  double operator()(double x) const;
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

  ChebSeries even_part() const;
  ChebSeries odd_part() const;
  ChebSeries scaled(double s) const { return ChebSeries(c_ * s); }
  // Zero-padded or truncated copy with exactly `d` as nominal degree.
  ChebSeries with_degree(int d) const;

  // Max |p| over `points` equispaced points on [-1, 1].
  double sup_norm(int points = 20001) const;

  static ChebSeries from_monomial(const Eigen::VectorXd& m);
  // Interpolant at the d + 1 Chebyshev points of the first kind.
  static ChebSeries interpolate(const std::function<double(double)>& f, int d);

 private:
  Eigen::VectorXd c_;
};

// T_0..T_d evaluated at every x (rows follow x).
Eigen::MatrixXd cheb_vandermonde(const Eigen::VectorXd& x, int d);

// Equispaced grid of `points` values on [-1, 1].
Eigen::VectorXd uniform_grid(int points);

// Least squares of p(x_i) against t_i subject to |p| <= limit on the
// Chebyshev extrema check set, solved by a primal active-set QP started at
// p = 0. The result is rescaled if a dense check still finds |p| > limit.
ChebSeries bounded_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& t, int d,
                       double limit = 1.0);

}  // namespace maxent
