// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "maxent/statevector.hpp"

namespace maxent {

ChebSeries::ChebSeries(Eigen::VectorXd c) : c_(std::move(c)) {
  if (c_.size() == 0) c_ = Eigen::VectorXd::Zero(1);
}

double ChebSeries::operator()(double x) const {
  double b1 = 0.0, b2 = 0.0;
  for (Eigen::Index k = c_.size() - 1; k >= 1; --k) {
    const double b0 = c_(k) + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c_(0) + x * b1 - b2;
}

Eigen::VectorXd ChebSeries::operator()(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = (*this)(x(i));
  return y;
}

ChebSeries ChebSeries::even_part() const {
  Eigen::VectorXd c = c_;
  for (Eigen::Index k = 1; k < c.size(); k += 2) c(k) = 0.0;
  return ChebSeries(c);
}

ChebSeries ChebSeries::odd_part() const {
  Eigen::VectorXd c = c_;
  for (Eigen::Index k = 0; k < c.size(); k += 2) c(k) = 0.0;
  return ChebSeries(c);
}

ChebSeries ChebSeries::with_degree(int d) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
  const Eigen::Index m = std::min<Eigen::Index>(c_.size(), d + 1);
  c.head(m) = c_.head(m);
  return ChebSeries(c);
}

double ChebSeries::sup_norm(int points) const {
  return (*this)(uniform_grid(points)).cwiseAbs().maxCoeff();
}

ChebSeries ChebSeries::from_monomial(const Eigen::VectorXd& m) {
  const Eigen::Index d = std::max<Eigen::Index>(m.size() - 1, 0);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd power = Eigen::VectorXd::Zero(d + 1);  // x^k in T basis
  power(0) = 1.0;
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    out += m(k) * power;
    if (k == d) break;
    Eigen::VectorXd next = Eigen::VectorXd::Zero(d + 1);
    for (Eigen::Index j = 0; j <= k; ++j) {
      if (power(j) == 0.0) continue;
      if (j == 0) {
        next(1) += power(0);
      } else {
        next(j + 1) += 0.5 * power(j);
        next(j - 1) += 0.5 * power(j);
      }
    }
    power = next;
  }
  return ChebSeries(out);
}

ChebSeries ChebSeries::interpolate(const std::function<double(double)>& f, int d) {
  if (d < 0) throw Error(ErrorCode::kInvalidArgument, "negative degree");
  const int n = d + 1;
  Eigen::VectorXd fx(n), c = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) fx(k) = f(std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n)));
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      s += fx(k) * std::cos(j * (2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
    c(j) = 2.0 * s / n;
  }
  c(0) *= 0.5;
  return ChebSeries(c);
}

Eigen::MatrixXd cheb_vandermonde(const Eigen::VectorXd& x, int d) {
  Eigen::MatrixXd v(x.size(), d + 1);
  v.col(0).setOnes();
  if (d >= 1) v.col(1) = x;
  for (int k = 2; k <= d; ++k)
    v.col(k) = 2.0 * x.cwiseProduct(v.col(k - 1)) - v.col(k - 2);
  return v;
}

Eigen::VectorXd uniform_grid(int points) {
  return Eigen::VectorXd::LinSpaced(points, -1.0, 1.0);
}

ChebSeries bounded_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& t, int d,
                       double limit) {
  if (x.size() != t.size() || x.size() == 0)
    throw Error(ErrorCode::kInvalidArgument, "fit data size mismatch");
  const int nv = d + 1;
  const int m = 8 * d + 200;
  Eigen::VectorXd chk(m);
  for (int i = 0; i < m; ++i) chk(i) = std::cos(std::numbers::pi * i / (m - 1));
  const Eigen::MatrixXd a = cheb_vandermonde(x, d);
  const Eigen::MatrixXd b = cheb_vandermonde(chk, d);

  Eigen::MatrixXd q = a.transpose() * a;
  q.diagonal().array() += 1e-12 * q.trace() / nv;
  const Eigen::VectorXd g = -a.transpose() * t;

  // Constraint r < m reads  B_r c <= limit, r >= m reads -B_{r-m} c <= limit.
  auto row = [&](int r) -> Eigen::VectorXd {
    return r < m ? Eigen::VectorXd(b.row(r).transpose())
                 : Eigen::VectorXd(-b.row(r - m).transpose());
  };
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  std::vector<int> work;
  std::vector<char> in_work(2 * m, 0);

  for (int iter = 0; iter < 20000; ++iter) {
    const Eigen::VectorXd r = q * c + g;
    const int k = static_cast<int>(work.size());
    // Null-space step: p = Z (Z'QZ)^-1 (-Z'r), with Z spanning ker(G_W).
    Eigen::MatrixXd gt(nv, k);
    for (int i = 0; i < k; ++i) gt.col(i) = row(work[i]);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gt);
    const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(nv, nv);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(nv);
    if (k < nv) {
      const Eigen::MatrixXd z = full.rightCols(nv - k);
      const Eigen::MatrixXd rq = z.transpose() * q * z;
      p = z * rq.llt().solve(-z.transpose() * r);
    }
    if (p.norm() <= 1e-12 * std::max(1.0, c.norm())) {
      if (k == 0) break;
      // G_W' nu = -(Qp + r) solved through the triangular factor.
      const Eigen::MatrixXd rr = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
      const Eigen::VectorXd rhs = -(full.leftCols(k).transpose() * (q * p + r));
      const Eigen::VectorXd nu = rr.triangularView<Eigen::Upper>().solve(rhs);
      Eigen::Index worst;
      const double mn = nu.minCoeff(&worst);
      if (mn >= -1e-10 * std::max(1.0, nu.cwiseAbs().maxCoeff())) break;
      in_work[work[worst]] = 0;
      work.erase(work.begin() + worst);
      continue;
    }
    const Eigen::VectorXd bp = b * p;
    const Eigen::VectorXd bc = b * c;
    const double floor = 1e-9 * p.norm() * b.rowwise().norm().maxCoeff();
    double step = 1.0;
    int block = -1;
    for (int i = 0; i < m; ++i) {
      for (int s = 0; s < 2; ++s) {
        const int r2 = i + s * m;
        if (in_work[r2]) continue;
        const double gp = s == 0 ? bp(i) : -bp(i);
        if (gp <= floor) continue;
        const double gc = s == 0 ? bc(i) : -bc(i);
        const double len = std::max(0.0, (limit - gc) / gp);
        if (len < step) {
          step = len;
          block = r2;
        }
      }
    }
    c += step * p;
    if (block >= 0) {
      work.push_back(block);
      in_work[block] = 1;
    }
  }

  ChebSeries out(c);
  const double sup = out.sup_norm(20001);
  if (sup > limit) out = out.scaled(limit / sup);
  return out;
}

}  // namespace maxent
