// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/block_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace maxent {

namespace {

constexpr double kPi = std::numbers::pi;

int ceil_log2(int m) {
  int a = 0;
  while ((1 << a) < m) ++a;
  return a;
}

std::vector<int> iota_from(int start, int count) {
  std::vector<int> v(count);
  std::iota(v.begin(), v.end(), start);
  return v;
}

// Loader recursion: rotate qubits[level] for the sub-block selected by the
// already-fixed higher qubits (`prefix`).
void loader_level(Circuit& c, const Eigen::VectorXd& a, const std::vector<int>& q,
                  int level, std::size_t prefix) {
  const std::size_t half = std::size_t{1} << level;
  const std::size_t base = prefix << (level + 1);
  std::vector<Control> cs;
  for (std::size_t k = level + 1; k < q.size(); ++k)
    cs.push_back({q[k], static_cast<bool>((prefix >> (k - level - 1)) & 1)});
  double theta;
  if (level == 0) {
    theta = 2.0 * std::atan2(a(base + 1), a(base));
    if (a(base) == 0.0 && a(base + 1) == 0.0) theta = 0.0;
  } else {
    const double lo = a.segment(base, half).norm();
    const double hi = a.segment(base + half, half).norm();
    theta = (lo == 0.0 && hi == 0.0) ? 0.0 : 2.0 * std::atan2(hi, lo);
  }
  c.gate(GateKind::RY, q[level], theta, cs);
  if (level == 0) return;
  loader_level(c, a, q, level - 1, prefix << 1);
  loader_level(c, a, q, level - 1, (prefix << 1) | 1);
}

std::vector<Control> index_controls(const std::vector<int>& q, std::uint64_t k) {
  std::vector<Control> cs;
  for (std::size_t b = 0; b < q.size(); ++b) cs.push_back({q[b], static_cast<bool>(k >> b & 1)});
  return cs;
}

double pick_signed(double theta, int stay, int cont) {
  if (stay > 0 && cont > 0) return theta;
  if (stay < 0 && cont > 0) return 2.0 * kPi - theta;
  if (stay > 0 && cont < 0) return -theta;
  return theta - 2.0 * kPi;
}

}  // namespace

std::vector<int> BlockEncoding::ancilla_qubits() const { return iota_from(n, ancillas); }

CMatrix BlockEncoding::block() const { return extract_block(*circuit, ancilla_qubits()); }

Circuit amplitude_loader(const Eigen::VectorXd& a, const std::vector<int>& qubits,
                         int width) {
  const int m = static_cast<int>(qubits.size());
  if (m < 1 || a.size() != (Eigen::Index{1} << m))
    throw Error(ErrorCode::kInvalidArgument, "loader vector length must be 2^m");
  if (!a.allFinite() || std::abs(a.norm() - 1.0) > 1e-9)
    throw Error(ErrorCode::kInvalidArgument, "loader vector must be a unit vector");
  Circuit c(width);
  loader_level(c, a, qubits, m - 1, 0);
  return c;
}

void append_controlled(Circuit& out, const Circuit& u, const std::vector<Control>& controls) {
  for (const auto& op : u.ops()) {
    std::vector<Control> cs = op.controls;
    cs.insert(cs.end(), controls.begin(), controls.end());
    if (op.kind == GateKind::Sub) {
      out.append(op.sub, std::move(cs), op.adjoint);
    } else {
      out.gate(op.kind, op.target, op.theta, std::move(cs));
    }
  }
}

BlockEncoding lcu_of_unitaries(const std::vector<double>& c,
                               const std::vector<CircuitPtr>& unitaries, int n) {
  if (c.empty() || c.size() != unitaries.size())
    throw Error(ErrorCode::kInvalidArgument, "coefficient/unitary count mismatch");
  const double l1 = std::accumulate(c.begin(), c.end(), 0.0,
                                    [](double s, double v) { return s + std::abs(v); });
  if (!(l1 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "all-zero LCU coefficients");
  const int m = static_cast<int>(c.size());
  const int a = std::max(1, ceil_log2(m));
  const int width = n + a;
  const auto anc = iota_from(n, a);
  Eigen::VectorXd amp = Eigen::VectorXd::Zero(Eigen::Index{1} << a);
  for (int k = 0; k < m; ++k) amp(k) = std::sqrt(std::abs(c[k]) / l1);
  auto prep = std::make_shared<Circuit>(amplitude_loader(amp, anc, width));

  auto circ = std::make_shared<Circuit>(width);
  circ->append(prep);
  for (int k = 0; k < m; ++k) {
    const auto cs = index_controls(anc, static_cast<std::uint64_t>(k));
    if (unitaries[k]) append_controlled(*circ, *unitaries[k], cs);
    if (c[k] < 0) circ->gate(GateKind::Phase, 0, kPi, cs);
  }
  circ->append(prep, {}, true);
  BlockEncoding be;
  be.circuit = circ;
  be.n = n;
  be.ancillas = a;
  be.alpha = l1;
  return be;
}

namespace {

CircuitPtr minus_z(int n, int q) {
  auto u = std::make_shared<Circuit>(n);
  u->z(q).phase(q, kPi);
  return u;
}

}  // namespace

BlockEncoding linear_diagonal_be(int n) {
  if (n < 1 || n > 30) throw Error(ErrorCode::kOutOfRange, "linear block-encoding width out of range");
  const double denom = 2.0 * (std::ldexp(1.0, n) - 1.0);
  std::vector<double> c{0.5};
  std::vector<CircuitPtr> u{nullptr};
  for (int j = 1; j <= n; ++j) {
    c.push_back(std::ldexp(1.0, j - 1) / denom);
    u.push_back(minus_z(n, j - 1));
  }
  BlockEncoding be = lcu_of_unitaries(c, u, n);
  be.alpha = 1.0;  // the weights sum to one exactly
  return be;
}

BlockEncoding signed_linear_be(int n) {
  if (n < 1 || n > 30) throw Error(ErrorCode::kOutOfRange, "linear block-encoding width out of range");
  const double denom = std::ldexp(1.0, n) - 1.0;
  std::vector<double> c;
  std::vector<CircuitPtr> u;
  for (int j = 1; j <= n; ++j) {
    c.push_back(std::ldexp(1.0, j - 1) / denom);
    u.push_back(minus_z(n, j - 1));
  }
  BlockEncoding be = lcu_of_unitaries(c, u, n);
  be.alpha = 1.0;
  return be;
}

// ---------------------------------------------------------------- pairs

std::uint64_t StatePreparationPair::basis(int j) const {
  return j == 0 ? 0 : std::uint64_t{1} << (j - 1);
}

std::vector<double> ladder_angles(const std::vector<double>& y) {
  const int m = static_cast<int>(y.size());
  std::vector<double> theta(std::max(0, m - 1), 0.0);
  for (int j = 0; j + 1 < m; ++j) {
    double tail = 0.0;
    for (int k = j + 1; k < m; ++k) tail += std::abs(y[k]);
    if (tail == 0.0) {
      theta[j] = 0.0;
    } else if (y[j] == 0.0) {
      theta[j] = kPi;
    } else {
      theta[j] = 2.0 * std::atan(std::sqrt(tail / std::abs(y[j])));
    }
  }
  return theta;
}

std::vector<double> multiplier_angles(const std::vector<double>& lambda,
                                      const std::vector<double>& fmax) {
  const std::size_t m = lambda.size();
  if (fmax.size() != m) throw Error(ErrorCode::kInvalidArgument, "size mismatch");
  std::vector<double> theta(m);
  for (std::size_t k = 0; k < m; ++k) {
    double num = 0.0;
    for (std::size_t j = k + 1; j < m; ++j) num += 2.0 * lambda[j] * fmax[j];
    theta[k] = 2.0 * std::atan(std::sqrt(num / (2.0 * lambda[k] * fmax[k])));
  }
  return theta;
}

LadderAngles signed_ladder(const std::vector<double>& y) {
  const int m = static_cast<int>(y.size());
  LadderAngles out;
  out.left = ladder_angles(y);
  out.right = out.left;
  auto sgn = [](double v) { return v < 0.0 ? -1 : 1; };
  for (int j = 0; j + 1 < m; ++j) {
    const int cont = (j == m - 2) ? sgn(y[m - 1]) : 1;
    out.right[j] = pick_signed(out.left[j], sgn(y[j]), cont);
  }
  if (m == 1 && y[0] < 0.0) out.right_phase = kPi;
  return out;
}

Circuit ladder_circuit(const std::vector<LadderStep>& steps, const std::vector<int>& qubits,
                       int width) {
  if (qubits.size() < std::max<std::size_t>(1, steps.size()))
    throw Error(ErrorCode::kInvalidArgument, "ladder register too small");
  Circuit c(width);
  for (std::size_t j = 0; j < steps.size(); ++j) {
    if (j == 0) {
      c.gate(steps[0].kind, qubits[0], steps[0].theta);
    } else {
      c.gate(steps[j].kind, qubits[j], steps[j].theta, {{qubits[j - 1], true}});
      c.cx(qubits[j], qubits[j - 1]);
    }
  }
  return c;
}

std::vector<cplx> pair_amplitudes(const Circuit& c, int terms) {
  RegisterLayout l;
  l.add("pair", c.width());
  Statevector s = apply(Statevector(l), c);
  std::vector<cplx> out(terms);
  for (int j = 0; j < terms; ++j)
    out[j] = s.amplitudes()(j == 0 ? 0 : Eigen::Index{1} << (j - 1));
  return out;
}

StatePreparationPair sparse_spp(const std::vector<double>& y, SignScheme scheme) {
  const int m = static_cast<int>(y.size());
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "empty coefficient vector");
  double beta = 0.0;
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite coefficient");
    beta += std::abs(v);
  }
  if (!(beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "all-zero coefficient vector");

  StatePreparationPair pair;
  pair.terms = m;
  pair.width = std::max(1, m - 1);
  pair.beta = beta;
  pair.scheme = scheme;
  pair.theta = ladder_angles(y);
  const auto q = iota_from(0, pair.width);

  std::vector<LadderStep> left, right;
  double right_phase = 0.0;
  if (scheme == SignScheme::kAngle) {
    const LadderAngles la = signed_ladder(y);
    for (int j = 0; j + 1 < m; ++j) {
      left.push_back({GateKind::RY, la.left[j]});
      right.push_back({GateKind::RY, la.right[j]});
    }
    right_phase = la.right_phase;
  } else {
    // Zero entries inherit the sign before them, so they never add a flip.
    std::vector<int> s(m);
    int prev = 1;
    for (int j = 0; j < m; ++j) {
      s[j] = y[j] < 0.0 ? -1 : (y[j] > 0.0 ? 1 : prev);
      prev = s[j];
    }
    for (int j = 0; j + 1 < m; ++j) {
      if (s[j + 1] != s[j]) {
        left.push_back({GateKind::RX, pair.theta[j]});
        right.push_back({GateKind::RX, -pair.theta[j]});
      } else {
        left.push_back({GateKind::RY, pair.theta[j]});
        right.push_back({GateKind::RY, pair.theta[j]});
      }
    }
    if (s[0] < 0) right_phase = kPi;
  }
  auto pl = std::make_shared<Circuit>(ladder_circuit(left, q, pair.width));
  auto pr = std::make_shared<Circuit>(ladder_circuit(right, q, pair.width));
  if (right_phase != 0.0 || (scheme == SignScheme::kAngle && m == 1))
    pr->phase(0, right_phase);
  pair.left = pl;
  pair.right = pr;

  const auto c = pair_amplitudes(*pl, m);
  const auto d = pair_amplitudes(*pr, m);
  for (int j = 0; j < m; ++j) pair.epsilon += std::abs(beta * std::conj(c[j]) * d[j] - y[j]);
  return pair;
}

// ---------------------------------------------------------------- LCU

CircuitPtr embed(const BlockEncoding& be, const std::vector<int>& sys,
                 const std::vector<int>& anc, int width) {
  if (static_cast<int>(sys.size()) != be.n || static_cast<int>(anc.size()) < be.ancillas)
    throw Error(ErrorCode::kInvalidArgument, "embedding size mismatch");
  std::vector<int> map(be.circuit->width(), -1);
  for (int q = 0; q < be.n; ++q) map[q] = sys[q];
  for (int k = 0; k < be.ancillas; ++k) map[be.n + k] = anc[k];
  return remap(*be.circuit, map, width);
}

BlockEncoding lcu_select(const StatePreparationPair& pair,
                         const std::vector<BlockEncoding>& terms) {
  if (static_cast<int>(terms.size()) != pair.terms)
    throw Error(ErrorCode::kInvalidArgument, "term count does not match pair");
  const int n = terms.front().n;
  int amax = 0;
  for (const auto& t : terms) {
    if (t.n != n) throw Error(ErrorCode::kInvalidArgument, "terms differ in target width");
    amax = std::max(amax, t.ancillas);
  }
  const int width = n + amax + pair.width;
  const auto sys = iota_from(0, n);
  const auto anc = iota_from(n, amax);
  const auto pq = iota_from(n + amax, pair.width);
  std::vector<int> pmap = pq;
  auto pr = remap(*pair.right, pmap, width);
  auto pl = remap(*pair.left, pmap, width);

  auto circ = std::make_shared<Circuit>(width);
  circ->append(pr);
  for (int j = 0; j < pair.terms; ++j) {
    std::vector<Control> cs;
    if (j == 0) {
      for (int q : pq) cs.push_back({q, false});
    } else {
      cs.push_back({pq[j - 1], true});
    }
    circ->append(embed(terms[j], sys, anc, width), cs);
  }
  circ->append(pl, {}, true);

  BlockEncoding be;
  be.circuit = circ;
  be.n = n;
  be.ancillas = amax + pair.width;
  be.alpha = pair.beta;
  return be;
}

BlockEncoding lcu_combine(const StatePreparationPair& pair,
                          const std::vector<BlockEncoding>& terms) {
  if (terms.empty()) throw Error(ErrorCode::kInvalidArgument, "no terms");
  const double alpha = terms.front().alpha;
  double eps2 = 0.0;
  for (const auto& t : terms) {
    if (std::abs(t.alpha - alpha) > 1e-12 * std::max(1.0, alpha))
      throw Error(ErrorCode::kInvalidArgument, "terms differ in alpha");
    eps2 = std::max(eps2, t.epsilon);
  }
  BlockEncoding be = lcu_select(pair, terms);
  be.alpha = alpha * pair.beta;
  be.epsilon = alpha * pair.epsilon + alpha * pair.beta * eps2;
  return be;
}

double block_error(const BlockEncoding& be, const CMatrix& target) {
  const CMatrix diff = target - be.alpha * be.block();
  Eigen::JacobiSVD<CMatrix> svd(diff);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace maxent
