// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/qsvt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include <unsupported/Eigen/LevenbergMarquardt>

namespace maxent {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kResidualPoints = 2001;

using Mat2 = Eigen::Matrix2cd;

Mat2 zphase(double psi) {
  Mat2 e = Mat2::Zero();
  e(0, 0) = std::polar(1.0, psi);
  e(1, 1) = std::polar(1.0, -psi);
  return e;
}

Mat2 wx(double x) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  Mat2 w;
  w << x, cplx(0.0, s), cplx(0.0, s), x;
  return w;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

int nominal_part_degree(int d, Parity p) {
  const bool even = d % 2 == 0;
  if (p == Parity::kEven) return even ? d : d - 1;
  return even ? d - 1 : d;
}

// Symmetric reduction: psi_j = r_{min(j, d - j)}.
Eigen::VectorXd expand(const Eigen::VectorXd& r, int d) {
  Eigen::VectorXd psi(d + 1);
  for (int j = 0; j <= d; ++j) psi(j) = r(std::min(j, d - j));
  return psi;
}

struct QspFunctor : Eigen::DenseFunctor<double> {
  QspFunctor(int d, Eigen::VectorXd nodes, Eigen::VectorXd target)
      : Eigen::DenseFunctor<double>(static_cast<int>(nodes.size()),
                                    static_cast<int>(nodes.size())),
        d(d), nodes(std::move(nodes)), target(std::move(target)) {}

  int operator()(const InputType& r, ValueType& f) const {
    const Eigen::VectorXd psi = expand(r, d);
    for (Eigen::Index k = 0; k < nodes.size(); ++k)
      f(k) = qsp_response(psi, nodes(k)) - target(k);
    return 0;
  }

  // dU/dpsi_j = P_j (iZ) S_j with P_j the prefix through e^{i psi_j Z}.
  int df(const InputType& r, JacobianType& jac) const {
    const Eigen::VectorXd psi = expand(r, d);
    jac.setZero();
    std::vector<Mat2> pre(d + 1), suf(d + 1);
    Mat2 iz = Mat2::Zero();
    iz(0, 0) = cplx(0.0, 1.0);
    iz(1, 1) = cplx(0.0, -1.0);
    for (Eigen::Index k = 0; k < nodes.size(); ++k) {
      const Mat2 w = wx(nodes(k));
      pre[0] = zphase(psi(0));
      for (int j = 1; j <= d; ++j) pre[j] = pre[j - 1] * w * zphase(psi(j));
      suf[d] = Mat2::Identity();
      for (int j = d - 1; j >= 0; --j) suf[j] = w * zphase(psi(j + 1)) * suf[j + 1];
      for (int j = 0; j <= d; ++j) {
        const cplx g = (pre[j] * iz * suf[j])(0, 0);
        jac(k, std::min(j, d - j)) += g.real();
      }
    }
    return 0;
  }

  int d;
  Eigen::VectorXd nodes, target;
};

double part_residual(const ParityPart& part) {
  const Eigen::VectorXd x = uniform_grid(kResidualPoints);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    worst = std::max(worst, std::abs(qsp_response(part.psi, x(i)) - part.target(x(i))));
  return worst;
}

int solve_part(ParityPart& part, int max_iter) {
  const int d = part.degree;
  if (d == 0) {
    part.psi = Eigen::VectorXd::Constant(1, std::acos(std::clamp(part.target.coeffs()(0), -1.0, 1.0)));
    return 0;
  }
  const int dt = (d + 2) / 2;  // ceil((d + 1) / 2)
  Eigen::VectorXd nodes(dt), tv(dt);
  for (int k = 1; k <= dt; ++k) {
    nodes(k - 1) = std::cos((2.0 * k - 1.0) * kPi / (4.0 * dt));
    tv(k - 1) = part.target(nodes(k - 1));
  }
  QspFunctor f(d, nodes, tv);
  Eigen::LevenbergMarquardt<QspFunctor> lm(f);
  lm.setMaxfev(max_iter);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setGtol(0.0);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(dt);
  r(0) = kPi / 4.0;
  lm.minimize(r);
  part.psi = expand(r, d);
  return static_cast<int>(lm.iterations());
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(Parity p) {
  switch (p) {
    case Parity::kEven: return "even";
    case Parity::kOdd: return "odd";
    case Parity::kMixed: return "mixed";
  }
  return "?";
}

const char* to_string(FunctionKind k) {
  switch (k) {
    case FunctionKind::kExp: return "exp";
    case FunctionKind::kCos: return "cos";
    case FunctionKind::kSin: return "sin";
    case FunctionKind::kGaussian: return "gaussian";
    case FunctionKind::kLog1p: return "log1p";
    case FunctionKind::kMonomial: return "monomial";
  }
  return "?";
}

PolynomialSpec make_polynomial(const ChebSeries& p, int degree) {
  PolynomialSpec s;
  s.degree = degree < 0 ? p.degree() : degree;
  s.poly = p.with_degree(s.degree);
  const Eigen::VectorXd& c = s.poly.coeffs();
  const double big = std::max(c.cwiseAbs().maxCoeff(), 1e-300);
  double even = 0.0, odd = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    double& slot = k % 2 ? odd : even;
    slot = std::max(slot, std::abs(c(k)));
  }
  const bool has_even = even > 1e-14 * big, has_odd = odd > 1e-14 * big;
  s.parity = has_even && has_odd ? Parity::kMixed : (has_odd ? Parity::kOdd : Parity::kEven);
  if (s.parity == Parity::kEven) s.poly = s.poly.even_part();
  if (s.parity == Parity::kOdd) s.poly = s.poly.odd_part();
  // A definite-parity series whose top coefficient vanishes (cos truncated
  // at odd degree) has one degree less than its length suggests.
  if (s.parity != Parity::kMixed && (s.degree % 2 == 0) != (s.parity == Parity::kEven)) {
    s.degree -= 1;
    s.poly = s.poly.with_degree(s.degree);
  }
  s.sup = s.poly.sup_norm(20001);
  return s;
}

double FunctionTarget::operator()(double x) const {
  switch (kind) {
    case FunctionKind::kExp: return std::exp(param * x);
    case FunctionKind::kCos: return std::cos(param * x);
    case FunctionKind::kSin: return std::sin(param * x);
    case FunctionKind::kGaussian: return std::exp(-x * x / (2.0 * param * param));
    case FunctionKind::kLog1p: return std::log1p(param * x);
    case FunctionKind::kMonomial: {
      double v = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
      return v;
    }
  }
  return 0.0;
}

void FunctionTarget::validate() const {
  if (!std::isfinite(param)) throw Error(ErrorCode::kInvalidArgument, "non-finite parameter");
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  if (eps < 1e-14)
    throw Error(ErrorCode::kInvalidArgument, "requested eps below double precision reach");
  if (kind == FunctionKind::kLog1p && !(std::abs(param) < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "log1p needs |c| < 1");
  if (kind == FunctionKind::kGaussian && !(param * param >= 0.5))
    throw Error(ErrorCode::kInvalidArgument, "gaussian needs sigma^2 >= 1/2");
  if (kind == FunctionKind::kMonomial && coeffs.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty monomial coefficients");
}

ChebSeries taylor_series(const FunctionTarget& t, int d) {
  if (d < 0) throw Error(ErrorCode::kInvalidArgument, "negative degree");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(d + 1);
  const double a = t.param;
  for (int j = 0; j <= d; ++j) {
    switch (t.kind) {
      case FunctionKind::kExp: m(j) = std::pow(a, j) / factorial(j); break;
      case FunctionKind::kCos:
        if (j % 2 == 0) m(j) = (j / 2 % 2 ? -1.0 : 1.0) * std::pow(a, j) / factorial(j);
        break;
      case FunctionKind::kSin:
        if (j % 2 == 1) m(j) = ((j - 1) / 2 % 2 ? -1.0 : 1.0) * std::pow(a, j) / factorial(j);
        break;
      case FunctionKind::kGaussian:
        if (j % 2 == 0)
          m(j) = std::pow(-1.0 / (2.0 * a * a), j / 2) / factorial(j / 2);
        break;
      case FunctionKind::kLog1p:
        if (j >= 1) m(j) = (j % 2 ? 1.0 : -1.0) * std::pow(a, j) / j;
        break;
      case FunctionKind::kMonomial:
        if (j < static_cast<int>(t.coeffs.size())) m(j) = t.coeffs[j];
        break;
    }
  }
  return ChebSeries::from_monomial(m);
}

double taylor_bound(const FunctionTarget& t, int d) {
  const double a = std::abs(t.param);
  switch (t.kind) {
    case FunctionKind::kExp: return std::exp(a) * std::pow(a, d + 1) / factorial(d + 1);
    case FunctionKind::kCos:
    case FunctionKind::kSin: return std::pow(a, d + 1) / factorial(d + 1);
    case FunctionKind::kGaussian: {
      const int m = d / 2;
      return std::pow(1.0 / (2.0 * a * a), m + 1) / factorial(m + 1);
    }
    case FunctionKind::kLog1p: return std::pow(a, d + 1) / ((d + 1) * (1.0 - a));
    case FunctionKind::kMonomial: {
      double s = 0.0;
      for (std::size_t k = d + 1; k < t.coeffs.size(); ++k) s += std::abs(t.coeffs[k]);
      return s;
    }
  }
  return 0.0;
}

PolynomialSpec approximate(const FunctionTarget& t) {
  t.validate();
  constexpr int kMaxDegree = 400;
  ChebSeries raw;
  int d = t.degree;
  if (t.chebyshev) {
    const Eigen::VectorXd x = uniform_grid(10001);
    Eigen::VectorXd fx(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) fx(i) = t(x(i));
    for (int k = std::max(d, 0); k <= kMaxDegree; ++k) {
      raw = ChebSeries::interpolate([&](double v) { return t(v); }, k);
      if (d >= 0 || (raw(x) - fx).cwiseAbs().maxCoeff() <= t.eps) {
        d = k;
        break;
      }
      if (k == kMaxDegree) throw Error(ErrorCode::kInvalidArgument, "eps not reachable");
    }
  } else {
    if (d < 0) {
      d = 0;
      while (taylor_bound(t, d) > t.eps) {
        if (++d > kMaxDegree) throw Error(ErrorCode::kInvalidArgument, "eps not reachable");
      }
      if (t.kind == FunctionKind::kExp) {
        d = std::max({d, static_cast<int>(std::ceil(std::log2(2.0 / t.eps))),
                      static_cast<int>(std::ceil(2.0 * std::numbers::e * std::abs(t.param)))});
      }
    }
    raw = taylor_series(t, d);
  }
  const double sup = raw.sup_norm(20001);
  const double scale = sup > 0.0 ? 0.5 / sup : 1.0;
  PolynomialSpec s = make_polynomial(raw.scaled(scale), d);
  s.scale = scale;
  s.kind = to_string(t.kind);
  s.params = {t.param};
  s.params.insert(s.params.end(), t.coeffs.begin(), t.coeffs.end());
  s.params.push_back(t.chebyshev ? 1.0 : 0.0);
  return s;
}

std::vector<double> ParityPart::phi() const {
  std::vector<double> out;
  if (degree == 0) return out;
  out.push_back(psi(0) - kPi / 4.0);
  for (int k = 1; k < degree; ++k) out.push_back(psi(k) - kPi / 2.0);
  return out;
}

double ParityPart::gamma() const {
  if (degree == 0) return psi(0);
  return psi(degree) - kPi / 4.0 + degree * kPi / 2.0;
}

double qsp_response(const Eigen::VectorXd& psi, double x) {
  const Mat2 w = wx(x);
  Eigen::RowVector2cd row(std::polar(1.0, psi(0)), 0.0);
  for (Eigen::Index j = 1; j < psi.size(); ++j) {
    row = row * w;
    row(0) *= std::polar(1.0, psi(j));
    row(1) *= std::polar(1.0, -psi(j));
  }
  return row(0).real();
}

double QsvtPlan::realized(double x) const {
  if (parts.size() == 1) return qsp_response(parts[0].psi, x);
  return 0.5 * (qsp_response(parts[0].psi, x) + qsp_response(parts[1].psi, x));
}

Eigen::VectorXd QsvtPlan::realized(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = realized(x(i));
  return y;
}

int QsvtPlan::queries() const {
  int q = 0;
  for (const auto& p : parts) q = std::max(q, p.degree);
  return q;
}

QsvtPlan QsvtPlan::perturbed(double delta) const {
  QsvtPlan out = *this;
  for (auto& p : out.parts) p.psi.array() += delta;
  return out;
}

PhaseCache::PhaseCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, "unreadable phase cache " + path_ + ": " + e.what());
  }
  if (j.value("version", 0) != kVersion) return;  // stale format, start over
  for (const auto& [key, parts] : j.at("entries").items()) {
    std::vector<Eigen::VectorXd> v;
    for (const auto& p : parts) {
      const auto raw = p.get<std::vector<double>>();
      v.push_back(Eigen::Map<const Eigen::VectorXd>(raw.data(), static_cast<Eigen::Index>(raw.size())));
    }
    entries_[key] = std::move(v);
  }
}

PhaseCache& PhaseCache::from_env() {
  static PhaseCache cache = [] {
    const char* p = std::getenv("MAXENT_QPREP_CACHE");
    return p && *p ? PhaseCache(p) : PhaseCache();
  }();
  return cache;
}

std::string PhaseCache::key(const PolynomialSpec& p, double tol) {
  std::ostringstream k;
  if (p.kind.empty()) {
    k << "cheb|";
    for (Eigen::Index i = 0; i < p.poly.coeffs().size(); ++i) k << (i ? "," : "") << format17(p.poly.coeffs()(i));
  } else {
    k << p.kind << '|';
    for (std::size_t i = 0; i < p.params.size(); ++i) k << (i ? "," : "") << format17(p.params[i]);
  }
  k << '|' << p.degree << '|' << format17(tol);
  return k.str();
}

std::optional<std::vector<Eigen::VectorXd>> PhaseCache::find(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void PhaseCache::store(const std::string& key, const std::vector<Eigen::VectorXd>& psi) {
  entries_[key] = psi;
  if (!path_.empty()) save();
}

void PhaseCache::save() const {
  if (path_.empty()) return;
  nlohmann::json j;
  j["version"] = kVersion;
  j["entries"] = nlohmann::json::object();
  for (const auto& [key, parts] : entries_) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : parts) arr.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    j["entries"][key] = arr;
  }
  std::ofstream out(path_);
  if (!out) throw Error(ErrorCode::kIo, "cannot write phase cache " + path_);
  out << j.dump(1) << '\n';
}

QsvtPlan solve_phases(const PolynomialSpec& p, double tol, PhaseCache* cache, int max_iter) {
  const double bound = p.parity == Parity::kMixed ? 0.5 : 1.0;
  if (p.sup > bound + 1e-9)
    throw Error(ErrorCode::kInvalidArgument,
                "polynomial sup " + std::to_string(p.sup) + " exceeds the QSVT bound");
  QsvtPlan plan;
  plan.poly = p;
  plan.tol = tol;
  if (p.parity == Parity::kMixed) {
    plan.parts.push_back({Parity::kEven, nominal_part_degree(p.degree, Parity::kEven),
                          p.poly.even_part().scaled(2.0), {}});
    plan.parts.push_back({Parity::kOdd, nominal_part_degree(p.degree, Parity::kOdd),
                          p.poly.odd_part().scaled(2.0), {}});
  } else {
    plan.parts.push_back({p.parity, p.degree, p.poly, {}});
  }
  const std::string key = cache ? PhaseCache::key(p, tol) : std::string();
  bool solved = false;
  if (cache) {
    if (auto hit = cache->find(key); hit && hit->size() == plan.parts.size()) {
      for (std::size_t i = 0; i < plan.parts.size(); ++i) plan.parts[i].psi = (*hit)[i];
      solved = true;
      for (const auto& part : plan.parts)
        solved = solved && part.psi.size() == part.degree + 1 && part_residual(part) <= tol;
    }
  }
  if (!solved) {
    for (auto& part : plan.parts) plan.iterations += solve_part(part, max_iter);
  }
  const Eigen::VectorXd x = uniform_grid(kResidualPoints);
  plan.residual = (plan.realized(x) - p.poly(x)).cwiseAbs().maxCoeff();
  if (!(plan.residual <= tol))
    throw Error(ErrorCode::kNotConverged,
                "phase solver stopped at residual " + format17(plan.residual));
  if (cache && !solved) {
    std::vector<Eigen::VectorXd> psi;
    for (const auto& part : plan.parts) psi.push_back(part.psi);
    cache->store(key, psi);
  }
  return plan;
}

namespace {

// One parity branch on be.width() + 2 qubits: reflection qubit r, phase qubit h.
CircuitPtr part_circuit(const BlockEncoding& be, const ParityPart& part) {
  const int w = be.width();
  const int qr = w, qh = w + 1;
  auto c = std::make_shared<Circuit>(w + 2);
  std::vector<Control> pi;
  for (int q : be.ancilla_qubits()) pi.push_back({q, false});
  const auto phi = part.phi();
  c->h(qh);
  for (int k = 0; k < part.degree; ++k) {
    c->append(be.circuit, {}, k % 2 == 1);
    c->gate(GateKind::X, qr, 0.0, pi);
    c->cx(qh, qr);
    c->rz(qr, 2.0 * phi[part.degree - 1 - k]);
    c->cx(qh, qr);
    c->gate(GateKind::X, qr, 0.0, pi);
  }
  c->rz(qh, -2.0 * part.gamma());
  c->h(qh);
  return c;
}

}  // namespace

BlockEncoding apply_qsvt(const BlockEncoding& be, const QsvtPlan& plan) {
  if (plan.parts.empty()) throw Error(ErrorCode::kInvalidArgument, "empty plan");
  const int extra = plan.parts.size() == 1 ? 2 : 3;
  if (be.width() + extra > 40) throw Error(ErrorCode::kCapExceeded, "ancilla budget exceeded");
  BlockEncoding out;
  out.n = be.n;
  out.ancillas = be.ancillas + extra;
  out.alpha = 1.0;
  const double d = plan.poly.degree;
  out.epsilon = plan.residual +
                (be.epsilon > 0.0 ? 4.0 * d * std::sqrt(be.epsilon / be.alpha) : 0.0);
  if (plan.parts.size() == 1) {
    out.circuit = part_circuit(be, plan.parts[0]);
    return out;
  }
  const int ql = be.width() + 2;
  auto c = std::make_shared<Circuit>(be.width() + 3);
  c->h(ql);
  c->append(part_circuit(be, plan.parts[0]), {{ql, false}});
  c->append(part_circuit(be, plan.parts[1]), {{ql, true}});
  c->h(ql);
  out.circuit = c;
  return out;
}

Eigen::VectorXd block_diagonal(const BlockEncoding& be) {
  const Eigen::Index dim = Eigen::Index{1} << be.n;
  CVector amps = CVector::Zero(Eigen::Index{1} << be.width());
  amps.head(dim).setConstant(1.0 / std::sqrt(static_cast<double>(dim)));
  Simulator sim;
  sim.run(amps, be.width(), *be.circuit);
  const CVector head = amps.head(dim) * std::sqrt(static_cast<double>(dim));
  if (head.imag().cwiseAbs().maxCoeff() > 1e-8)
    throw Error(ErrorCode::kInvalidArgument, "block diagonal is not real");
  return head.real();
}

BlockEncoding diagonal_encoding(const Eigen::VectorXd& g) {
  const Eigen::Index dim = g.size();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n == 0)
    throw Error(ErrorCode::kInvalidArgument, "diagonal length must be a power of two >= 2");
  const double alpha = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  auto c = std::make_shared<Circuit>(n + 1);
  c->h(n);
  for (Eigen::Index x = 0; x < dim; ++x) {
    std::vector<Control> ctl;
    for (int q = 0; q < n; ++q) ctl.push_back({q, static_cast<bool>(x >> q & 1)});
    const double theta = std::acos(std::clamp(g(x) / alpha, -1.0, 1.0));
    c->gate(GateKind::RZ, n, -2.0 * theta, ctl);
  }
  c->h(n);
  return {c, n, 1, alpha, 0.0};
}

BlockEncoding exact_transform(const BlockEncoding& be,
                              const std::function<double(double)>& g) {
  if (be.width() <= kDenseMatrixCap) {
    CMatrix b = be.block();
    b.diagonal().setZero();
    if (b.cwiseAbs().maxCoeff() > 1e-9)
      throw Error(ErrorCode::kInvalidArgument, "exact_transform needs a diagonal block");
  }
  const Eigen::VectorXd x = block_diagonal(be);
  Eigen::VectorXd gx(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) gx(i) = g(x(i));
  return diagonal_encoding(gx);
}

BlockEncoding exact_transform(const BlockEncoding& be, const FunctionTarget& t) {
  t.validate();
  return exact_transform(be, [&t](double v) { return t(v); });
}

}  // namespace maxent
