// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/model.hpp"

#include <cmath>
#include <limits>

#include "maxent/statevector.hpp"

namespace maxent {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

double binomial(int p, int i) {
  double b = 1.0;
  for (int k = 1; k <= i; ++k) b = b * (p - i + k) / k;
  return b;
}

double log_sum_exp(const Eigen::VectorXd& v) {
  const double top = v.maxCoeff();
  return top + std::log((v.array() - top).exp().sum());
}

}  // namespace

const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::kLinear: return "linear";
    case ConstraintKind::kPower: return "power";
    case ConstraintKind::kLog: return "log";
    case ConstraintKind::kCustomPoly: return "custom-poly";
  }
  return "?";
}

double ConstraintSpec::operator()(double x) const {
  switch (kind) {
    case ConstraintKind::kLinear: return x;
    case ConstraintKind::kPower: return std::pow(x, power);
    case ConstraintKind::kLog: return std::log(x);
    case ConstraintKind::kCustomPoly: {
      double s = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * x + *it;
      return s;
    }
  }
  return 0.0;
}

int ConstraintSpec::poly_degree() const {
  switch (kind) {
    case ConstraintKind::kLinear: return 1;
    case ConstraintKind::kPower: return power;
    case ConstraintKind::kLog: return 0;
    case ConstraintKind::kCustomPoly: return std::max(0, static_cast<int>(coeffs.size()) - 1);
  }
  return 0;
}

std::string ConstraintSpec::name() const {
  switch (kind) {
    case ConstraintKind::kLinear: return "x";
    case ConstraintKind::kPower: return "x^" + std::to_string(power);
    case ConstraintKind::kLog: return "ln x";
    case ConstraintKind::kCustomPoly: return "poly" + std::to_string(poly_degree());
  }
  return "?";
}

ConstraintSpec ConstraintSpec::linear() { return {}; }

ConstraintSpec ConstraintSpec::power_of(int p) {
  require(p >= 1, "power constraint needs p >= 1");
  if (p == 1) return linear();
  ConstraintSpec c;
  c.kind = ConstraintKind::kPower;
  c.power = p;
  c.degree = p;
  return c;
}

ConstraintSpec ConstraintSpec::log(int approx_degree) {
  require(approx_degree >= 1, "log constraint needs a positive approximation degree");
  ConstraintSpec c;
  c.kind = ConstraintKind::kLog;
  c.degree = approx_degree;
  return c;
}

ConstraintSpec ConstraintSpec::custom(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  require(coeffs.size() >= 2, "custom polynomial needs degree >= 1");
  ConstraintSpec c;
  c.kind = ConstraintKind::kCustomPoly;
  c.coeffs = std::move(coeffs);
  c.degree = c.poly_degree();
  return c;
}

const char* to_string(Convention c) { return c == Convention::kDensity ? "density" : "sqrt"; }

Convention parse_convention(const std::string& s) {
  if (s == "density") return Convention::kDensity;
  if (s == "sqrt") return Convention::kSqrt;
  throw Error(ErrorCode::kInvalidArgument, "unknown convention '" + s + "'");
}

// ---------------------------------------------------------------- model

void MaxEntModel::validate() const {
  require(!constraints.empty(), "model needs at least one constraint");
  require(multipliers.size() == constraints.size(), "multiplier count does not match constraints");
  require(n >= 1, "grid width must be positive");
  if (n > kMaxGridQubits) throw Error(ErrorCode::kCapExceeded, "grid width above the simulator cap");
  require(interval.b > interval.a && std::isfinite(interval.a) && std::isfinite(interval.b),
          "empty interval");
  for (const auto& c : constraints) {
    require(c.degree >= 1, "constraint degree must be >= 1");
    if (c.kind == ConstraintKind::kLog) require(interval.a > 0.0, "log constraint needs a > 0");
  }
  for (double l : multipliers) require(std::isfinite(l), "non-finite multiplier");
}

void MaxEntModel::update_norms() {
  validate();
  const Eigen::VectorXd x = grid();
  for (auto& c : constraints) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) m = std::max(m, std::abs(c(x(i))));
    c.fmax = m;
  }
}

Eigen::VectorXd MaxEntModel::grid() const { return grid_points(interval, n); }

Eigen::VectorXd MaxEntModel::exponent() const {
  validate();
  const Eigen::VectorXd x = grid();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(x.size());
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    if (multipliers[k] == 0.0) continue;
    for (Eigen::Index i = 0; i < x.size(); ++i) f(i) += multipliers[k] * constraints[k](x(i));
  }
  return f;
}

Eigen::VectorXd MaxEntModel::amplitude_exponent() const {
  const Eigen::VectorXd f = exponent();
  return convention == Convention::kDensity ? f : Eigen::VectorXd(0.5 * f);
}

Eigen::VectorXd MaxEntModel::target_amplitudes() const {
  const Eigen::VectorXd e = amplitude_exponent();
  Eigen::VectorXd a = (e.array() - e.maxCoeff()).exp().matrix();
  return a / a.norm();
}

GridDensity MaxEntModel::density() const { return density_from_multipliers(*this); }

double MaxEntModel::lambda_abs() const {
  const Eigen::VectorXd x = grid();
  double s = 0.0;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    double m = constraints[k].fmax;
    if (m == 0.0)
      for (Eigen::Index i = 0; i < x.size(); ++i) m = std::max(m, std::abs(constraints[k](x(i))));
    s += std::abs(multipliers[k]) * m;
  }
  return s;
}

double MaxEntModel::lambda_rel() const {
  const Eigen::VectorXd f = exponent();
  const double rms = std::sqrt(f.squaredNorm() / static_cast<double>(f.size()));
  require(rms > 0.0, "relative scale of a zero exponent");
  return lambda_abs() / rms;
}

double MaxEntModel::log_normalization() const {
  return 0.5 * log_sum_exp(2.0 * amplitude_exponent());
}

double MaxEntModel::filling_rate() const {
  const Eigen::VectorXd e = amplitude_exponent();
  return maxent::filling_rate((e.array() - e.maxCoeff()).exp().matrix());
}

GridDensity density_from_multipliers(const MaxEntModel& m) {
  return density_from_log(m.grid(), m.exponent(), "maxent-from-multipliers");
}

// ---------------------------------------------------------------- families

MaxEntModel model_from_family(const FamilyParams& p, int n, std::optional<Interval> iv,
                              Convention conv, int log_degree) {
  p.validate();
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "grid width must be positive");
  if (n > kMaxGridQubits) throw Error(ErrorCode::kCapExceeded, "grid width above the simulator cap");
  MaxEntModel m;
  m.n = n;
  m.interval = iv ? *iv : default_interval(p, n);
  m.convention = conv;
  m.family = p;
  using C = ConstraintSpec;
  switch (p.family) {
    case Family::kNormal:
      m.constraints = {C::linear(), C::power_of(2)};
      m.multipliers = {p.mu / p.sigma2, -0.5 / p.sigma2};
      break;
    case Family::kExponential:
      m.constraints = {C::linear()};
      m.multipliers = {-p.rate};
      break;
    case Family::kPareto:
      m.constraints = {C::log(log_degree)};
      m.multipliers = {-(p.alpha + 1.0)};
      break;
    case Family::kRayleigh:
      m.constraints = {C::log(log_degree), C::power_of(2)};
      m.multipliers = {1.0, -0.5 / (p.sigma * p.sigma)};
      break;
    case Family::kChi:
      m.constraints = {C::log(log_degree), C::power_of(2)};
      m.multipliers = {p.k - 1.0, -0.5};
      break;
    case Family::kChiSquared:
      m.constraints = {C::log(log_degree), C::linear()};
      m.multipliers = {p.k / 2.0 - 1.0, -0.5};
      break;
  }
  const FamilyMoments mom = family_moments(p);
  for (auto& c : m.constraints) {
    if (c.kind == ConstraintKind::kLinear) c.target_moment = mom.mean;
    if (c.kind == ConstraintKind::kPower && c.power == 2) c.target_moment = mom.second;
    if (c.kind == ConstraintKind::kLog && std::isfinite(mom.log_mean)) c.target_moment = mom.log_mean;
  }
  m.update_norms();
  return m;
}

NormalParams normal_from_multipliers(double l1, double l2) {
  require(l2 < 0.0, "normal needs a negative quadratic multiplier");
  return {-l1 / (2.0 * l2), -1.0 / (2.0 * l2)};
}

FamilyParams family_from_model(const MaxEntModel& m) {
  require(m.family.has_value(), "model carries no family tag");
  FamilyParams p = *m.family;
  const auto& l = m.multipliers;
  switch (p.family) {
    case Family::kNormal: {
      const NormalParams np = normal_from_multipliers(l[0], l[1]);
      p.mu = np.mu;
      p.sigma2 = np.sigma2;
      break;
    }
    case Family::kExponential: p.rate = -l[0]; break;
    case Family::kPareto: p.alpha = -l[0] - 1.0; break;
    case Family::kRayleigh: p.sigma = std::sqrt(-0.5 / l[1]); break;
    case Family::kChi: p.k = l[0] + 1.0; break;
    case Family::kChiSquared: p.k = 2.0 * (l[0] + 1.0); break;
  }
  p.validate();
  return p;
}

// ---------------------------------------------------------------- centered

double CenteredTerm::operator()(double u) const {
  return kind == Kind::kLog1p ? std::log1p(c * u) : std::pow(u, power);
}

double CenteredModel::operator()(double u) const {
  double s = constant;
  for (const auto& t : terms) s += t.y * t(u);
  return s;
}

Eigen::VectorXd CenteredModel::u_grid(int n) const { return grid_points({-1.0, 1.0}, n); }

CenteredModel centered(const MaxEntModel& m) {
  m.validate();
  CenteredModel cm;
  cm.mid = 0.5 * (m.interval.a + m.interval.b);
  cm.half = 0.5 * (m.interval.b - m.interval.a);
  const double scale = m.convention == Convention::kDensity ? 1.0 : 0.5;

  int top = 0;
  bool has_log = false;
  int log_degree = 0;
  for (const auto& c : m.constraints) {
    top = std::max(top, c.poly_degree());
    if (c.kind == ConstraintKind::kLog) {
      has_log = true;
      log_degree = std::max(log_degree, c.degree);
    }
  }
  // u^i coefficient of sum_k lambda_k poly_k(mid + half u).
  std::vector<double> y(top + 1, 0.0);
  double log_y = 0.0;
  for (std::size_t k = 0; k < m.constraints.size(); ++k) {
    const auto& c = m.constraints[k];
    const double lam = scale * m.multipliers[k];
    if (c.kind == ConstraintKind::kLog) {
      log_y += lam;
      continue;
    }
    std::vector<double> mono;
    if (c.kind == ConstraintKind::kCustomPoly) {
      mono = c.coeffs;
    } else {
      mono.assign(c.poly_degree() + 1, 0.0);
      mono.back() = 1.0;
    }
    for (int p = 0; p < static_cast<int>(mono.size()); ++p) {
      if (mono[p] == 0.0) continue;
      for (int i = 0; i <= p; ++i)
        y[i] += lam * mono[p] * binomial(p, i) * std::pow(cm.mid, p - i) * std::pow(cm.half, i);
    }
  }
  cm.constant = y[0];
  if (has_log) {
    require(cm.mid > 0.0, "log constraint needs a positive interval");
    cm.constant += log_y * std::log(cm.mid);
    cm.terms.push_back({CenteredTerm::Kind::kLog1p, 0, cm.half / cm.mid, log_y, log_degree});
  }
  for (int i = 1; i <= top; ++i) cm.terms.push_back({CenteredTerm::Kind::kPower, i, 0.0, y[i], i});
  return cm;
}

}  // namespace maxent
