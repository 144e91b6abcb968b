// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "maxent/statevector.hpp"

namespace maxent {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::kNormal: return "normal";
    case Family::kExponential: return "exponential";
    case Family::kPareto: return "pareto";
    case Family::kRayleigh: return "rayleigh";
    case Family::kChi: return "chi";
    case Family::kChiSquared: return "chi-squared";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::kNormal, Family::kExponential, Family::kPareto, Family::kRayleigh,
                   Family::kChi, Family::kChiSquared})
    if (name == to_string(f)) return f;
  if (name == "chi2" || name == "chisquared") return Family::kChiSquared;
  throw Error(ErrorCode::kInvalidArgument, "unknown family '" + name + "'");
}

void FamilyParams::validate() const {
  switch (family) {
    case Family::kNormal:
      require(std::isfinite(mu) && sigma2 > 0.0 && std::isfinite(sigma2), "normal needs sigma^2 > 0");
      break;
    case Family::kExponential: require(rate > 0.0 && std::isfinite(rate), "exponential needs rate > 0"); break;
    case Family::kPareto: require(alpha > 0.0 && xm > 0.0, "pareto needs alpha > 0 and xm > 0"); break;
    case Family::kRayleigh: require(sigma > 0.0 && std::isfinite(sigma), "rayleigh needs sigma > 0"); break;
    case Family::kChi:
    case Family::kChiSquared: require(k >= 1.0 && std::isfinite(k), "chi families need k >= 1"); break;
  }
}

Eigen::VectorXd grid_points(const Interval& iv, int n) {
  require(n >= 1 && n <= 30, "grid width out of range");
  require(iv.b > iv.a, "empty interval");
  return Eigen::VectorXd::LinSpaced(Eigen::Index{1} << n, iv.a, iv.b);
}

double coverage_end(const FamilyParams& p) {
  p.validate();
  const FamilyMoments m = family_moments(p);
  switch (p.family) {
    case Family::kNormal: return p.mu + 4.0 * std::sqrt(p.sigma2);
    case Family::kExponential: return 5.0 / p.rate;
    case Family::kRayleigh:
    case Family::kChi:
    case Family::kChiSquared: return m.mean + 4.0 * std::sqrt(m.second - m.mean * m.mean);
    case Family::kPareto: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

Interval default_interval(const FamilyParams& p, int n) {
  p.validate();
  const double tail = std::ldexp(1.0, -n);
  switch (p.family) {
    case Family::kNormal: {
      const double s = std::sqrt(p.sigma2);
      return {p.mu - 4.0 * s, p.mu + 4.0 * s};
    }
    case Family::kExponential: return {0.0, coverage_end(p)};
    case Family::kPareto: return {p.xm, std::ldexp(p.xm, n)};
    default: {
      const double half = coverage_end(p) / 2.0;
      return {half * tail, half * (2.0 - tail)};
    }
  }
}

double log_density(const FamilyParams& p, double x) {
  switch (p.family) {
    case Family::kNormal: return -(x - p.mu) * (x - p.mu) / (2.0 * p.sigma2);
    case Family::kExponential: return x < 0.0 ? kNegInf : -p.rate * x;
    case Family::kPareto: return x < p.xm ? kNegInf : -(p.alpha + 1.0) * std::log(x);
    case Family::kRayleigh:
      return x <= 0.0 ? kNegInf : std::log(x) - x * x / (2.0 * p.sigma * p.sigma);
    case Family::kChi:
      if (x <= 0.0) return p.k == 1.0 && x == 0.0 ? 0.0 : kNegInf;
      return (p.k - 1.0) * std::log(x) - x * x / 2.0;
    case Family::kChiSquared:
      if (x <= 0.0) return p.k == 2.0 && x == 0.0 ? 0.0 : kNegInf;
      return (p.k / 2.0 - 1.0) * std::log(x) - x / 2.0;
  }
  return kNegInf;
}

GridDensity density_from_log(const Eigen::VectorXd& x, const Eigen::VectorXd& logp,
                             std::string provenance) {
  const double top = logp.maxCoeff();
  require(std::isfinite(top), "density has no finite value on the grid");
  GridDensity g;
  g.x = x;
  g.p = (logp.array() - top).exp().matrix();
  g.p /= g.p.sum();
  g.provenance = std::move(provenance);
  return g;
}

GridDensity density_from_family(const FamilyParams& p, const Interval& iv, int n) {
  p.validate();
  const Eigen::VectorXd x = grid_points(iv, n);
  Eigen::VectorXd lp(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) lp(i) = log_density(p, x(i));
  return density_from_log(x, lp, std::string("family:") + to_string(p.family));
}

GridDensity mixture_density(const std::vector<FamilyParams>& components,
                            const std::vector<double>& weights, const Interval& iv, int n) {
  require(!components.empty() && components.size() == weights.size(), "weight count mismatch");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), "negative mixture weight");
    total += w;
  }
  require(std::abs(total - 1.0) < 1e-9, "mixture weights must sum to 1");
  GridDensity out;
  out.x = grid_points(iv, n);
  out.p = Eigen::VectorXd::Zero(out.x.size());
  for (std::size_t c = 0; c < components.size(); ++c)
    out.p += weights[c] * density_from_family(components[c], iv, n).p;
  out.p /= out.p.sum();
  out.provenance = "mixture";
  return out;
}

Metrics metrics(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw Error(ErrorCode::kLayoutMismatch, "metric grids differ");
  Metrics m;
  double bc = 0.0, tv = 0.0, kl = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    bc += std::sqrt(p(i) * q(i));
    tv += std::abs(p(i) - q(i));
    if (p(i) > 0.0) {
      if (q(i) > 0.0) {
        kl += p(i) * std::log(p(i) / q(i));
      } else {
        m.kl_infinite = true;
      }
    }
  }
  m.fidelity = bc * bc;
  m.tv = 0.5 * tv;
  m.kl = m.kl_infinite ? std::numeric_limits<double>::infinity() : std::max(kl, 0.0);
  return m;
}

double filling_rate(const Eigen::VectorXd& v) {
  const double top = v.cwiseAbs().maxCoeff();
  require(top > 0.0, "filling rate of a zero vector");
  return std::sqrt(v.squaredNorm() / static_cast<double>(v.size())) / top;
}

double gamma_fn(double x) { return std::tgamma(x); }

double digamma(double x) { return boost::math::digamma(x); }

double lower_gamma2(double t) { return -std::expm1(-t) - t * std::exp(-t); }

double gamma_p(double s, double t) { return boost::math::gamma_p(s, t); }

FamilyMoments family_moments(const FamilyParams& p) {
  p.validate();
  FamilyMoments m;
  const double ln2 = std::numbers::ln2;
  switch (p.family) {
    case Family::kNormal:
      m.mean = p.mu;
      m.second = p.mu * p.mu + p.sigma2;
      m.log_mean = std::numeric_limits<double>::quiet_NaN();
      break;
    case Family::kExponential:
      m.mean = 1.0 / p.rate;
      m.second = 2.0 / (p.rate * p.rate);
      m.log_mean = -kEulerGamma - std::log(p.rate);
      break;
    case Family::kPareto:
      m.mean = p.alpha > 1.0 ? p.alpha * p.xm / (p.alpha - 1.0) : std::numeric_limits<double>::infinity();
      m.second = p.alpha > 2.0 ? p.alpha * p.xm * p.xm / (p.alpha - 2.0)
                               : std::numeric_limits<double>::infinity();
      m.log_mean = std::log(p.xm) + 1.0 / p.alpha;
      break;
    case Family::kRayleigh:
      m.mean = p.sigma * std::sqrt(std::numbers::pi / 2.0);
      m.second = 2.0 * p.sigma * p.sigma;
      m.log_mean = 0.5 * (std::log(2.0 * p.sigma * p.sigma) - kEulerGamma);
      break;
    case Family::kChi:
      m.mean = std::sqrt(2.0) * std::exp(std::lgamma((p.k + 1.0) / 2.0) - std::lgamma(p.k / 2.0));
      m.second = p.k;
      m.log_mean = 0.5 * (digamma(p.k / 2.0) + ln2);
      break;
    case Family::kChiSquared:
      m.mean = p.k;
      m.second = p.k * p.k + 2.0 * p.k;
      m.log_mean = digamma(p.k / 2.0) + ln2;
      break;
  }
  return m;
}

}  // namespace maxent
