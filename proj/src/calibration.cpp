// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace maxent {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  const Eigen::VectorXd e = (z.array() - z.maxCoeff()).exp().matrix();
  return e / e.sum();
}

double kl_div(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const Metrics m = metrics(p, q);
  return m.kl_infinite ? std::numeric_limits<double>::infinity() : m.kl;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

Statevector ObservedOracle::state() const {
  RegisterLayout l;
  l.add("data", n);
  Statevector s(l);
  Simulator sim;
  sim.run(s, *circuit);
  return s;
}

ObservedOracle compile_observed(const Eigen::VectorXd& histogram) {
  const Eigen::Index size = histogram.size();
  int n = 0;
  while ((Eigen::Index{1} << n) < size) ++n;
  require(n >= 1 && (Eigen::Index{1} << n) == size, "histogram length must be 2^n");
  require((histogram.array() >= 0.0).all() && histogram.allFinite(), "negative histogram entry");
  require(std::abs(histogram.sum() - 1.0) < 1e-9, "histogram must sum to 1");
  ObservedOracle o;
  o.p = histogram;
  o.n = n;
  std::vector<int> q(n);
  for (int i = 0; i < n; ++i) q[i] = i;
  o.circuit = std::make_shared<Circuit>(amplitude_loader(histogram.cwiseSqrt(), q, n));
  return o;
}

const char* to_string(TemplateKind k) {
  switch (k) {
    case TemplateKind::kFamily: return "family";
    case TemplateKind::kNormalMixture: return "normal-mixture";
    case TemplateKind::kExponentialMixture: return "exponential-mixture";
  }
  return "?";
}

// ---------------------------------------------------------------- template

int ModelTemplate::size() const {
  switch (kind) {
    case TemplateKind::kFamily: {
      FamilyParams p;
      p.family = family;
      return model_from_family(p, n, interval).size();
    }
    case TemplateKind::kNormalMixture: return 3 * components;
    case TemplateKind::kExponentialMixture: return 2 * components;
  }
  return 0;
}

std::vector<std::string> ModelTemplate::names() const {
  std::vector<std::string> out;
  auto idx = [](const char* s, int c) { return std::string(s) + std::to_string(c); };
  switch (kind) {
    case TemplateKind::kFamily:
      for (int k = 0; k < size(); ++k) out.push_back(idx("lambda", k + 1));
      break;
    case TemplateKind::kNormalMixture:
      for (int c = 0; c < components; ++c) out.push_back(idx("z", c + 1));
      for (int c = 0; c < components; ++c) out.push_back(idx("log_sigma2_", c + 1));
      for (int c = 0; c < components; ++c) out.push_back(idx("logit", c + 1));
      break;
    case TemplateKind::kExponentialMixture:
      for (int c = 0; c < components; ++c) out.push_back(idx("log_rate", c + 1));
      for (int c = 0; c < components; ++c) out.push_back(idx("logit", c + 1));
      break;
  }
  return out;
}

MaxEntModel ModelTemplate::maxent_model(const Eigen::VectorXd& theta) const {
  require(kind == TemplateKind::kFamily, "template is a mixture");
  FamilyParams p;
  p.family = family;
  MaxEntModel m = model_from_family(p, n, interval, Convention::kSqrt);
  require(theta.size() == m.size(), "parameter count mismatch");
  m.multipliers = to_std(theta);
  m.family.reset();
  return m;
}

MixtureModel ModelTemplate::mixture_model(const Eigen::VectorXd& theta) const {
  require(kind != TemplateKind::kFamily, "template is not a mixture");
  require(theta.size() == size(), "parameter count mismatch");
  MixtureModel m;
  m.interval = interval;
  m.n_x = n;
  const int k = components;
  const Eigen::VectorXd w = softmax(theta.tail(k));
  m.weights = to_std(w);
  for (int c = 0; c < k; ++c) {
    FamilyParams p;
    if (kind == TemplateKind::kNormalMixture) {
      p.family = Family::kNormal;
      p.mu = interval.mid() + interval.half() * theta(c);
      p.sigma2 = std::exp(theta(k + c));
    } else {
      p.family = Family::kExponential;
      p.rate = std::exp(theta(c));
    }
    m.components.push_back(p);
  }
  // Guard the weight sum against rounding in softmax.
  double s = 0.0;
  for (double v : m.weights) s += v;
  for (double& v : m.weights) v /= s;
  return m;
}

Eigen::VectorXd ModelTemplate::distribution(const Eigen::VectorXd& theta) const {
  if (kind == TemplateKind::kFamily) return density_from_multipliers(maxent_model(theta)).p;
  return mixture_model(theta).oracle().p;
}

std::vector<std::pair<std::string, double>> ModelTemplate::extract(
    const Eigen::VectorXd& theta) const {
  std::vector<std::pair<std::string, double>> out;
  auto idx = [](const char* s, int c) { return std::string(s) + std::to_string(c); };
  if (kind == TemplateKind::kFamily) {
    MaxEntModel m = maxent_model(theta);
    FamilyParams p;
    p.family = family;
    m.family = p;
    try {
      const FamilyParams f = family_from_model(m);
      switch (family) {
        case Family::kNormal: out = {{"mu", f.mu}, {"sigma2", f.sigma2}}; break;
        case Family::kExponential: out = {{"rate", f.rate}}; break;
        case Family::kPareto: out = {{"alpha", f.alpha}}; break;
        case Family::kRayleigh: out = {{"sigma", f.sigma}}; break;
        case Family::kChi:
        case Family::kChiSquared: out = {{"k", f.k}}; break;
      }
    } catch (const Error&) {
      // Multipliers outside the family's valid range carry no parameters.
    }
    return out;
  }
  const int k = components;
  const Eigen::VectorXd w = softmax(theta.tail(k));
  for (int c = 0; c < k; ++c) {
    if (kind == TemplateKind::kNormalMixture) {
      // Through the natural multipliers (mu / s2, -1 / (2 s2)) and back.
      const double s2 = std::exp(theta(k + c));
      const double mu = interval.mid() + interval.half() * theta(c);
      const NormalParams np = normal_from_multipliers(mu / s2, -0.5 / s2);
      out.push_back({idx("mu", c + 1), np.mu});
      out.push_back({idx("sigma2_", c + 1), np.sigma2});
    } else {
      out.push_back({idx("rate", c + 1), std::exp(theta(c))});
    }
    out.push_back({idx("w", c + 1), w(c)});
  }
  return out;
}

// Boxes, with L the interval length:
//   normal mixture       mu in [a + L/5, b - L/5] (z in [-0.6, 0.6]), sigma2 log-uniform in
//                        [(L/16)^2, (L/6)^2], logits 0
//   exponential mixture  rate log-uniform in [0.5/L, 10/L], logits 0
//   family               multipliers of the family defaults times U[0.5, 1.5]
Eigen::VectorXd ModelTemplate::random_init(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = interval.a, b = interval.b, len = b - a;
  Eigen::VectorXd th = Eigen::VectorXd::Zero(size());
  const int k = components;
  switch (kind) {
    case TemplateKind::kFamily: {
      FamilyParams p;
      p.family = family;
      const MaxEntModel m = model_from_family(p, n, interval, Convention::kSqrt);
      for (int i = 0; i < m.size(); ++i) th(i) = m.multipliers[i] * (0.5 + u(rng));
      break;
    }
    case TemplateKind::kNormalMixture: {
      const double lo = 2.0 * std::log(len / 16.0), hi = 2.0 * std::log(len / 6.0);
      for (int c = 0; c < k; ++c) th(c) = -0.6 + 1.2 * u(rng);
      for (int c = 0; c < k; ++c) th(k + c) = lo + u(rng) * (hi - lo);
      break;
    }
    case TemplateKind::kExponentialMixture: {
      const double lo = std::log(0.5 / len), hi = std::log(10.0 / len);
      for (int c = 0; c < k; ++c) th(c) = lo + u(rng) * (hi - lo);
      break;
    }
  }
  return th;
}

Eigen::VectorXd encode_normal_mixture(const Interval& iv, const std::vector<double>& mu,
                                      const std::vector<double>& sigma2,
                                      const std::vector<double>& weights) {
  const int k = static_cast<int>(mu.size());
  require(k >= 1 && sigma2.size() == mu.size() && weights.size() == mu.size(),
          "mixture parameter lengths differ");
  Eigen::VectorXd th(3 * k);
  for (int c = 0; c < k; ++c) {
    require(sigma2[c] > 0.0 && weights[c] > 0.0, "mixture parameters out of range");
    th(c) = (mu[c] - iv.mid()) / iv.half();
    th(k + c) = std::log(sigma2[c]);
    th(2 * k + c) = std::log(weights[c]);
  }
  return th;
}

Eigen::VectorXd encode_exponential_mixture(const std::vector<double>& rates,
                                           const std::vector<double>& weights) {
  const int k = static_cast<int>(rates.size());
  require(k >= 1 && weights.size() == rates.size(), "mixture parameter lengths differ");
  Eigen::VectorXd th(2 * k);
  for (int c = 0; c < k; ++c) {
    require(rates[c] > 0.0 && weights[c] > 0.0, "mixture parameters out of range");
    th(c) = std::log(rates[c]);
    th(k + c) = std::log(weights[c]);
  }
  return th;
}

// ---------------------------------------------------------------- loss

double loss(const Eigen::VectorXd& theta, const ObservedOracle& obs, const ModelTemplate& t,
            const TrainingConfig& cfg) {
  require(theta.allFinite(), "non-finite parameters");
  Eigen::VectorXd q;
  double overlap = 0.0;
  if (cfg.backend == Backend::kExact) {
    q = t.distribution(theta);
    overlap = q.cwiseProduct(obs.p).cwiseSqrt().sum();
  } else if (t.kind == TemplateKind::kFamily) {
    MedlOptions o;
    o.eps = cfg.prep_eps;
    const MedlResult r = run_medl(t.maxent_model(theta), o);
    const CVector& a = r.state.amplitudes();
    overlap = std::abs(obs.p.cwiseSqrt().cast<cplx>().dot(a));
    q = decode_distribution(a, Convention::kSqrt);
  } else {
    WdmOptions o;
    o.eps = cfg.prep_eps;
    const MixtureResult r = run_wdm(t.mixture_model(theta), o);
    q = r.marginal.p;
    overlap = q.cwiseProduct(obs.p).cwiseSqrt().sum();
  }
  if (q.size() != obs.p.size()) throw Error(ErrorCode::kLayoutMismatch, "oracle grid differs");
  if (cfg.shots > 0) {
    // Binomial estimate of the squared overlap, seeded by the parameters so
    // that repeated evaluations at one point agree.
    std::uint64_t h = cfg.seed;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      h = h * 1315423911u ^ std::hash<double>{}(theta(i));
    std::mt19937_64 rng(h);
    std::binomial_distribution<int> bin(cfg.shots, std::clamp(overlap * overlap, 0.0, 1.0));
    overlap = std::sqrt(static_cast<double>(bin(rng)) / cfg.shots);
  }
  const double l = cfg.loss == LossKind::kFidelity ? 1.0 - overlap : (q - obs.p).norm();
  if (l > 1.0 + 1e-9 && cfg.loss == LossKind::kFidelity)
    throw Error(ErrorCode::kNotConverged, "loss above 1: prepared state is not normalized");
  return l;
}

Eigen::VectorXd gradient(const Eigen::VectorXd& theta, const ObservedOracle& obs,
                         const ModelTemplate& t, const TrainingConfig& cfg, double h) {
  require(h > 0.0, "finite-difference step must be positive");
  Eigen::VectorXd g(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd p = theta, m = theta;
    p(i) += h;
    m(i) -= h;
    const double lp = loss(p, obs, t, cfg), lm = loss(m, obs, t, cfg);
    if (!std::isfinite(lp) || !std::isfinite(lm))
      throw Error(ErrorCode::kInvalidArgument, "non-finite loss at a shifted point");
    g(i) = (lp - lm) / (2.0 * h);
  }
  return g;
}

double gradient_consistency(const Eigen::VectorXd& theta, const ObservedOracle& obs,
                            const ModelTemplate& t, const TrainingConfig& cfg) {
  const Eigen::VectorXd a = gradient(theta, obs, t, cfg, cfg.h);
  const Eigen::VectorXd b = gradient(theta, obs, t, cfg, cfg.h / 10.0);
  return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), 1e-12);
}

TrainingTrace train(const TrainingConfig& cfg, const ObservedOracle& obs, const ModelTemplate& t,
                    const Eigen::VectorXd& init) {
  require(cfg.lr > 0.0 && cfg.max_iter >= 1, "invalid training configuration");
  require(init.size() == t.size(), "init has the wrong parameter count");
  TrainingTrace tr;
  Eigen::VectorXd th = init;
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(th.size()), m2 = m1;
  tr.best_loss = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.max_iter; ++it) {
    TraceRecord rec;
    rec.iter = it;
    rec.params = th;
    rec.loss = loss(th, obs, t, cfg);
    const Eigen::VectorXd q = t.distribution(th);
    rec.fidelity = metrics(obs.p, q).fidelity;
    rec.kl = kl_div(obs.p, q);
    rec.stats = t.extract(th);
    if (rec.loss < tr.best_loss) {
      tr.best_loss = rec.loss;
      tr.best_params = th;
    }
    rec.best_loss = tr.best_loss;
    const Eigen::VectorXd g = gradient(th, obs, t, cfg, cfg.h);
    tr.records.push_back(std::move(rec));
    if (g.norm() < cfg.gtol) {
      tr.converged = true;
      return tr;
    }
    m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * g;
    m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    const Eigen::VectorXd mh = m1 / (1.0 - std::pow(cfg.beta1, it));
    const Eigen::VectorXd vh = m2 / (1.0 - std::pow(cfg.beta2, it));
    th -= cfg.lr * mh.cwiseQuotient((vh.cwiseSqrt().array() + cfg.adam_eps).matrix());
  }
  tr.budget_exhausted = true;
  return tr;
}

}  // namespace maxent
