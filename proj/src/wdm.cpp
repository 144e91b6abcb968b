// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/wdm.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

namespace maxent {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

std::vector<int> iota_from(int start, int count) {
  std::vector<int> v(count);
  std::iota(v.begin(), v.end(), start);
  return v;
}

std::vector<Control> pattern(const std::vector<int>& qubits, std::uint64_t value) {
  std::vector<Control> cs;
  for (std::size_t k = 0; k < qubits.size(); ++k)
    cs.push_back({qubits[k], static_cast<bool>(value >> k & 1)});
  return cs;
}

// Ladder whose step-j angle is looked up from the latent value.
Circuit lookup_ladder(const std::vector<std::vector<double>>& angles,
                      const std::vector<int>& latent, const std::vector<int>& pair, int width) {
  Circuit c(width);
  const std::size_t steps = angles.front().size();
  for (std::size_t j = 0; j < steps; ++j) {
    for (std::size_t v = 0; v < angles.size(); ++v) {
      auto cs = pattern(latent, v);
      if (j > 0) cs.push_back({pair[j - 1], true});
      c.gate(GateKind::RY, pair[j], angles[v][j], std::move(cs));
    }
    if (j > 0) c.cx(pair[j], pair[j - 1]);
  }
  return c;
}

// max_c (a_c + |k_c + s|) is convex in s; golden-section search.
double best_shift(const std::vector<double>& a, const std::vector<double>& k) {
  auto cost = [&](double s) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] + std::abs(k[i] + s));
    return m;
  };
  double lo = -*std::max_element(k.begin(), k.end()), hi = -*std::min_element(k.begin(), k.end());
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(hi)); ++it) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (cost(x1) <= cost(x2)) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  return 0.5 * (lo + hi);
}

Metrics joint_check(const MixtureModel& m, const Eigen::VectorXd& joint, double& fid) {
  const Eigen::VectorXd o = branch_oracle(m);
  fid = std::pow(o.dot(joint) / (o.norm() * joint.norm()), 2);
  const Eigen::Index dx = Eigen::Index{1} << m.n_x;
  Eigen::VectorXd marg = Eigen::VectorXd::Zero(dx);
  for (Eigen::Index i = 0; i < joint.size(); ++i) marg(i % dx) += joint(i) * joint(i);
  return metrics(m.oracle().p, marg / marg.sum());
}

}  // namespace

// ---------------------------------------------------------------- latent

int LatentSpace::total() const { return std::accumulate(widths.begin(), widths.end(), 0); }

void LatentSpace::validate() const {
  require(!widths.empty(), "latent space needs at least one register");
  for (int w : widths) require(w >= 1 && w <= 16, "latent register width out of range");
  require(std::isfinite(theta0) && theta0 > 0.0, "theta0 must be positive");
}

double LatentSpace::angle(int k, std::uint64_t digits) const {
  const int w = widths.at(k);
  return theta0 * static_cast<double>(digits) / std::ldexp(1.0, w);
}

Circuit load_latent(const LatentSpace& s, const std::vector<Eigen::VectorXd>& weights,
                    int offset, int width) {
  s.validate();
  require(weights.size() == s.widths.size(), "one weight array per latent register");
  Circuit c(width);
  int q = offset;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const Eigen::VectorXd& w = weights[k];
    require(w.size() == (Eigen::Index{1} << s.widths[k]), "weight array length must be 2^width");
    require((w.array() >= 0.0).all(), "negative latent weight");
    require(std::abs(w.sum() - 1.0) < 1e-9, "latent weights must sum to 1");
    c.extend(amplitude_loader(w.cwiseSqrt(), iota_from(q, s.widths[k]), width));
    q += s.widths[k];
  }
  return c;
}

Circuit digital_analog_convert(const LatentSpace& s, int digit_offset,
                               const std::vector<int>& analog, int width,
                               const std::vector<Control>& extra) {
  s.validate();
  if (analog.size() != s.widths.size())
    throw Error(ErrorCode::kLayoutMismatch, "one analog qubit per latent register");
  Circuit c(width);
  int q = digit_offset;
  for (std::size_t k = 0; k < s.widths.size(); ++k) {
    const int w = s.widths[k];
    for (int j = 1; j <= w; ++j) {
      // Digit j (weight 2^-j) is the register's qubit w - j.
      std::vector<Control> cs = {{q + w - j, true}};
      cs.insert(cs.end(), extra.begin(), extra.end());
      c.gate(GateKind::RY, analog[k], s.theta0 / std::ldexp(1.0, j), std::move(cs));
    }
    q += w;
  }
  return c;
}

// ---------------------------------------------------------------- model

void MixtureModel::validate() const {
  require(!components.empty(), "mixture needs a component");
  require(components.size() == weights.size(), "weight count mismatch");
  require(n_x >= 1 && n_x <= 12, "data width out of range");
  require(interval.b > interval.a, "empty interval");
  double total = 0.0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    components[c].validate();
    require(components[c].family == components[0].family, "mixture components differ in family");
    require(weights[c] >= 0.0 && std::isfinite(weights[c]), "negative mixture weight");
    total += weights[c];
  }
  require(std::abs(total - 1.0) < 1e-9, "mixture weights must sum to 1");
  require(n_theta() <= 6, "too many components");
}

int MixtureModel::n_theta() const {
  int n = 1;
  while ((std::size_t{1} << n) < components.size()) ++n;
  return n;
}

MaxEntModel MixtureModel::component_model(int c) const {
  return model_from_family(components.at(c), n_x, interval, Convention::kSqrt, log_degree);
}

GridDensity MixtureModel::oracle() const {
  return mixture_density(components, weights, interval, n_x);
}

Eigen::VectorXd branch_oracle(const MixtureModel& m) {
  m.validate();
  const Eigen::Index dx = Eigen::Index{1} << m.n_x;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dx << m.n_theta());
  for (int c = 0; c < m.size(); ++c)
    out.segment(dx * c, dx) =
        std::sqrt(m.weights[c]) * density_from_family(m.components[c], m.interval, m.n_x).p.cwiseSqrt();
  return out;
}

// ---------------------------------------------------------------- circuit

std::vector<int> WdmCircuit::ancillas() const {
  std::vector<int> q;
  for (int i = exp_be.n; i < exp_be.width(); ++i) q.push_back(i);
  return q;
}

WdmCircuit build_wdm(const MixtureModel& m, const WdmOptions& opt) {
  m.validate();
  require(opt.eps > 0.0 && opt.eps < 1.0, "eps must lie in (0, 1)");
  WdmCircuit w;
  const int nx = m.n_x, nt = m.n_theta();
  const int values = 1 << nt;
  const Eigen::Index dx = Eigen::Index{1} << nx;

  MedlOptions mo;
  mo.phase_tol = opt.phase_tol;
  mo.cache = opt.cache;
  std::vector<CenteredModel> cms;
  for (int v = 0; v < values; ++v) cms.push_back(centered(m.component_model(v < m.size() ? v : 0)));
  w.blocks = constraint_blocks(cms[0], nx, mo);
  const int t = static_cast<int>(w.blocks.size());

  // Realized branch exponents without their constants, normalized per branch.
  std::vector<double> mass(values), k(values);
  Eigen::MatrixXd shape(values, dx);
  w.coeffs = Eigen::MatrixXd::Zero(values, t + 2);
  for (int v = 0; v < values; ++v) {
    auto blocks = w.blocks;
    set_coefficients(blocks, cms[v]);
    shape.row(v).setZero();
    mass[v] = 0.0;
    for (int j = 0; j < t; ++j) {
      w.coeffs(v, j) = blocks[j].coeff;
      mass[v] += std::abs(blocks[j].coeff);
      shape.row(v) += blocks[j].coeff * blocks[j].values.transpose();
    }
    const double top = shape.row(v).maxCoeff();
    k[v] = -top - 0.5 * std::log((2.0 * (shape.row(v).array() - top)).exp().sum());
  }
  const double s = best_shift(mass, k);
  for (int v = 0; v < values; ++v) w.beta = std::max(w.beta, mass[v] + std::abs(k[v] + s));
  require(w.beta > 0.0, "mixture exponent has no scale");
  w.branch_values.resize(values, dx);
  for (int v = 0; v < values; ++v) {
    w.coeffs(v, t) = k[v] + s;
    w.coeffs(v, t + 1) = w.beta - mass[v] - std::abs(k[v] + s);
    w.branch_values.row(v) = (shape.row(v).array() + k[v] + s) / w.beta;
  }

  // LCU over system = data (x) latent.
  std::vector<BlockEncoding> terms;
  for (const auto& b : w.blocks) terms.push_back(b.be);
  terms.push_back({std::make_shared<Circuit>(nx), nx, 0, 1.0, 0.0});
  auto zero = std::make_shared<Circuit>(nx + 1);
  zero->x(nx);
  terms.push_back({zero, nx, 1, 1.0, 0.0});
  int amax = 0;
  for (const auto& b : terms) amax = std::max(amax, b.ancillas);
  const int pw = t + 1;
  const int width = nx + nt + amax + pw;
  const auto data = iota_from(0, nx), latent = iota_from(nx, nt), anc = iota_from(nx + nt, amax),
             pq = iota_from(nx + nt + amax, pw);
  std::vector<std::vector<double>> left(values), right(values);
  for (int v = 0; v < values; ++v) {
    std::vector<double> y(t + 2);
    for (int j = 0; j < t + 2; ++j) y[j] = w.coeffs(v, j);
    const LadderAngles la = signed_ladder(y);
    left[v] = la.left;
    right[v] = la.right;
  }
  auto pl = std::make_shared<Circuit>(lookup_ladder(left, latent, pq, width));
  auto pr = std::make_shared<Circuit>(lookup_ladder(right, latent, pq, width));
  auto lc = std::make_shared<Circuit>(width);
  lc->append(pr);
  for (int j = 0; j < t + 2; ++j) {
    std::vector<Control> cs;
    if (j == 0) {
      for (int q : pq) cs.push_back({q, false});
    } else {
      cs.push_back({pq[j - 1], true});
    }
    lc->append(embed(terms[j], data, anc, width), cs);
  }
  lc->append(pl, {}, true);
  w.lcc = {lc, nx + nt, amax + pw, w.beta, 0.0};

  // Shared exponential layer fitted on every weighted branch.
  std::vector<double> pts;
  for (int v = 0; v < m.size(); ++v)
    if (m.weights[v] > 0.0)
      for (Eigen::Index x = 0; x < dx; ++x) pts.push_back(w.branch_values(v, x));
  const Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(pts.data(), pts.size());
  w.bstar = b.maxCoeff();
  Eigen::VectorXd flat(dx * values);
  for (int v = 0; v < values; ++v) flat.segment(dx * v, dx) = w.branch_values.row(v).transpose();
  Eigen::VectorXd sw = Eigen::VectorXd::Zero(dx * values);
  for (int v = 0; v < m.size(); ++v) sw.segment(dx * v, dx).setConstant(std::sqrt(m.weights[v]));

  ChebSeries p;
  if (opt.exp_degree > 0) {
    w.exp_degree = opt.exp_degree;
    p = fit_exponential(b, w.beta, w.bstar, w.exp_degree);
  } else {
    for (int d : kWdmDegreeLadder) {
      w.exp_degree = d;
      p = fit_exponential(b, w.beta, w.bstar, d);
      double fid = 0.0;
      const Metrics mt = joint_check(m, sw.cwiseProduct(0.5 * p(flat)), fid);
      if (1.0 - fid <= opt.eps / 2.0 && !mt.kl_infinite && mt.kl <= opt.eps) break;
    }
  }
  PolynomialSpec spec = make_polynomial(p.scaled(0.5), w.exp_degree);
  w.exp_plan = solve_phases(spec, opt.phase_tol, opt.cache ? opt.cache : &PhaseCache::from_env());
  w.exp_be = apply_qsvt(w.lcc, w.exp_plan);
  w.predicted = sw.cwiseProduct(w.exp_plan.realized(flat));

  w.layout.add("data", nx);
  w.layout.add("latent", nt);
  w.layout.add("constraint", amax);
  w.layout.add("lcu", pw);
  w.layout.add("exp", w.exp_be.ancillas - w.lcc.ancillas);
  auto c = std::make_shared<Circuit>(w.exp_be.width());
  Eigen::VectorXd lw = Eigen::VectorXd::Zero(values);
  for (int v = 0; v < m.size(); ++v) lw(v) = m.weights[v];
  LatentSpace ls;
  ls.widths = {nt};
  c->extend(load_latent(ls, {lw}, nx, c->width()));
  for (int q : data) c->h(q);
  c->append(w.exp_be.circuit);
  w.circuit = c;
  return w;
}

MixtureResult run_wdm(const MixtureModel& m, const WdmCircuit& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Statevector s(c.layout);
  Simulator sim;
  sim.run(s, *c.circuit);
  PostSelection ps = post_select(s, c.ancillas(), 0);
  MixtureResult r(std::move(ps.state));
  r.success_probability = ps.probability;
  const CVector& a = r.joint.amplitudes();
  const Eigen::Index dx = Eigen::Index{1} << m.n_x;
  r.oracle = m.oracle();
  r.marginal.x = r.oracle.x;
  r.marginal.p = Eigen::VectorXd::Zero(dx);
  for (Eigen::Index i = 0; i < a.size(); ++i) r.marginal.p(i % dx) += std::norm(a(i));
  r.marginal.p /= r.marginal.p.sum();
  r.marginal.provenance = "wdm";
  const Metrics mt = metrics(r.oracle.p, r.marginal.p);
  r.fidelity = mt.fidelity;
  r.kl = mt.kl;
  r.kl_infinite = mt.kl_infinite;
  r.tv = mt.tv;
  const Eigen::VectorXd o = branch_oracle(m);
  r.joint_fidelity = std::norm(o.cast<cplx>().dot(a)) / o.squaredNorm();
  for (int v = 0; v < m.size(); ++v) {
    const CVector seg = a.segment(dx * v, dx);
    if (m.weights[v] == 0.0 || seg.norm() == 0.0) {
      r.component_fidelity.push_back(0.0);
      continue;
    }
    const Eigen::VectorXd q = decode_distribution(seg, Convention::kSqrt);
    r.component_fidelity.push_back(
        metrics(density_from_family(m.components[v], m.interval, m.n_x).p, q).fidelity);
  }
  r.exp_degree = c.exp_degree;
  r.beta = c.beta;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

MixtureResult run_wdm(const MixtureModel& m, const WdmOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const WdmCircuit c = build_wdm(m, opt);
  MixtureResult r = run_wdm(m, c);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

MixtureDepth mixture_depth_estimate(const MixtureModel& m, double eps) {
  m.validate();
  MixtureDepth d;
  const MaxEntModel c0 = m.component_model(0);
  d.n_x = m.n_x;
  d.m = c0.size();
  for (const auto& c : c0.constraints) d.d_f = std::max(d.d_f, c.degree);
  d.n_theta = m.n_theta();
  d.d_theta = (1 << d.n_theta) - 1;
  d.filling = filling_rate(m.oracle().p.cwiseSqrt());
  d.eps = eps;
  d.log_factor = std::log2(1.0 / (eps * d.filling));
  d.data_term = static_cast<double>(d.n_x) * d.m * d.d_f;
  d.latent_term = d.n_theta;
  d.loader_term = d.d_theta;
  d.total = (d.data_term + d.latent_term + d.loader_term) * d.log_factor;
  return d;
}

}  // namespace maxent
