// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/medl.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace maxent {

namespace {

PhaseCache& cache_of(const MedlOptions& opt) {
  return opt.cache ? *opt.cache : PhaseCache::from_env();
}

// (log1p(c u) - mid) / (2 half) maps the grid range onto [-1/2, 1/2].
struct Log1pScaling {
  double mid = 0.0;
  double half = 0.0;
};

Log1pScaling log1p_scaling(double c) {
  const double hi = std::log1p(c), lo = std::log1p(-c);
  return {0.5 * (hi + lo), 0.5 * (hi - lo)};
}

ChebSeries power_series(int p) {
  Eigen::VectorXd mono = Eigen::VectorXd::Zero(p + 1);
  if (p % 2 == 0) {
    mono(0) = -1.0;
    mono(p) = 2.0;
  } else {
    mono(p) = 1.0;
  }
  return ChebSeries::from_monomial(mono);
}

// Distribution predicted by the exponential-layer amplitudes `a`.
bool prediction_ok(const MaxEntModel& m, const Eigen::VectorXd& a, double eps) {
  const GridDensity theory = m.density();
  Eigen::VectorXd q = decode_distribution(a.cast<cplx>(), m.convention);
  const Metrics mt = metrics(theory.p, q);
  const double f = m.filling_rate();
  const double prob = a.squaredNorm() / static_cast<double>(a.size());
  const double ratio = prob / (f * f / 4.0);
  return 1.0 - mt.fidelity <= eps / 2.0 && !mt.kl_infinite && mt.kl <= eps &&
         std::abs(ratio - 1.0) <= 0.04;
}

}  // namespace

std::vector<ConstraintBlock> constraint_blocks(const CenteredModel& cm, int n,
                                               const MedlOptions& opt) {
  const BlockEncoding base = signed_linear_be(n);
  const Eigen::VectorXd u = cm.u_grid(n);
  PhaseCache& cache = cache_of(opt);
  std::vector<ConstraintBlock> out;
  for (const auto& t : cm.terms) {
    ConstraintBlock b;
    b.term = t;
    if (t.kind == CenteredTerm::Kind::kPower && t.power == 1) {
      b.be = base;
      b.values = u;
    } else {
      PolynomialSpec spec;
      if (t.kind == CenteredTerm::Kind::kPower) {
        spec = make_polynomial(power_series(t.power), t.power);
        spec.kind = "power";
        spec.params = {static_cast<double>(t.power)};
        if (t.power % 2 == 0) {
          b.gain = 0.5;
          b.shift = 0.5;
        }
      } else {
        const Log1pScaling s = log1p_scaling(t.c);
        const double c = t.c;
        const ChebSeries interp = ChebSeries::interpolate(
            [&](double v) { return (std::log1p(c * v) - s.mid) / (2.0 * s.half); }, t.degree);
        const double sc = std::min(1.0, 0.5 / interp.sup_norm(20001));
        spec = make_polynomial(interp.scaled(sc), t.degree);
        spec.kind = "log1p";
        spec.params = {c, static_cast<double>(t.degree)};
        spec.scale = sc;
        b.gain = 2.0 * s.half / sc;
        b.shift = s.mid;
      }
      b.plan = solve_phases(spec, opt.phase_tol, &cache);
      b.be = apply_qsvt(base, *b.plan);
      b.values = b.plan->realized(u);
    }
    out.push_back(std::move(b));
  }
  return out;
}

void set_coefficients(std::vector<ConstraintBlock>& blocks, const CenteredModel& cm) {
  if (blocks.size() != cm.terms.size())
    throw Error(ErrorCode::kLayoutMismatch, "block list does not match model terms");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i].term.y = cm.terms[i].y;
    blocks[i].coeff = cm.terms[i].y * blocks[i].gain;
    blocks[i].offset = cm.terms[i].y * blocks[i].shift;
  }
}

Lcc lcc_from_model(const MaxEntModel& m, const MedlOptions& opt) {
  const CenteredModel cm = centered(m);
  Lcc l;
  l.blocks = constraint_blocks(cm, m.n, opt);
  set_coefficients(l.blocks, cm);
  std::vector<double> y;
  std::vector<BlockEncoding> bes;
  l.constant = cm.constant;
  l.values = Eigen::VectorXd::Zero(Eigen::Index{1} << m.n);
  for (const auto& b : l.blocks) {
    y.push_back(b.coeff);
    bes.push_back(b.be);
    l.beta += std::abs(b.coeff);
    l.constant += b.offset;
    l.values += b.coeff * b.values;
  }
  if (!(l.beta > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "all multipliers are zero; nothing to exponentiate");
  l.values /= l.beta;
  l.pair = sparse_spp(y, opt.scheme);
  l.be = lcu_combine(l.pair, bes);
  return l;
}

int exp_degree_bound(double lambda, double log_norm, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1)");
  const double a = (std::log(2.0 / eps) - log_norm) / std::numbers::ln2;
  const double b = 2.0 * std::numbers::e * lambda;
  return std::max({1, static_cast<int>(std::ceil(a - 1e-12)), static_cast<int>(std::ceil(b - 1e-12))});
}

ChebSeries fit_exponential(const Eigen::VectorXd& b, double beta, double bstar, int degree) {
  const Eigen::VectorXd t = (beta * (b.array() - bstar)).exp().matrix();
  return bounded_fit(b, t, degree, 1.0);
}

DepthEstimate depth_estimate(const MaxEntModel& m, double eps) {
  m.validate();
  DepthEstimate d;
  d.n = m.n;
  d.m = m.size();
  for (const auto& c : m.constraints) d.d_f = std::max(d.d_f, c.degree);
  d.lambda = m.lambda_abs();
  const Eigen::VectorXd e = m.amplitude_exponent();
  const Eigen::VectorXd shifted = (2.0 * (e.array() - e.maxCoeff())).exp().matrix();
  d.log_norm = 0.5 * std::log(shifted.sum());
  d.filling = m.filling_rate();
  d.eps = eps;
  d.d_exp = exp_degree_bound(d.lambda, d.log_norm, eps);
  d.linear_be_depth = m.n;
  d.product = static_cast<double>(d.n) * d.m * d.d_f * d.d_exp;
  d.amplification = 1.0 / d.filling;
  d.log_inv = std::log2(1.0 / (d.filling * eps));
  return d;
}

std::vector<int> MedlCircuit::ancillas() const {
  std::vector<int> q;
  for (int i = exp_be.n; i < exp_be.width(); ++i) q.push_back(i);
  return q;
}

MedlCircuit build_medl(const MaxEntModel& m, const MedlOptions& opt) {
  if (!(opt.eps > 0.0 && opt.eps < 1.0)) throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1)");
  MedlCircuit mc;
  mc.lcc = lcc_from_model(m, opt);
  const Eigen::VectorXd& b = mc.lcc.values;
  const double beta = mc.lcc.beta;
  mc.bstar = b.maxCoeff();
  const Eigen::VectorXd shifted = (2.0 * beta * (b.array() - mc.bstar)).exp().matrix();
  mc.degree_floor = exp_degree_bound(beta / 2.0, 0.5 * std::log(shifted.sum()), opt.eps);

  ChebSeries p;
  if (opt.exp_degree > 0) {
    mc.exp_degree = opt.exp_degree;
    p = fit_exponential(b, beta, mc.bstar, mc.exp_degree);
  } else {
    for (int d : kExpDegreeLadder) {
      if (d < mc.degree_floor && d != std::end(kExpDegreeLadder)[-1]) continue;
      mc.exp_degree = d;
      p = fit_exponential(b, beta, mc.bstar, d);
      if (prediction_ok(m, 0.5 * p(b), opt.eps)) break;
    }
  }
  PolynomialSpec spec = make_polynomial(p.scaled(0.5), mc.exp_degree);
  mc.exp_plan = solve_phases(spec, opt.phase_tol, &cache_of(opt));
  if (opt.phase_perturbation != 0.0) mc.exp_plan = mc.exp_plan.perturbed(opt.phase_perturbation);
  mc.exp_be = apply_qsvt(mc.lcc.be, mc.exp_plan);
  mc.predicted = mc.exp_plan.realized(b);

  const int lcu = mc.lcc.pair.width;
  mc.layout.add("data", m.n);
  mc.layout.add("constraint", mc.lcc.be.ancillas - lcu);
  mc.layout.add("lcu", lcu);
  mc.layout.add("exp", mc.exp_be.ancillas - mc.lcc.be.ancillas);
  auto c = std::make_shared<Circuit>(mc.exp_be.width());
  for (int q = 0; q < m.n; ++q) c->h(q);
  c->append(mc.exp_be.circuit);
  mc.circuit = c;
  return mc;
}

Eigen::VectorXd decode_distribution(const CVector& amps, Convention conv) {
  Eigen::VectorXd q = amps.cwiseAbs();
  if (conv == Convention::kSqrt) q = q.cwiseProduct(q);
  const double s = q.sum();
  if (!(s > 0.0)) throw Error(ErrorCode::kZeroProbability, "zero amplitude vector");
  return q / s;
}

MedlResult run_medl(const MaxEntModel& m, const MedlCircuit& c, double eps) {
  const auto t0 = std::chrono::steady_clock::now();
  Statevector s(c.layout);
  Simulator sim;
  sim.run(s, *c.circuit);
  PostSelection ps = post_select(s, c.ancillas(), 0);
  MedlResult r(std::move(ps.state));
  r.success_probability = ps.probability;
  const double f = m.filling_rate();
  r.theoretical_probability = f * f / 4.0;
  r.theory = m.density();
  r.simulated.x = r.theory.x;
  r.simulated.p = decode_distribution(r.state.amplitudes(), m.convention);
  r.simulated.provenance = "medl";
  const Metrics mt = metrics(r.theory.p, r.simulated.p);
  r.fidelity = mt.fidelity;
  r.kl = mt.kl;
  r.kl_infinite = mt.kl_infinite;
  r.tv = mt.tv;
  r.amplitude_fidelity =
      std::norm(m.target_amplitudes().cast<cplx>().dot(r.state.amplitudes()));
  r.depth = depth_estimate(m, eps);
  r.exp_degree = c.exp_degree;
  r.beta = c.lcc.beta;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

MedlResult run_medl(const MaxEntModel& m, const MedlOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const MedlCircuit c = build_medl(m, opt);
  MedlResult r = run_medl(m, c, opt.eps);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace maxent
