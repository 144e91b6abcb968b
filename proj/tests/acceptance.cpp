// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "maxent/io.hpp"
#include "test_support.hpp"

using namespace maxent;

namespace {

const Eigen::VectorXd kGrid = Eigen::VectorXd::LinSpaced(2001, -1.0, 1.0);

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Plans collected from the preparation runs, checked again under criterion 6.
std::vector<QsvtPlan> g_plans;

void keep_plans(const MedlCircuit& c) {
  g_plans.push_back(c.exp_plan);
  for (const auto& b : c.lcc.blocks)
    if (b.plan) g_plans.push_back(*b.plan);
}

struct PrepRecord {
  double ratio = 0.0;
};
std::vector<PrepRecord> g_prep;

Outcome criterion1() {
  const json& preset = find_preset(load_presets(), "fig2");
  Outcome o;
  double worst_fid = 1.0, worst_kl = 0.0, worst_tv = 0.0, worst_t = 0.0;
  int count = 0;
  for (int n : preset["n"].get<std::vector<int>>()) {
    for (const auto& inst : preset["instances"]) {
      const FamilyParams p = family_from_json(inst);
      const MaxEntModel m = model_from_family(p, n);
      const auto t0 = std::chrono::steady_clock::now();
      const MedlCircuit c = build_medl(m);
      const MedlResult r = run_medl(m, c, 1e-3);
      const double t = seconds_since(t0);
      keep_plans(c);
      g_prep.push_back({r.success_probability / r.theoretical_probability});
      ++count;
      worst_fid = std::min(worst_fid, r.fidelity);
      worst_kl = std::max(worst_kl, r.kl_infinite ? INFINITY : r.kl);
      worst_tv = std::max(worst_tv, r.tv);
      worst_t = std::max(worst_t, t);
      const bool ok = r.fidelity >= 0.99 && !r.kl_infinite && r.kl <= 1e-3 && r.tv <= 0.02 &&
                      t <= 60.0;
      if (!ok) {
        o.pass = false;
        std::fprintf(stderr, "  criterion 1: %s n=%d fid=%.6f kl=%.3g tv=%.4f t=%.1fs\n",
                     inst.dump().c_str(), n, r.fidelity, r.kl, r.tv, t);
      }
    }
  }
  o.detail = std::to_string(count) + " instances; worst fidelity " + fmt("%.6f", worst_fid) +
             " (>= 0.99), KL " + fmt("%.3g", worst_kl) + " (<= 1e-3), TV " +
             fmt("%.4f", worst_tv) + " (<= 0.02), runtime " + fmt("%.1f", worst_t) +
             " s (<= 60 s)";
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  for (const auto& r : g_prep) worst = std::max(worst, std::abs(r.ratio - 1.0));
  MaxEntModel m;
  m.constraints = {ConstraintSpec::linear()};
  m.multipliers = {1e-10};
  m.n = 6;
  m.update_norms();
  const MedlResult u = run_medl(m);
  const double dev = std::abs(u.success_probability - 0.25);
  o.pass = !g_prep.empty() && worst <= 0.05 && dev <= 1e-9;
  o.detail = std::to_string(g_prep.size()) + " instances; max |P/(F^2/4) - 1| " +
             fmt("%.4f", worst) + " (<= 0.05); uniform |P - 1/4| " + fmt("%.2e", dev) +
             " (<= 1e-9)";
  return o;
}

Outcome criterion3() {
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const BlockEncoding be = linear_diagonal_be(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix target = CMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) target(j, j) = static_cast<double>(j) / (dim - 1);
    worst = std::max(worst, (be.alpha * be.block() - target).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, "n = 2..6; max elementwise error " + fmt("%.2e", worst) + " (<= 1e-12)"};
}

Outcome criterion4() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> cd(-1.0, 1.0);
  // Inexact terms: a QSVT block of x^2 on a signed linear block.
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(3);
  sq(2) = 1.0;
  const QsvtPlan sq_plan = solve_phases(make_polynomial(ChebSeries::from_monomial(sq), 2));
  double worst = -INFINITY;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const int terms = 1 + (trial / 4) % 3;
    const bool inexact = trial % 5 == 0 && n <= 2;
    std::vector<BlockEncoding> bes;
    std::vector<double> y(terms);
    for (int j = 0; j < terms; ++j) {
      if (inexact && j == 0) {
        BlockEncoding q = apply_qsvt(signed_linear_be(n), sq_plan);
        q.epsilon = std::max(q.epsilon, 1e-12);
        bes.push_back(q);
      } else {
        bes.push_back(testing::random_block_encoding(n, 2, rng));
      }
      y[j] = cd(rng);
    }
    // Targets: the ideal operators of each term.
    CMatrix target = CMatrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (int j = 0; j < terms; ++j) {
      CMatrix a = bes[j].alpha * bes[j].block();
      if (inexact && j == 0) {
        const Eigen::VectorXd u = block_diagonal(signed_linear_be(n));
        a = u.cwiseProduct(u).cast<cplx>().asDiagonal();
      }
      target += y[j] * a;
    }
    const BlockEncoding be = lcu_combine(sparse_spp(y), bes);
    worst = std::max(worst, block_error(be, target) - be.epsilon);
  }
  return {worst <= 1e-9, "200 instances (<= 3 terms, <= 4 qubits); max(error - bound) " +
                             fmt("%.2e", worst) + " (<= 1e-9)"};
}

Outcome criterion5() {
  std::vector<std::vector<double>> vecs = preset_weights(find_preset(load_presets(), "sm-exp8"));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> y(2 + t % 7);
    for (double& v : y) v = d(rng);
    vecs.push_back(y);
  }
  double worst = 0.0;
  for (const auto& y : vecs) {
    const auto pair = sparse_spp(y);
    const int m = static_cast<int>(y.size());
    const auto c = pair_amplitudes(*pair.left, m);
    const auto e = pair_amplitudes(*pair.right, m);
    for (int j = 0; j < m; ++j)
      worst = std::max(worst, std::abs(pair.beta * std::conj(c[j]) * e[j] - y[j]));
  }
  // Multiplier form against the ladder form on positive vectors.
  std::uniform_real_distribution<double> pos(0.05, 3.0);
  double angle = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int m = 2 + t % 7;
    std::vector<double> lam(m), fmax(m), y(m);
    for (int k = 0; k < m; ++k) {
      lam[k] = pos(rng);
      fmax[k] = pos(rng);
      y[k] = 2.0 * lam[k] * fmax[k];
    }
    const auto a = ladder_angles(y), b = multiplier_angles(lam, fmax);
    for (int k = 0; k + 1 < m; ++k) angle = std::max(angle, std::abs(a[k] - b[k]));
  }
  return {worst <= 1e-10 && angle <= 1e-12,
          "8 cyclic weight vectors + 100 signed vectors; max |beta c* d - y| " +
              fmt("%.2e", worst) + " (<= 1e-10); angle forms differ by " + fmt("%.2e", angle) +
              " (<= 1e-12)"};
}

Outcome criterion6() {
  double resid = 0.0;
  double rot = 0.0;  // worst drift / (d delta)
  for (const auto& plan : g_plans) {
    const Eigen::VectorXd base = plan.realized(kGrid);
    resid = std::max(resid, (base - plan.poly.poly(kGrid)).cwiseAbs().maxCoeff());
    for (double delta : {1e-4, 1e-3}) {
      const double drift = (plan.perturbed(delta).realized(kGrid) - base).cwiseAbs().maxCoeff();
      rot = std::max(rot, drift / (plan.queries() * delta));
    }
  }
  FunctionTarget t;
  t.kind = FunctionKind::kExp;
  double trunc = 0.0;  // worst error * 2^d
  for (int d = 2; d <= 40; ++d) {
    const ChebSeries p = taylor_series(t, d);
    double err = 0.0;
    for (double x : kGrid) err = std::max(err, std::abs(p(x) - std::exp(x)));
    trunc = std::max(trunc, err * std::ldexp(1.0, d));
  }
  const bool ok = !g_plans.empty() && resid <= 1e-8 && trunc <= 1.0 && rot <= 1.1;
  return {ok, std::to_string(g_plans.size()) + " plans; max |realized - P| " +
                  fmt("%.2e", resid) + " (<= 1e-8); exp truncation error * 2^d " +
                  fmt("%.3f", trunc) + " (<= 1, d = 2..40); phase drift / (d dtheta) " +
                  fmt("%.3f", rot) + " (<= 1.1)"};
}

Outcome criterion7() {
  const json presets = load_presets();
  Outcome o;
  std::string parts;
  double worst_joint = 0.0;
  for (const char* name : {"fig3", "sm-norm8", "sm-exp8"}) {
    const json& p = find_preset(presets, name);
    const double tv_max = p["tv_max"];
    double worst = 0.0;
    const std::size_t count = preset_weights(p).size();
    for (std::size_t k = 0; k < count; ++k) {
      const MixtureModel m = preset_mixture(p, k);
      const MixtureResult r = run_wdm(m);
      worst = std::max(worst, r.tv);
      worst_joint = std::max(worst_joint, 1.0 - r.joint_fidelity);
      if (r.tv > tv_max || 1.0 - r.joint_fidelity > 1e-3 || m.n_theta() > 3 || m.n_x != 6) {
        o.pass = false;
        std::fprintf(stderr, "  criterion 7: %s w%zu tv=%.4f joint=%.6f\n", name, k + 1, r.tv,
                     r.joint_fidelity);
      }
    }
    parts += std::string(name) + " worst TV " + fmt("%.4f", worst) + " (<= " + fmt("%.2f", tv_max) +
             "); ";
  }
  o.detail = parts + "max joint infidelity " + fmt("%.2e", worst_joint) + " (<= eps = 1e-3)";
  return o;
}

// Op-by-op comparison with angles dropped: kinds, targets, controls, nesting.
bool same_structure(const Circuit& a, const Circuit& b) {
  if (a.size() != b.size() || a.width() != b.width()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Op& x = a.ops()[i];
    const Op& y = b.ops()[i];
    if (x.kind != y.kind || x.target != y.target || x.adjoint != y.adjoint ||
        x.controls.size() != y.controls.size() || bool(x.sub) != bool(y.sub))
      return false;
    for (std::size_t k = 0; k < x.controls.size(); ++k)
      if (x.controls[k].qubit != y.controls[k].qubit || x.controls[k].value != y.controls[k].value)
        return false;
    if (x.sub && x.sub != y.sub && !same_structure(*x.sub, *y.sub)) return false;
  }
  return true;
}

Outcome criterion8() {
  MedlOptions o;
  o.exp_degree = 32;
  std::vector<MedlCircuit> cs;
  for (int k = 0; k < 10; ++k) {
    FamilyParams p;
    p.mu = -2.0 + 0.5 * k;
    p.sigma2 = 0.8 + 0.3 * k;
    cs.push_back(build_medl(model_from_family(p, 6, Interval{-8.0, 8.0}), o));
  }
  int mismatches = 0;
  for (std::size_t k = 1; k < cs.size(); ++k) {
    if (!same_structure(*cs[0].circuit, *cs[k].circuit)) ++mismatches;
    if (structure_signature(*cs[0].circuit) != structure_signature(*cs[k].circuit)) ++mismatches;
  }
  // The settings must actually change some angles.
  const bool angles_differ = cs[0].lcc.pair.theta != cs[1].lcc.pair.theta;
  return {mismatches == 0 && angles_differ,
          "10 normal settings at fixed degree; structural mismatches " +
              std::to_string(mismatches) + " (== 0); angles differ: " +
              (angles_differ ? "yes" : "no")};
}

double mu_error(const TraceRecord& r, std::vector<double> target) {
  std::vector<double> fit;
  for (const auto& [k, v] : r.stats)
    if (k.rfind("mu", 0) == 0) fit.push_back(v);
  std::sort(fit.begin(), fit.end());
  std::sort(target.begin(), target.end());
  double worst = 0.0;
  for (std::size_t c = 0; c < fit.size(); ++c)
    worst = std::max(worst, std::abs(fit[c] - target[c]) / std::abs(target[c]));
  return worst;
}

Outcome criterion9() {
  const json presets = load_presets();
  const json& g = find_preset(presets, "fig4-gmm");
  const ModelTemplate gt = template_from_json(g["template"]);
  const ObservedOracle go = compile_observed(gt.distribution(template_params(gt, g["target"])));
  const TrainingConfig gc = training_from_json(g["training"]);
  int good = 0;
  std::string seeds;
  for (std::uint64_t s : g["seeds"].get<std::vector<std::uint64_t>>()) {
    const TrainingTrace tr = train(gc, go, gt, gt.random_init(s));
    const TraceRecord& last = tr.records.back();
    const double mu = mu_error(last, g["target"]["mu"]);
    const bool ok = last.kl <= 1e-2 && mu <= 0.1 && tr.records.size() <= 500;
    good += ok;
    seeds += " " + std::to_string(s) + ":" + (ok ? "ok" : "miss") + "(KL " + fmt("%.1e", last.kl) +
             ", mu " + fmt("%.3f", mu) + ")";
  }
  const json& e = find_preset(presets, "smS5-expmix");
  const ModelTemplate et = template_from_json(e["template"]);
  const ObservedOracle eo = compile_observed(et.distribution(template_params(et, e["target"])));
  const TrainingTrace tr = train(training_from_json(e["training"]), eo, et, et.random_init(0));
  bool monotone = tr.best_loss < tr.records.front().loss;
  for (std::size_t i = 1; i < tr.records.size(); ++i)
    monotone = monotone && tr.records[i].best_loss <= tr.records[i - 1].best_loss;
  return {good >= 4 && monotone,
          "mixture fit " + std::to_string(good) + "/5 seeds within KL <= 1e-2 and mu <= 10% (>= 4)" +
              " [" + seeds + " ]; exponential mixture best loss " +
              fmt("%.2e", tr.records.front().loss) + " -> " + fmt("%.2e", tr.best_loss) +
              (monotone ? " improving" : " NOT improving") +
              "; thresholds are property-based stand-ins"};
}

Outcome criterion10() {
  bool ok = true;
  std::string why;
  FamilyParams p;
  p.family = Family::kChiSquared;
  p.k = 5.0;
  // Linear in n, M and d_f: the product is exactly n M d_f d_exp.
  for (int n = 4; n <= 12; ++n) {
    const DepthEstimate d = depth_estimate(model_from_family(p, n), 1e-3);
    if (std::abs(d.product - static_cast<double>(n) * d.m * d.d_f * d.d_exp) > 1e-9 * d.product) {
      ok = false;
      why += " product(n=" + std::to_string(n) + ")";
    }
  }
  MaxEntModel m;
  m.n = 6;
  for (int k = 1; k <= 4; ++k) {
    m.constraints.push_back(ConstraintSpec::power_of(k));
    m.multipliers.push_back(-0.1);
    m.update_norms();
    const DepthEstimate d = depth_estimate(m, 1e-3);
    if (d.m != k || d.d_f != k) {
      ok = false;
      why += " M/d_f(" + std::to_string(k) + ")";
    }
  }
  // Logarithmic in 1/eps; floor degree non-increasing in eps.
  const MaxEntModel base = model_from_family(p, 6);
  int prev = 1 << 30;
  for (int e = -8; e <= -2; ++e) {
    const double eps = std::pow(10.0, e);
    const DepthEstimate a = depth_estimate(base, eps), b = depth_estimate(base, eps * 10.0);
    if (std::abs(a.log_inv - b.log_inv - std::log2(10.0)) > 1e-9 || a.d_exp > prev) {
      ok = false;
      why += " eps(" + fmt("%.0e", eps) + ")";
    }
    prev = a.d_exp;
  }
  // Mixture: latent terms add to the data term, independently of n_x.
  const json& mp = find_preset(load_presets(), "sm-norm8");
  for (int k : {2, 3, 5, 8}) {
    MixtureModel mix = preset_mixture(mp, 0);
    mix.components.resize(k);
    mix.weights.assign(k, 1.0 / k);
    double latent = -1.0;
    for (int nx = 4; nx <= 8; ++nx) {
      mix.n_x = nx;
      const MixtureDepth d = mixture_depth_estimate(mix, 1e-3);
      const double body = d.total / d.log_factor - d.data_term;
      if (latent < 0.0) latent = body;
      const bool additive = std::abs(body - latent) < 1e-9 &&
                            std::abs(body - (d.n_theta + (1 << d.n_theta) - 1)) < 1e-9 &&
                            d.data_term == static_cast<double>(nx) * d.m * d.d_f;
      if (!additive) {
        ok = false;
        why += " mixture(K=" + std::to_string(k) + ",n_x=" + std::to_string(nx) + ")";
      }
    }
  }
  return {ok, "depth formulas over n = 4..12, M = d_f = 1..4, eps = 1e-8..1e-1, K = 2..8 x n_x = 4..8" +
                  (ok ? std::string(": linear, logarithmic and additive as stated")
                      : std::string(": violations at") + why)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"distribution preparation", criterion1},
      {"success-probability law", criterion2},
      {"linear block-encoding exactness", criterion3},
      {"LCU contract", criterion4},
      {"sparse state-preparation pair", criterion5},
      {"QSVT engine", criterion6},
      {"mixture preparation", criterion7},
      {"structure staticity", criterion8},
      {"calibration", criterion9},
      {"complexity properties", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s: %s [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
