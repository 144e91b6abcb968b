// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "maxent/medl.hpp"

namespace maxent {

namespace {

CheckResult at_most(std::string name, double measured, double bound, std::string detail = {}) {
  return {std::move(name), measured, bound, measured <= bound, std::move(detail)};
}

CheckResult linear_block_check() {
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const BlockEncoding be = linear_diagonal_be(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix target = CMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) target(j, j) = static_cast<double>(j) / (dim - 1);
    worst = std::max(worst, (be.alpha * be.block() - target).cwiseAbs().maxCoeff());
  }
  return at_most("linear-block-exact", worst, 1e-12, "n = 2..6, max elementwise error");
}

// Random Z-string LCUs combined under random signed coefficients.
CheckResult lcu_check(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cd(-1.0, 1.0);
  double worst = -1.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const int terms = 1 + trial % 3;
    std::vector<BlockEncoding> bes;
    std::vector<double> y(terms);
    CMatrix target = CMatrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (int j = 0; j < terms; ++j) {
      std::vector<double> c(2);
      std::vector<CircuitPtr> u(2);
      double l1 = 0.0;
      for (int k = 0; k < 2; ++k) {
        c[k] = cd(rng);
        l1 += std::abs(c[k]);
        auto z = std::make_shared<Circuit>(n);
        z->z(static_cast<int>(rng() % n)).ry(static_cast<int>(rng() % n), cd(rng));
        u[k] = z;
      }
      for (double& v : c) v /= l1;
      bes.push_back(lcu_of_unitaries(c, u, n));
      y[j] = cd(rng);
      target += y[j] * bes.back().alpha * bes.back().block();
    }
    const BlockEncoding be = lcu_combine(sparse_spp(y), bes);
    worst = std::max(worst, block_error(be, target) - be.epsilon);
  }
  return at_most("lcu-contract", worst, 1e-9, "max(error - predicted epsilon), 20 instances");
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  out.push_back(linear_block_check());
  out.push_back(lcu_check(opt.seed));

  PhaseCache cache;
  FunctionTarget ft;
  ft.kind = FunctionKind::kExp;
  ft.param = 1.0;
  ft.eps = 1e-8;
  const QsvtPlan plan = solve_phases(approximate(ft), 1e-10, &cache);
  const BlockEncoding base = signed_linear_be(4);
  const Eigen::VectorXd u = block_diagonal(base);
  const Eigen::VectorXd circ = block_diagonal(apply_qsvt(base, plan));
  out.push_back(at_most("qsvt-circuit-vs-plan", (circ - plan.realized(u)).cwiseAbs().maxCoeff(),
                        1e-9, "exp(x) plan on a 4-qubit signed linear block"));
  out.push_back(at_most("qsvt-plan-residual", plan.residual, 1e-8, "2001 points"));

  const double delta = opt.phase_perturbation != 0.0 ? opt.phase_perturbation : 1e-3;
  const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(2001, -1.0, 1.0);
  const double drift = (plan.perturbed(delta).realized(xs) - plan.realized(xs)).cwiseAbs().maxCoeff();
  out.push_back(at_most("rotation-error-bound", drift, 1.1 * plan.queries() * std::abs(delta),
                        "phase shift " + std::to_string(delta) + ", bound 1.1 d |shift|"));

  MedlOptions mo;
  mo.cache = &cache;
  {
    // Near-zero multiplier: the uniform limit, where F = 1.
    MaxEntModel m;
    m.constraints = {ConstraintSpec::linear()};
    m.multipliers = {1e-10};
    m.interval = {0.0, 1.0};
    m.n = 6;
    m.update_norms();
    const MedlResult r = run_medl(m, mo);
    out.push_back(at_most("probability-uniform", std::abs(r.success_probability - 0.25), 1e-9,
                          "|P - 1/4|"));
  }

  FamilyParams ex;
  ex.family = Family::kExponential;
  ex.rate = 1.0;
  const MaxEntModel em = model_from_family(ex, 6);
  {
    const MedlResult r = run_medl(em, mo);
    out.push_back(at_most("probability-law",
                          std::abs(r.success_probability / r.theoretical_probability - 1.0), 0.05,
                          "|P / (F^2/4) - 1|, exponential n = 6"));
  }

  {
    MedlOptions fixed = mo;
    fixed.exp_degree = 32;
    std::string first;
    int mismatches = 0;
    const double settings[][2] = {{0.0, 1.0}, {1.0, 0.5}, {-1.5, 2.0}};
    for (const auto& s : settings) {
      FamilyParams p;
      p.mu = s[0];
      p.sigma2 = s[1];
      const MedlCircuit c = build_medl(model_from_family(p, 5, Interval{-6.0, 6.0}), fixed);
      const std::string sig = structure_signature(*c.circuit);
      if (first.empty()) first = sig;
      else if (sig != first) ++mismatches;
    }
    out.push_back(at_most("structure-static", mismatches, 0, "normal family, 3 settings"));
  }

  {
    MedlOptions faulty = mo;
    faulty.phase_perturbation = opt.phase_perturbation;
    const MedlResult r = run_medl(em, faulty);
    CheckResult c{"end-to-end-fidelity", r.fidelity, 0.99, r.fidelity >= 0.99 && !r.kl_infinite &&
                                                              r.kl <= 1e-3 && r.tv <= 0.02,
                  "fidelity >= 0.99, KL <= 1e-3, TV <= 0.02"};
    out.push_back(c);
  }
  return out;
}

}  // namespace maxent
