// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Hybrid calibration: fit model parameters by maximizing the overlap between
// the prepared state and an observed-data state.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "maxent/medl.hpp"
#include "maxent/wdm.hpp"

namespace maxent {

// Histogram over the grid compiled into an amplitude loader for sum sqrt(p)|j>.
struct ObservedOracle {
  Eigen::VectorXd p;
  CircuitPtr circuit;
  int n = 0;

  Statevector state() const;
};

ObservedOracle compile_observed(const Eigen::VectorXd& histogram);

enum class TemplateKind { kFamily, kNormalMixture, kExponentialMixture };

const char* to_string(TemplateKind k);

// Parameter vector layouts:
//   kFamily              natural multipliers of `family`
//   kNormalMixture       (z_c..., log sigma2_c..., logit_c...), mu = mid + half z
//   kExponentialMixture  (log rate_c..., logit_c...)
struct ModelTemplate {
  TemplateKind kind = TemplateKind::kFamily;
  Family family = Family::kNormal;
  int components = 1;
  Interval interval;
  int n = 6;

  int size() const;
  std::vector<std::string> names() const;
  // Normalized model distribution on the grid.
  Eigen::VectorXd distribution(const Eigen::VectorXd& theta) const;
  // Statistical parameters read back from theta (through the multiplier map
  // for the family and normal-mixture kinds).
  std::vector<std::pair<std::string, double>> extract(const Eigen::VectorXd& theta) const;
  // Seeded uniform draw from the documented box of the template.
  Eigen::VectorXd random_init(std::uint64_t seed) const;

  MaxEntModel maxent_model(const Eigen::VectorXd& theta) const;  // kFamily
  MixtureModel mixture_model(const Eigen::VectorXd& theta) const;  // mixtures
};

Eigen::VectorXd encode_normal_mixture(const Interval& iv, const std::vector<double>& mu,
                                      const std::vector<double>& sigma2,
                                      const std::vector<double>& weights);
Eigen::VectorXd encode_exponential_mixture(const std::vector<double>& rates,
                                           const std::vector<double>& weights);

enum class LossKind { kFidelity, kL2 };
// kExact uses the ideal post-selected state (the oracle amplitudes of the
// model); kCircuit simulates the MEDL or WDM circuit.
enum class Backend { kExact, kCircuit };

struct TrainingConfig {
  LossKind loss = LossKind::kFidelity;
  Backend backend = Backend::kExact;
  double lr = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int max_iter = 500;
  double h = 1e-4;      // central difference step
  double gtol = 1e-8;   // stop when the gradient norm falls below
  std::uint64_t seed = 0;
  int shots = 0;        // > 0 estimates the overlap from binomial samples
  double prep_eps = 1e-3;
};

// 1 - |<P_pre|P_obs>| for kFidelity, ||p_pre - p_obs||_2 for kL2.
double loss(const Eigen::VectorXd& theta, const ObservedOracle& obs, const ModelTemplate& t,
            const TrainingConfig& cfg);
Eigen::VectorXd gradient(const Eigen::VectorXd& theta, const ObservedOracle& obs,
                         const ModelTemplate& t, const TrainingConfig& cfg, double h);
// max_i |g_h - g_{h/10}| / max(|g_h|_inf, 1e-12): finite-difference self-consistency.
double gradient_consistency(const Eigen::VectorXd& theta, const ObservedOracle& obs,
                            const ModelTemplate& t, const TrainingConfig& cfg);

struct TraceRecord {
  int iter = 0;
  Eigen::VectorXd params;
  double loss = 0.0;
  double best_loss = 0.0;
  double fidelity = 0.0;  // (sum sqrt(p q))^2
  double kl = 0.0;        // KL(observed || model)
  std::vector<std::pair<std::string, double>> stats;
};

struct TrainingTrace {
  std::vector<TraceRecord> records;
  bool converged = false;
  bool budget_exhausted = false;
  Eigen::VectorXd best_params;
  double best_loss = 0.0;
};

TrainingTrace train(const TrainingConfig& cfg, const ObservedOracle& obs, const ModelTemplate& t,
                    const Eigen::VectorXd& init);

}  // namespace maxent
