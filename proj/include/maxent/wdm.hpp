// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Weighted mixtures of one parametric family as an entangled latent-data
// state sum_c sqrt(w_c) |c> (x) sum_x sqrt(p_c(x)) |x>.
//
// The latent register holds the component index. Its value selects the
// angles of the LCU state-preparation ladder (a lookup conversion from the
// digital index to analog rotation angles), so one shared exponential layer
// produces every branch. Each branch carries an extra identity term holding
// its normalization and a zero-block pad term that equalizes the LCU scale.

#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "maxent/medl.hpp"

namespace maxent {

// Digit registers, one per parameter, read as binary fractions of theta0.
struct LatentSpace {
  std::vector<int> widths;
  double theta0 = std::numbers::pi;

  int total() const;
  void validate() const;
  // theta0 * 0.d1 d2 ... with d1 the most significant qubit of register k.
  double angle(int k, std::uint64_t digits) const;
};

// Tensor product of amplitude loaders preparing sqrt(weights[k]) on
// register k. Registers sit consecutively from `offset`.
Circuit load_latent(const LatentSpace& s, const std::vector<Eigen::VectorXd>& weights,
                    int offset, int width);

// For each register k, RY(theta0 / 2^j) on analog[k] controlled on digit j,
// so analog[k] ends in cos(theta_k / 2)|0> + sin(theta_k / 2)|1>. `extra`
// controls are added to every rotation (the ladder control).
Circuit digital_analog_convert(const LatentSpace& s, int digit_offset,
                               const std::vector<int>& analog, int width,
                               const std::vector<Control>& extra = {});

struct MixtureModel {
  std::vector<FamilyParams> components;  // one family
  std::vector<double> weights;           // sums to 1
  Interval interval;
  int n_x = 6;
  int log_degree = 32;

  void validate() const;
  int size() const { return static_cast<int>(components.size()); }
  // ceil(log2 K), at least 1.
  int n_theta() const;
  // Square-root convention model of component c on the shared grid.
  MaxEntModel component_model(int c) const;
  GridDensity oracle() const;
};

struct WdmOptions {
  double eps = 1e-3;
  int exp_degree = 0;  // 0 selects from kWdmDegreeLadder
  double phase_tol = 1e-10;
  PhaseCache* cache = nullptr;
};

inline constexpr int kWdmDegreeLadder[] = {16, 24, 32, 48, 64, 96, 128, 192, 256};

struct WdmCircuit {
  CircuitPtr circuit;     // latent loader, H on data, exponential layer
  RegisterLayout layout;  // data, latent, constraint, lcu, exp
  std::vector<ConstraintBlock> blocks;
  // Per latent value (rows, padded to 2^n_theta): LCU coefficients in term
  // order [constraint blocks..., constant, pad].
  Eigen::MatrixXd coeffs;
  BlockEncoding lcc;
  QsvtPlan exp_plan;
  BlockEncoding exp_be;
  double beta = 0.0;
  double bstar = 0.0;
  int exp_degree = 0;
  Eigen::MatrixXd branch_values;  // b_c(x), rows c
  Eigen::VectorXd predicted;      // joint amplitudes, index x + 2^n_x c

  std::vector<int> ancillas() const;
};

WdmCircuit build_wdm(const MixtureModel& m, const WdmOptions& opt = {});

// Per-branch oracle: sqrt(w_c p_c(x)) at index x + 2^n_x c.
Eigen::VectorXd branch_oracle(const MixtureModel& m);

struct MixtureResult {
  Statevector joint;  // post-selected data (x) latent
  GridDensity marginal;
  GridDensity oracle;
  std::vector<double> component_fidelity;  // conditional vs component
  double fidelity = 0.0;        // marginal vs oracle
  double kl = 0.0;
  bool kl_infinite = false;
  double tv = 0.0;
  double joint_fidelity = 0.0;  // |<branch oracle|joint>|^2
  double success_probability = 0.0;
  int exp_degree = 0;
  double beta = 0.0;
  double seconds = 0.0;

  explicit MixtureResult(Statevector s) : joint(std::move(s)) {}
};

MixtureResult run_wdm(const MixtureModel& m, const WdmOptions& opt = {});
MixtureResult run_wdm(const MixtureModel& m, const WdmCircuit& c);

// Additive depth decomposition (n_x M d_f + n_theta + d_theta) log2(1/(eps F)).
struct MixtureDepth {
  int n_x = 0;
  int m = 0;
  int d_f = 0;
  int n_theta = 0;
  int d_theta = 0;  // latent loader depth, 2^n_theta - 1 rotations
  double filling = 0.0;
  double eps = 0.0;
  double log_factor = 0.0;
  double data_term = 0.0;
  double latent_term = 0.0;
  double loader_term = 0.0;
  double total = 0.0;
};

MixtureDepth mixture_depth_estimate(const MixtureModel& m, double eps);

}  // namespace maxent
