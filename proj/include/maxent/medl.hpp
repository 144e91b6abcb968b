// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Three-layer loader for maximum-entropy states: constraint blocks on the
// centered grid variable, a parameterized LCU that sums them into the
// exponent, and a QSVT layer that exponentiates the exponent block.

#pragma once

#include <optional>
#include <vector>

#include "maxent/block_encoding.hpp"
#include "maxent/model.hpp"
#include "maxent/oracles.hpp"
#include "maxent/qsvt.hpp"

namespace maxent {

struct MedlOptions {
  double eps = 1e-3;
  // Exponential layer degree; 0 walks kExpDegreeLadder and keeps the first
  // degree whose classical prediction meets eps. A fixed degree keeps the
  // circuit structure identical across parameter settings.
  int exp_degree = 0;
  double phase_tol = 1e-10;
  SignScheme scheme = SignScheme::kAngle;
  // Fault injection: shifts every exponential-layer phase after solving.
  double phase_perturbation = 0.0;
  // nullptr selects PhaseCache::from_env().
  PhaseCache* cache = nullptr;
};

inline constexpr int kExpDegreeLadder[] = {16, 24, 32, 48, 64, 96, 128, 192};

// One term of the exponent: contributes coeff * block(u) + offset.
struct ConstraintBlock {
  CenteredTerm term;
  BlockEncoding be;
  std::optional<QsvtPlan> plan;  // empty for the plain linear block
  // term(u) = gain * block(u) + shift
  double gain = 1.0;
  double shift = 0.0;
  double coeff = 0.0;
  double offset = 0.0;
  Eigen::VectorXd values;  // realized block diagonal on the grid
};

// Blocks of the u-functions of a centered model; coefficients are left at 0.
// Depends on n, the term kinds and the log1p parameter c only.
std::vector<ConstraintBlock> constraint_blocks(const CenteredModel& cm, int n,
                                               const MedlOptions& opt = {});
// Sets coeff and offset of each block from the term multipliers.
void set_coefficients(std::vector<ConstraintBlock>& blocks, const CenteredModel& cm);

struct Lcc {
  BlockEncoding be;  // block = (sum coeff_t block_t) / beta
  StatePreparationPair pair;
  std::vector<ConstraintBlock> blocks;
  double beta = 0.0;
  double constant = 0.0;   // exponent = constant + beta * values
  Eigen::VectorXd values;  // block diagonal on the grid
};

// Parameterized LCU layer. Throws kInvalidArgument when every multiplier is
// zero (no scale to exponentiate).
Lcc lcc_from_model(const MaxEntModel& m, const MedlOptions& opt = {});

// Degree floor max{ceil(log2(2 / (N eps))), ceil(2 e lambda)}.
int exp_degree_bound(double lambda, double log_norm, double eps);

// Fit of e^{beta (b - bstar)} at the sample points b with |P| <= 1 on [-1, 1].
ChebSeries fit_exponential(const Eigen::VectorXd& b, double beta, double bstar, int degree);

struct DepthEstimate {
  int n = 0;
  int m = 0;         // constraint count M
  int d_f = 0;       // largest constraint block degree
  int d_exp = 0;     // exponential layer degree from the floor formula
  double lambda = 0.0;
  double log_norm = 0.0;
  double filling = 0.0;
  double eps = 0.0;
  double linear_be_depth = 0.0;   // n
  double product = 0.0;           // n M d_f d_exp
  double amplification = 0.0;     // 1 / F repetitions
  double log_inv = 0.0;           // log2(1 / (F eps))
};

DepthEstimate depth_estimate(const MaxEntModel& m, double eps);

struct MedlCircuit {
  CircuitPtr circuit;     // H on data, then the exponential block-encoding
  RegisterLayout layout;  // data, constraint, lcu, exp
  Lcc lcc;
  QsvtPlan exp_plan;
  BlockEncoding exp_be;
  int exp_degree = 0;
  int degree_floor = 0;
  double bstar = 0.0;
  // Classical prediction of the post-selected data amplitudes (unnormalized).
  Eigen::VectorXd predicted;

  std::vector<int> ancillas() const;
};

MedlCircuit build_medl(const MaxEntModel& m, const MedlOptions& opt = {});

struct MedlResult {
  Statevector state;  // post-selected data register
  double success_probability = 0.0;
  double theoretical_probability = 0.0;  // F^2 / 4
  double fidelity = 0.0;                 // distribution fidelity vs oracle
  double amplitude_fidelity = 0.0;       // |<target|state>|^2
  double kl = 0.0;
  bool kl_infinite = false;
  double tv = 0.0;
  GridDensity theory;
  GridDensity simulated;
  DepthEstimate depth;
  int exp_degree = 0;
  double beta = 0.0;
  double seconds = 0.0;

  explicit MedlResult(Statevector s) : state(std::move(s)) {}
};

// Distribution read off data amplitudes under a convention: |a| for the
// density convention, |a|^2 for the square-root one.
Eigen::VectorXd decode_distribution(const CVector& amps, Convention conv);

MedlResult run_medl(const MaxEntModel& m, const MedlOptions& opt = {});
MedlResult run_medl(const MaxEntModel& m, const MedlCircuit& c, double eps);

}  // namespace maxent
