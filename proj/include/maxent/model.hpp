// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Maximum-entropy models p(x) ~ exp(sum_k lambda_k f_k(x)) on a 2^n grid.
//
// Constraints and multipliers are stored in the natural variable x. The
// circuit works in the centered variable u = (x - m) / r in [-1, 1], where m
// and r are the midpoint and half-width of the interval; centered() rewrites
// the exponent as a constant plus a fixed list of u-functions.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maxent/oracles.hpp"

namespace maxent {

enum class ConstraintKind { kLinear, kPower, kLog, kCustomPoly };

// Largest data register the models accept; wider grids raise kCapExceeded.
inline constexpr int kMaxGridQubits = 24;

const char* to_string(ConstraintKind k);

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::kLinear;
  int power = 1;                // kPower
  std::vector<double> coeffs;   // kCustomPoly, monomial coefficients in x
  int degree = 1;               // polynomial degree of the constraint block
  double fmax = 0.0;            // grid max |f_k|, filled by the model
  std::optional<double> target_moment;

  double operator()(double x) const;
  // Highest power of x in the polynomial part; 0 for kLog.
  int poly_degree() const;
  std::string name() const;

  static ConstraintSpec linear();
  static ConstraintSpec power_of(int p);
  static ConstraintSpec log(int approx_degree = 32);
  static ConstraintSpec custom(std::vector<double> coeffs);
};

// What the prepared amplitudes encode: e^{f} / N (the density itself) or
// e^{f/2} (the square root of the density, so |a|^2 = p).
enum class Convention { kDensity, kSqrt };

const char* to_string(Convention c);
Convention parse_convention(const std::string& s);

struct MaxEntModel {
  std::vector<ConstraintSpec> constraints;
  std::vector<double> multipliers;
  Interval interval;
  int n = 6;
  Convention convention = Convention::kDensity;
  std::optional<FamilyParams> family;  // set by model_from_family

  // Checks sizes, grid and log-domain positivity.
  void validate() const;
  // Recomputes every constraint's fmax on the grid.
  void update_norms();
  int size() const { return static_cast<int>(constraints.size()); }

  Eigen::VectorXd grid() const;
  // sum_k lambda_k f_k on the grid.
  Eigen::VectorXd exponent() const;
  // Exponent of the target amplitudes: exponent() or exponent() / 2.
  Eigen::VectorXd amplitude_exponent() const;
  // Unit-norm target amplitudes for the configured convention.
  Eigen::VectorXd target_amplitudes() const;
  // p ~ exp(exponent()), normalized on the grid.
  GridDensity density() const;

  // sum_k |lambda_k| ||f_k||_max.
  double lambda_abs() const;
  // lambda_abs / ||f||_rms of the combined exponent.
  double lambda_rel() const;
  // log N with N = sqrt(sum_x e^{2 f(x)}), f the amplitude exponent.
  double log_normalization() const;
  // ||a||_rms / ||a||_max of the target amplitude vector, in (0, 1].
  double filling_rate() const;
};

// Exact grid evaluation of exp(sum lambda f), normalized (log domain).
GridDensity density_from_multipliers(const MaxEntModel& m);

// Table of family multipliers in the natural variable:
//   normal       (x, x^2)      (mu / s2, -1 / (2 s2))
//   exponential  (x)           (-rate)
//   pareto       (ln x)        (-(alpha + 1))
//   rayleigh     (ln x, x^2)   (1, -1 / (2 sigma^2))
//   chi          (ln x, x^2)   (k - 1, -1/2)
//   chi-squared  (ln x, x)     (k/2 - 1, -1/2)
// `iv` defaults to default_interval(p, n).
MaxEntModel model_from_family(const FamilyParams& p, int n,
                              std::optional<Interval> iv = std::nullopt,
                              Convention conv = Convention::kDensity,
                              int log_degree = 32);

// Inverse of the multiplier table. Needs m.family for the family tag and
// for scale parameters not carried by multipliers (pareto xm).
FamilyParams family_from_model(const MaxEntModel& m);

struct NormalParams {
  double mu = 0.0;
  double sigma2 = 1.0;
};
// mu = -l1 / (2 l2), sigma^2 = -1 / (2 l2); needs l2 < 0.
NormalParams normal_from_multipliers(double l1, double l2);

// Centered exponent: E(x) = constant + sum_t y_t g_t(u), u = (x - mid) / half,
// g_t = log1p(c u) for the log term (first, when present) and u^p otherwise.
// Terms are kept even when y_t is zero so that the list depends only on the
// constraint kinds. E is the amplitude exponent (convention applied).
struct CenteredTerm {
  enum class Kind { kLog1p, kPower };
  Kind kind = Kind::kPower;
  int power = 1;
  double c = 0.0;
  double y = 0.0;
  int degree = 0;  // approximation degree of the log1p block

  double operator()(double u) const;
};

struct CenteredModel {
  double mid = 0.0;
  double half = 1.0;
  double constant = 0.0;
  std::vector<CenteredTerm> terms;

  double operator()(double u) const;
  Eigen::VectorXd u_grid(int n) const;
};

CenteredModel centered(const MaxEntModel& m);

}  // namespace maxent
