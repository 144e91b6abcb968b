// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Classical ground truth on the grid: family densities, mixtures, special
// functions and distribution metrics.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace maxent {

enum class Family { kNormal, kExponential, kPareto, kRayleigh, kChi, kChiSquared };

const char* to_string(Family f);
Family parse_family(const std::string& name);

struct FamilyParams {
  Family family = Family::kNormal;
  double mu = 0.0;      // normal
  double sigma2 = 1.0;  // normal variance
  double rate = 1.0;    // exponential
  double alpha = 2.0;   // pareto shape
  double xm = 1.0;      // pareto scale
  double sigma = 1.0;   // rayleigh
  double k = 4.0;       // chi, chi-squared

  void validate() const;
};

struct Interval {
  double a = 0.0;
  double b = 1.0;

  double mid() const { return 0.5 * (a + b); }
  double half() const { return 0.5 * (b - a); }
};

// x_j = a + j (b - a) / (2^n - 1).
Eigen::VectorXd grid_points(const Interval& iv, int n);

// Upper end covering mean + 4 sd (normal: mu +- 4 sigma).
double coverage_end(const FamilyParams& p);
// Default grid interval. Families with a log term use
// [A 2^-n, A (2 - 2^-n)] with 2A the coverage end, so that x = A (1 + c u)
// with c = 1 - 2^-n stays positive; pareto uses [xm, 2^n xm].
Interval default_interval(const FamilyParams& p, int n);

// Unnormalized log density; -inf outside the support.
double log_density(const FamilyParams& p, double x);

struct GridDensity {
  Eigen::VectorXd x;
  Eigen::VectorXd p;  // sums to 1
  std::string provenance;
};

// Normalizes exp(logp) with the maximum subtracted first.
GridDensity density_from_log(const Eigen::VectorXd& x, const Eigen::VectorXd& logp,
                             std::string provenance);
GridDensity density_from_family(const FamilyParams& p, const Interval& iv, int n);
// Convex combination of the grid-normalized component densities.
GridDensity mixture_density(const std::vector<FamilyParams>& components,
                            const std::vector<double>& weights, const Interval& iv, int n);

struct Metrics {
  double fidelity = 0.0;  // (sum sqrt(p q))^2
  double kl = 0.0;        // KL(p || q)
  bool kl_infinite = false;
  double tv = 0.0;
};

// p is the reference. Both must be normalized and of equal length.
Metrics metrics(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// ||v||_rms / ||v||_max for a nonnegative grid vector.
double filling_rate(const Eigen::VectorXd& v);

inline constexpr double kEulerGamma = 0.57721566490153286061;
double gamma_fn(double x);
double digamma(double x);
// gamma(2, t) = 1 - e^{-t} (1 + t).
double lower_gamma2(double t);
// Regularized lower incomplete gamma P(s, t), general s.
double gamma_p(double s, double t);

// Untruncated moments of the natural constraints, used as target moments.
struct FamilyMoments {
  double mean = 0.0;      // E[x]
  double second = 0.0;    // E[x^2]
  double log_mean = 0.0;  // E[ln x], where defined
};
FamilyMoments family_moments(const FamilyParams& p);

}  // namespace maxent
