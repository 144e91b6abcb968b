// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Polynomial approximation, QSP phase factors and the QSVT circuit for
// Hermitian (here diagonal) block-encodings.
//
// Phases are solved in the Wx convention, where the response is
// Re <0| e^{i psi_0 Z} prod_k W(x) e^{i psi_k Z} |0> with
// W(x) = [[x, i sqrt(1-x^2)], [i sqrt(1-x^2), x]], and then mapped to the
// reflection convention used by the circuit.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maxent/block_encoding.hpp"
#include "maxent/chebyshev.hpp"

namespace maxent {

enum class Parity { kEven, kOdd, kMixed };

const char* to_string(Parity p);

struct PolynomialSpec {
  ChebSeries poly;
  Parity parity = Parity::kEven;
  int degree = 0;  // nominal degree; fixes the circuit shape
  double sup = 0.0;
  // poly = scale * (approximation of the target function).
  double scale = 1.0;
  // Cache identity. Empty kind means "keyed by the coefficients".
  std::string kind;
  std::vector<double> params;
};

// Classifies parity from the coefficients and measures the sup norm.
// `degree` < 0 takes the series length.
PolynomialSpec make_polynomial(const ChebSeries& p, int degree = -1);

enum class FunctionKind { kExp, kCos, kSin, kGaussian, kLog1p, kMonomial };

const char* to_string(FunctionKind k);

struct FunctionTarget {
  FunctionKind kind = FunctionKind::kExp;
  // exp/cos/sin: f(x) = g(param * x); gaussian: sigma; log1p: c.
  double param = 1.0;
  std::vector<double> coeffs;  // monomial coefficients for kMonomial
  double eps = 1e-6;
  int degree = -1;  // fixed degree; < 0 selects it from eps
  bool chebyshev = false;

  double operator()(double x) const;
  void validate() const;
};

// Truncated Taylor series of degree d in Chebyshev form (no rescaling).
ChebSeries taylor_series(const FunctionTarget& t, int d);
// Remainder bound of the degree-d Taylor truncation on [-1, 1].
double taylor_bound(const FunctionTarget& t, int d);

// Approximation with uniform error <= eps, rescaled to sup norm 1/2.
PolynomialSpec approximate(const FunctionTarget& t);

struct ParityPart {
  Parity parity = Parity::kEven;
  int degree = 0;
  ChebSeries target;    // what this part realizes on its own
  Eigen::VectorXd psi;  // Wx phases, size degree + 1, symmetric

  // Reflection-convention phases phi_1..phi_d and the final angle gamma.
  std::vector<double> phi() const;
  double gamma() const;
};

struct QsvtPlan {
  PolynomialSpec poly;
  std::vector<ParityPart> parts;  // one, or {even, odd} for mixed parity
  double residual = 0.0;          // max |P - realized| on 2001 points
  double tol = 1e-10;
  int iterations = 0;

  double realized(double x) const;
  Eigen::VectorXd realized(const Eigen::VectorXd& x) const;
  // Number of block-encoding queries per parity branch.
  int queries() const;
  // Copy with every Wx phase shifted by delta.
  QsvtPlan perturbed(double delta) const;
};

// Re <0|U_psi(x)|0> in the Wx convention.
double qsp_response(const Eigen::VectorXd& psi, double x);

// Keyed store of solved phase vectors, persisted as versioned JSON with
// decimal numbers at 17 significant digits.
class PhaseCache {
 public:
  PhaseCache() = default;
  // Loads `path` if it exists; save() writes back to it.
  explicit PhaseCache(std::string path);
  // Cache at $MAXENT_QPREP_CACHE, or an in-memory cache when unset.
  static PhaseCache& from_env();

  static std::string key(const PolynomialSpec& p, double tol);

  std::optional<std::vector<Eigen::VectorXd>> find(const std::string& key) const;
  void store(const std::string& key, const std::vector<Eigen::VectorXd>& psi);
  void save() const;
  std::size_t size() const { return entries_.size(); }
  const std::string& path() const { return path_; }

  static constexpr int kVersion = 1;

 private:
  std::string path_;
  std::map<std::string, std::vector<Eigen::VectorXd>> entries_;
};

// Definite parity needs sup <= 1, mixed parity sup <= 1/2. Throws
// kNotConverged (with the best residual in the message) past max_iter.
QsvtPlan solve_phases(const PolynomialSpec& p, double tol = 1e-10,
                      PhaseCache* cache = nullptr, int max_iter = 10000);

// (1, a + 2 [+1 for mixed], 4d sqrt(eps/alpha) + residual) block-encoding
// of P(A / alpha). Ancilla order: be ancillas, reflection qubit, phase
// qubit, then the parity selector for mixed plans.
BlockEncoding apply_qsvt(const BlockEncoding& be, const QsvtPlan& plan);

// Real diagonal of the block of a diagonal block-encoding, read off one
// simulation of the uniform superposition. Works beyond the dense cap.
Eigen::VectorXd block_diagonal(const BlockEncoding& be);

// Ideal backend: block = g(x) / max|g| for the extracted diagonal x, built
// as a one-ancilla combination of e^{+-i acos} diagonal phases. alpha = max|g|.
BlockEncoding exact_transform(const BlockEncoding& be, const FunctionTarget& t);
BlockEncoding exact_transform(const BlockEncoding& be,
                              const std::function<double(double)>& g);
// Same construction from explicit diagonal values.
BlockEncoding diagonal_encoding(const Eigen::VectorXd& g);

}  // namespace maxent
