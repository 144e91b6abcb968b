// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense statevector simulation. Qubit 0 is the least significant bit of the
// amplitude index; registers are laid out in declaration order.

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace maxent {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kDenseMatrixCap = 12;

enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,
  kZeroProbability,
  kLayoutMismatch,
  kCapExceeded,
  kNotConverged,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* to_string(ErrorCode code);

enum class GateKind : std::uint8_t { H, X, Y, Z, RX, RY, RZ, Phase, Sub };

struct Control {
  int qubit = 0;
  bool value = true;
};

class Circuit;

// One circuit element. Phase(theta) multiplies the target's whole space by
// e^{i theta}; with controls it acts as a relative phase.
struct Op {
  GateKind kind = GateKind::H;
  int target = -1;
  double theta = 0.0;
  std::vector<Control> controls;
  std::shared_ptr<const Circuit> sub;
  bool adjoint = false;
};

class Circuit {
 public:
  explicit Circuit(int width);

  int width() const { return width_; }
  const std::vector<Op>& ops() const { return ops_; }

  Circuit& gate(GateKind kind, int target, double theta = 0.0,
                std::vector<Control> controls = {});
  Circuit& h(int q) { return gate(GateKind::H, q); }
  Circuit& x(int q) { return gate(GateKind::X, q); }
  Circuit& y(int q) { return gate(GateKind::Y, q); }
  Circuit& z(int q) { return gate(GateKind::Z, q); }
  Circuit& rx(int q, double t) { return gate(GateKind::RX, q, t); }
  Circuit& ry(int q, double t) { return gate(GateKind::RY, q, t); }
  Circuit& rz(int q, double t) { return gate(GateKind::RZ, q, t); }
  Circuit& phase(int q, double t) { return gate(GateKind::Phase, q, t); }
  Circuit& cx(int c, int t) { return gate(GateKind::X, t, 0.0, {{c, true}}); }

  // Appends `sub` (same qubit numbering, width <= this width) as one op.
  Circuit& append(std::shared_ptr<const Circuit> sub,
                  std::vector<Control> controls = {}, bool adjoint = false);
  // Inlines the ops of `other` (same numbering).
  Circuit& extend(const Circuit& other);

  std::size_t size() const { return ops_.size(); }

 private:
  int width_;
  std::vector<Op> ops_;
};

using CircuitPtr = std::shared_ptr<const Circuit>;

// Reversed op order with every op inverted.
Circuit adjoint(const Circuit& c);

// Copy of `c` on a circuit of width `new_width` with qubit q sent to map[q].
// Shared sub-circuits stay shared in the copy.
CircuitPtr remap(const Circuit& c, const std::vector<int>& map, int new_width);

// Kinds, targets, controls and nesting of every op, with rotation angles
// omitted. Two circuits that differ only in angles have equal signatures.
std::string structure_signature(const Circuit& c);

// Number of primitive gates after expanding sub-circuits.
std::size_t flat_gate_count(const Circuit& c);

struct Register {
  std::string name;
  int offset = 0;
  int width = 0;
};

class RegisterLayout {
 public:
  RegisterLayout() = default;

  // Returns the offset of the new register.
  int add(const std::string& name, int width);
  const Register& find(const std::string& name) const;
  bool contains(const std::string& name) const;
  int total_width() const { return total_; }
  const std::vector<Register>& registers() const { return regs_; }
  std::vector<int> qubits(const std::string& name) const;

  friend bool operator==(const RegisterLayout& a, const RegisterLayout& b);

 private:
  std::vector<Register> regs_;
  int total_ = 0;
};

class Statevector {
 public:
  explicit Statevector(RegisterLayout layout);
  Statevector(RegisterLayout layout, CVector amplitudes);

  const RegisterLayout& layout() const { return layout_; }
  const CVector& amplitudes() const { return amp_; }
  CVector& mutable_amplitudes() { return amp_; }
  int width() const { return layout_.total_width(); }
  double norm() const { return amp_.norm(); }

 private:
  RegisterLayout layout_;
  CVector amp_;
};

// Executes circuits on raw amplitude vectors. Sub-circuits used repeatedly
// are compiled once into per-branch dense blocks on their non-diagonal
// qubits; the cache lives as long as the simulator.
class Simulator {
 public:
  Simulator();
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  void run(CVector& amps, int width, const Circuit& c, bool adjoint = false);
  void run(Statevector& state, const Circuit& c, bool adjoint = false);

  // Disables fusion; every sub-circuit is expanded gate by gate.
  void set_fusion(bool enabled) { fusion_ = enabled; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  bool fusion_ = true;
};

Statevector apply(const Statevector& state, const Circuit& c);
Statevector apply(const Statevector& state, const Op& op);

struct PostSelection {
  Statevector state;
  double probability = 0.0;
};

// Projects `qubits` onto `outcome` (bit k of outcome belongs to qubits[k]),
// drops them and renormalizes. The result keeps the remaining qubits in
// ascending order under a single register named "rest".
PostSelection post_select(const Statevector& state,
                          const std::vector<int>& qubits, std::uint64_t outcome);
// Register form. The outcome string is a binary literal, most significant
// qubit first; the register is removed from the returned layout.
PostSelection post_select(const Statevector& state, const std::string& reg,
                          const std::string& outcome);

// Unnormalized amplitudes of the branch where `qubits` read `outcome`.
CVector project(const CVector& amps, int width, const std::vector<int>& qubits,
                std::uint64_t outcome);

cplx inner_product(const Statevector& a, const Statevector& b);

// (<0|_anc (x) I) U (|0>_anc (x) I) with the ancillas taken as the given
// qubits. Rows and columns follow the remaining qubits in ascending order.
CMatrix extract_block(const Circuit& c, const std::vector<int>& ancillas);
// The ancillas are the top `a` qubits.
CMatrix extract_block(const Circuit& c, int a);
// Full unitary; width must be within the dense cap.
CMatrix circuit_unitary(const Circuit& c);

}  // namespace maxent
