// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Block-encodings on a fixed local layout: system qubits 0..n-1, ancillas
// n..n+a-1. The encoded operator is A ~= alpha * (<0|_anc U |0>_anc).

#pragma once

#include <cstdint>
#include <vector>

#include "maxent/statevector.hpp"

namespace maxent {

struct BlockEncoding {
  CircuitPtr circuit;
  int n = 0;         // system width
  int ancillas = 0;  // a
  double alpha = 1.0;
  double epsilon = 0.0;

  int width() const { return n + ancillas; }
  std::vector<int> ancilla_qubits() const;
  // Dense block (without the alpha factor); needs width() within the cap.
  CMatrix block() const;
};

// Real amplitude loader on `qubits`: |0> -> sum_k a_k |k> for a real unit
// vector a of length 2^|qubits| (signs allowed). Emits all 2^m - 1 rotations
// regardless of the data, so the structure depends on m only.
Circuit amplitude_loader(const Eigen::VectorXd& a, const std::vector<int>& qubits,
                         int width);

// diag(j / (2^n - 1)) as an exact LCU of I and n weighted -Z terms, with
// ceil(log2(n + 1)) ancillas.
BlockEncoding linear_diagonal_be(int n);
// diag(2j / (2^n - 1) - 1) as an LCU of n weighted -Z terms.
BlockEncoding signed_linear_be(int n);

// Dense-index LCU: block = sum_k c_k U_k / ||c||_1, each U_k given as a
// circuit on the n system qubits. Signs are applied as branch phases.
BlockEncoding lcu_of_unitaries(const std::vector<double>& c,
                               const std::vector<CircuitPtr>& unitaries, int n);

enum class SignScheme {
  kAngle,    // RY-only ladders; signs chosen through P_R angle branches
  kOpposedRx,  // X rotations with opposite angles at sign changes
};

struct StatePreparationPair {
  CircuitPtr left;   // P_L
  CircuitPtr right;  // P_R
  int width = 0;     // b
  int terms = 0;     // M
  double beta = 0.0;
  double epsilon = 0.0;
  SignScheme scheme = SignScheme::kAngle;
  std::vector<double> theta;  // magnitude ladder angles, size M - 1

  // One-hot code of term j: 0 for j = 0, bit (j - 1) otherwise.
  std::uint64_t basis(int j) const;
};

// Ladder angles 2 atan sqrt(sum_{k>j}|y_k| / |y_j|); pi for zero entries,
// 0 once the tail is all zero.
std::vector<double> ladder_angles(const std::vector<double>& y);

// Same angles written in the 1-indexed multiplier form with M entries; the
// last entry has an empty numerator and is 0.
std::vector<double> multiplier_angles(const std::vector<double>& lambda,
                                      const std::vector<double>& fmax);

StatePreparationPair sparse_spp(const std::vector<double>& y,
                                SignScheme scheme = SignScheme::kAngle);

// Angles for one ladder as used by P_L and P_R under the angle scheme.
struct LadderAngles {
  std::vector<double> left;
  std::vector<double> right;
  double right_phase = 0.0;  // global sign of P_R, only needed when M = 1
};
LadderAngles signed_ladder(const std::vector<double>& y);

struct LadderStep {
  GateKind kind = GateKind::RY;
  double theta = 0.0;
};

// Ladder on `qubits` (size max(1, M - 1)) inside a circuit of `width`:
// step 0 rotates qubits[0]; step j rotates qubits[j] controlled on
// qubits[j - 1] and then CNOTs qubits[j] -> qubits[j - 1].
Circuit ladder_circuit(const std::vector<LadderStep>& steps,
                       const std::vector<int>& qubits, int width);

// |0>-column amplitudes of a pair circuit at the M one-hot codes.
std::vector<cplx> pair_amplitudes(const Circuit& c, int terms);

// Select-and-unprepare around `terms`: the block is
// sum_j conj(c_j) d_j block_j, with alpha = pair.beta. Terms share n; their
// ancillas share one register of width max a_j.
BlockEncoding lcu_select(const StatePreparationPair& pair,
                         const std::vector<BlockEncoding>& terms);

// Sum_j y_j A_j for terms with a common alpha, pair built over y:
// an (alpha beta, a + b, alpha eps1 + alpha beta eps2) block-encoding.
BlockEncoding lcu_combine(const StatePreparationPair& pair,
                          const std::vector<BlockEncoding>& terms);

// Embeds `be` into a circuit of `width` qubits: system qubit q -> sys[q],
// ancilla k -> anc[k].
CircuitPtr embed(const BlockEncoding& be, const std::vector<int>& sys,
                 const std::vector<int>& anc, int width);

// Appends every op of `u` with `controls` added.
void append_controlled(Circuit& out, const Circuit& u, const std::vector<Control>& controls);

// Spectral norm of A - alpha * block.
double block_error(const BlockEncoding& be, const CMatrix& target);

}  // namespace maxent
