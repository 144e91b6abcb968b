// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// Invariant suite behind `maxent-qprep verify`.

#pragma once

#include <string>
#include <vector>

namespace maxent {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  // Fault injection into the exponential layer of the end-to-end check.
  // The rotation-error check then uses the same shift.
  double phase_perturbation = 0.0;
  unsigned seed = 7;
};

std::vector<CheckResult> run_invariant_suite(const VerifyOptions& opt = {});

}  // namespace maxent
