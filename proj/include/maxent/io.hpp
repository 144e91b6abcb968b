// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// CSV/JSON serialization of results, configs and presets.

#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "maxent/calibration.hpp"

namespace maxent {

using nlohmann::json;

// %.12g; the CSV and JSON writers both go through it.
std::string format_number(double v);

// Header `x,p_theory,p_sim`, LF line endings.
void write_csv(std::ostream& os, const Eigen::VectorXd& x, const Eigen::VectorXd& theory,
               const Eigen::VectorXd& sim);

// One probability per line, or `x,p` rows; a header line is skipped.
// The result is renormalized and must have length 2^n.
Eigen::VectorXd read_histogram(std::istream& is);

FamilyParams family_from_json(const json& j);
json to_json(const FamilyParams& p);
Interval interval_from_json(const json& j);

// {"family": "normal", "mu": [...], "sigma2": [...], "weights": [...],
//  "interval": [a, b], "n": 6} or "rate": [...] for exponential mixtures.
MixtureModel mixture_from_json(const json& j);

// Timing is left out so that identical inputs give identical bytes.
json to_json(const MedlResult& r);
json to_json(const MixtureResult& r);
json to_json(const DepthEstimate& d);
json to_json(const MixtureDepth& d);
json to_json(const TraceRecord& r, const ModelTemplate& t);

// Weight vectors of a mix preset: an explicit array of arrays, or
// "cyclic-1-8-over-36" for the eight cyclic shifts of (1, ..., 8) / 36.
std::vector<std::vector<double>> preset_weights(const json& preset);
// Mixture of a mix preset with weight vector `index` (0-based).
MixtureModel preset_mixture(const json& preset, std::size_t index);

// {"kind": "normal-mixture", "components": 2, "interval": [a, b], "n": 6}
// or {"kind": "family", "family": "exponential", ...}.
ModelTemplate template_from_json(const json& j);
// Parameter vector of `t` for {"mu", "sigma2", "weights"} or {"rate", "weights"}.
Eigen::VectorXd template_params(const ModelTemplate& t, const json& target);
TrainingConfig training_from_json(const json& j, TrainingConfig base = {});

// Presets file, $MAXENT_DATA_DIR/presets.json unless `path` is given.
std::string default_presets_path();
json load_presets(const std::string& path = {});
// Throws kInvalidArgument naming the known presets when `name` is missing.
json find_preset(const json& presets, const std::string& name);

}  // namespace maxent
