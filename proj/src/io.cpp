// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0

#include "maxent/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#ifndef MAXENT_DATA_DIR
#define MAXENT_DATA_DIR "data"
#endif

namespace maxent {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

// Rounds through format_number so JSON output is stable across platforms.
double rounded(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(rounded(v)) : json(nullptr); }

std::vector<double> doubles(const json& j, const char* key) {
  require(j.contains(key) && j[key].is_array(), std::string("missing array '") + key + "'");
  return j[key].get<std::vector<double>>();
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& os, const Eigen::VectorXd& x, const Eigen::VectorXd& theory,
               const Eigen::VectorXd& sim) {
  require(x.size() == theory.size() && x.size() == sim.size(), "csv columns differ in length");
  os << "x,p_theory,p_sim\n";
  for (Eigen::Index i = 0; i < x.size(); ++i)
    os << format_number(x(i)) << ',' << format_number(theory(i)) << ','
       << format_number(sim(i)) << '\n';
}

Eigen::VectorXd read_histogram(std::istream& is) {
  std::vector<double> p;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str()) {
      require(p.empty(), "non-numeric histogram row: " + line);
      continue;  // header
    }
    p.push_back(v);
  }
  Eigen::VectorXd h = Eigen::Map<Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
  require(h.size() >= 2 && (h.size() & (h.size() - 1)) == 0, "histogram length must be 2^n");
  require((h.array() >= 0.0).all() && h.sum() > 0.0, "histogram must be nonnegative and nonzero");
  return h / h.sum();
}

FamilyParams family_from_json(const json& j) {
  require(j.is_object() && j.contains("family"), "family spec needs a 'family' name");
  FamilyParams p;
  p.family = parse_family(j["family"].get<std::string>());
  p.mu = j.value("mu", p.mu);
  p.sigma2 = j.value("sigma2", p.sigma2);
  p.rate = j.value("rate", p.rate);
  p.alpha = j.value("alpha", p.alpha);
  p.xm = j.value("xm", p.xm);
  p.sigma = j.value("sigma", p.sigma);
  p.k = j.value("k", p.k);
  p.validate();
  return p;
}

json to_json(const FamilyParams& p) {
  json j{{"family", to_string(p.family)}};
  switch (p.family) {
    case Family::kNormal: j["mu"] = p.mu; j["sigma2"] = p.sigma2; break;
    case Family::kExponential: j["rate"] = p.rate; break;
    case Family::kPareto: j["alpha"] = p.alpha; j["xm"] = p.xm; break;
    case Family::kRayleigh: j["sigma"] = p.sigma; break;
    case Family::kChi:
    case Family::kChiSquared: j["k"] = p.k; break;
  }
  return j;
}

Interval interval_from_json(const json& j) {
  require(j.is_array() && j.size() == 2, "interval must be [a, b]");
  Interval iv{j[0].get<double>(), j[1].get<double>()};
  require(iv.a < iv.b, "interval must satisfy a < b");
  return iv;
}

MixtureModel mixture_from_json(const json& j) {
  MixtureModel m;
  const Family f = parse_family(j.value("family", std::string("normal")));
  m.weights = doubles(j, "weights");
  if (f == Family::kNormal) {
    const auto mu = doubles(j, "mu"), s2 = doubles(j, "sigma2");
    require(mu.size() == s2.size(), "mu and sigma2 differ in length");
    for (std::size_t c = 0; c < mu.size(); ++c) {
      FamilyParams p;
      p.mu = mu[c];
      p.sigma2 = s2[c];
      m.components.push_back(p);
    }
  } else if (f == Family::kExponential) {
    for (double r : doubles(j, "rate")) {
      FamilyParams p;
      p.family = Family::kExponential;
      p.rate = r;
      m.components.push_back(p);
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument, "mixtures support normal and exponential families");
  }
  m.interval = interval_from_json(j.at("interval"));
  m.n_x = j.value("n", m.n_x);
  m.validate();
  return m;
}

json to_json(const DepthEstimate& d) {
  return {{"n", d.n},
          {"m", d.m},
          {"d_f", d.d_f},
          {"d_exp", d.d_exp},
          {"lambda", rounded(d.lambda)},
          {"log_norm", rounded(d.log_norm)},
          {"filling", rounded(d.filling)},
          {"eps", d.eps},
          {"product", rounded(d.product)},
          {"amplification", rounded(d.amplification)},
          {"log_inv", rounded(d.log_inv)}};
}

json to_json(const MixtureDepth& d) {
  return {{"n_x", d.n_x},
          {"m", d.m},
          {"d_f", d.d_f},
          {"n_theta", d.n_theta},
          {"d_theta", d.d_theta},
          {"filling", rounded(d.filling)},
          {"eps", d.eps},
          {"data_term", rounded(d.data_term)},
          {"latent_term", rounded(d.latent_term)},
          {"loader_term", rounded(d.loader_term)},
          {"total", rounded(d.total)}};
}

json to_json(const MedlResult& r) {
  return {{"fidelity", rounded(r.fidelity)},
          {"amplitude_fidelity", rounded(r.amplitude_fidelity)},
          {"kl", finite_or_null(r.kl_infinite ? INFINITY : r.kl)},
          {"kl_infinite", r.kl_infinite},
          {"tv", rounded(r.tv)},
          {"success_probability", rounded(r.success_probability)},
          {"predicted_probability", rounded(r.theoretical_probability)},
          {"probability_ratio", rounded(r.success_probability / r.theoretical_probability)},
          {"exp_degree", r.exp_degree},
          {"beta", rounded(r.beta)},
          {"depth", to_json(r.depth)}};
}

json to_json(const MixtureResult& r) {
  json comp = json::array();
  for (double f : r.component_fidelity) comp.push_back(rounded(f));
  return {{"fidelity", rounded(r.fidelity)},
          {"kl", finite_or_null(r.kl_infinite ? INFINITY : r.kl)},
          {"kl_infinite", r.kl_infinite},
          {"tv", rounded(r.tv)},
          {"joint_fidelity", rounded(r.joint_fidelity)},
          {"component_fidelity", comp},
          {"success_probability", rounded(r.success_probability)},
          {"exp_degree", r.exp_degree},
          {"beta", rounded(r.beta)}};
}

json to_json(const TraceRecord& r, const ModelTemplate& t) {
  json params = json::object();
  const auto names = t.names();
  for (Eigen::Index i = 0; i < r.params.size(); ++i) params[names[i]] = rounded(r.params(i));
  json stats = json::object();
  for (const auto& [k, v] : r.stats) stats[k] = rounded(v);
  return {{"iter", r.iter},
          {"loss", rounded(r.loss)},
          {"best_loss", rounded(r.best_loss)},
          {"fidelity", rounded(r.fidelity)},
          {"kl", finite_or_null(r.kl)},
          {"params", params},
          {"stats", stats}};
}

std::vector<std::vector<double>> preset_weights(const json& preset) {
  const json& w = preset.at("weights");
  if (w.is_string()) {
    require(w.get<std::string>() == "cyclic-1-8-over-36", "unknown weight rule " + w.dump());
    std::vector<std::vector<double>> out(8, std::vector<double>(8));
    for (int k = 0; k < 8; ++k)
      for (int c = 0; c < 8; ++c) out[k][c] = ((k + c) % 8 + 1) / 36.0;
    return out;
  }
  return w.get<std::vector<std::vector<double>>>();
}

MixtureModel preset_mixture(const json& preset, std::size_t index) {
  const auto ws = preset_weights(preset);
  require(index < ws.size(), "weight vector index out of range");
  json j = preset.at("mixture");
  j["weights"] = ws[index];
  return mixture_from_json(j);
}

ModelTemplate template_from_json(const json& j) {
  ModelTemplate t;
  const std::string kind = j.value("kind", std::string("family"));
  if (kind == "family") {
    t.kind = TemplateKind::kFamily;
    t.family = parse_family(j.at("family").get<std::string>());
  } else if (kind == "normal-mixture") {
    t.kind = TemplateKind::kNormalMixture;
  } else if (kind == "exponential-mixture") {
    t.kind = TemplateKind::kExponentialMixture;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown template kind " + kind);
  }
  t.components = j.value("components", 1);
  require(t.components >= 1, "template needs at least one component");
  t.interval = interval_from_json(j.at("interval"));
  t.n = j.value("n", t.n);
  require(t.n >= 1, "n must be positive");
  return t;
}

Eigen::VectorXd template_params(const ModelTemplate& t, const json& target) {
  switch (t.kind) {
    case TemplateKind::kNormalMixture:
      return encode_normal_mixture(t.interval, doubles(target, "mu"), doubles(target, "sigma2"),
                                   doubles(target, "weights"));
    case TemplateKind::kExponentialMixture:
      return encode_exponential_mixture(doubles(target, "rate"), doubles(target, "weights"));
    case TemplateKind::kFamily: {
      json f = target;
      f["family"] = to_string(t.family);
      const MaxEntModel m =
          model_from_family(family_from_json(f), t.n, t.interval, Convention::kSqrt);
      return Eigen::Map<const Eigen::VectorXd>(m.multipliers.data(),
                                               static_cast<Eigen::Index>(m.multipliers.size()));
    }
  }
  return {};
}

TrainingConfig training_from_json(const json& j, TrainingConfig c) {
  c.lr = j.value("lr", c.lr);
  c.max_iter = j.value("max_iter", c.max_iter);
  c.h = j.value("h", c.h);
  c.gtol = j.value("gtol", c.gtol);
  c.shots = j.value("shots", c.shots);
  c.prep_eps = j.value("prep_eps", c.prep_eps);
  const std::string loss = j.value("loss", std::string("fidelity"));
  require(loss == "fidelity" || loss == "l2", "loss must be fidelity or l2");
  c.loss = loss == "l2" ? LossKind::kL2 : LossKind::kFidelity;
  const std::string backend = j.value("backend", std::string("exact"));
  require(backend == "exact" || backend == "circuit", "backend must be exact or circuit");
  c.backend = backend == "circuit" ? Backend::kCircuit : Backend::kExact;
  return c;
}

std::string default_presets_path() { return std::string(MAXENT_DATA_DIR) + "/presets.json"; }

json load_presets(const std::string& path) {
  const std::string p = path.empty() ? default_presets_path() : path;
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::kIo, "cannot open presets file " + p);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, "malformed presets file " + p + ": " + e.what());
  }
}

json find_preset(const json& presets, const std::string& name) {
  const json& all = presets.at("presets");
  if (!all.contains(name)) {
    std::ostringstream os;
    os << "unknown preset '" << name << "'; known:";
    for (const auto& [k, v] : all.items()) os << ' ' << k;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  return all[name];
}

}  // namespace maxent
