// Copyright 2026 The maxent-qprep Authors
// SPDX-License-Identifier: Apache-2.0
//
// maxent-qprep: prepare single distributions and mixtures, calibrate model
// parameters, fan out preset sweeps and run the invariant suite.
//
// Exit codes: 0 ok, 1 other failure, 2 usage, 3 resource cap, 4 invariant
// failure (verify only).

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "maxent/io.hpp"
#include "maxent/verify.hpp"

namespace fs = std::filesystem;
using namespace maxent;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kCap = 3, kInvariant = 4 };

struct Flags {
  std::string config;
  std::string preset;
  std::string out = "out";
  std::string format = "csv";
  std::string family;
  std::vector<std::string> params;
  std::string histogram;
  std::string init = "random";
  std::optional<int> n;
  double eps = 0.0;
  std::uint64_t seed = 0;
  int weights_index = 0;
  int iters = 0;
  int jobs = 0;
  double perturb = 0.0;
  bool seed_set = false;
};

// A unit of work writing into `dir`; returns its JSON summary.
struct Job {
  std::string label;
  std::function<json(PhaseCache&, const fs::path&)> run;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  f << text;
}

void write_histogram(const fs::path& dir, const std::string& label, const std::string& format,
                     const Eigen::VectorXd& x, const Eigen::VectorXd& theory,
                     const Eigen::VectorXd& sim) {
  if (format == "json") {
    auto arr = [](const Eigen::VectorXd& v) {
      json a = json::array();
      for (double e : v) a.push_back(std::strtod(format_number(e).c_str(), nullptr));
      return a;
    };
    write_file(dir / (label + ".hist.json"),
               json{{"x", arr(x)}, {"p_theory", arr(theory)}, {"p_sim", arr(sim)}}.dump(2) + "\n");
  } else {
    std::ostringstream os;
    write_csv(os, x, theory, sim);
    write_file(dir / (label + ".csv"), os.str());
  }
}

// Preset, then config file, then flags; later sources win.
json load_config(const Flags& f) {
  json cfg = json::object();
  if (!f.preset.empty()) {
    cfg = find_preset(load_presets(), f.preset);
    cfg["preset"] = f.preset;
  }
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw Error(ErrorCode::kIo, "cannot open config " + f.config);
    json file;
    try {
      file = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, std::string("malformed config: ") + e.what());
    }
    if (!file.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be an object");
    if (file.contains("preset") && f.preset.empty()) {
      const std::string name = file["preset"];
      json base = find_preset(load_presets(), name);
      base["preset"] = name;
      base.merge_patch(file);
      file = base;
    }
    cfg.merge_patch(file);
  }
  if (!f.family.empty()) {
    json fam{{"family", f.family}};
    for (const auto& kv : f.params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw Error(ErrorCode::kInvalidArgument, "--param expects key=value, got " + kv);
      try {
        fam[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kInvalidArgument, "non-numeric --param value in " + kv);
      }
    }
    cfg["instances"] = json::array({fam});
  }
  if (f.n) {
    if (*f.n < 1) throw Error(ErrorCode::kInvalidArgument, "--n must be at least 1");
    cfg["n"] = *f.n;
  }
  if (f.eps != 0.0) cfg["eps"] = f.eps;
  return cfg;
}

std::vector<int> n_list(const json& cfg, int fallback) {
  if (!cfg.contains("n")) return {fallback};
  std::vector<int> ns = cfg["n"].is_array() ? cfg["n"].get<std::vector<int>>()
                                            : std::vector<int>{cfg["n"].get<int>()};
  for (int n : ns)
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be at least 1");
  return ns;
}

double eps_of(const json& cfg) {
  const double eps = cfg.value("eps", 1e-3);
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::kInvalidArgument, "eps must lie in (0, 1)");
  return eps;
}

json header(const json& cfg, const char* command) {
  json h{{"command", command}};
  if (cfg.contains("preset")) h["preset"] = cfg["preset"];
  if (cfg.contains("description")) h["description"] = cfg["description"];
  return h;
}

// ------------------------------------------------------------------ prepare

std::vector<Job> prepare_jobs(const json& cfg, const Flags& f) {
  json instances = cfg.value("instances", json::array());
  if (cfg.contains("family")) instances = json::array({cfg["family"]});
  if (instances.empty())
    throw Error(ErrorCode::kInvalidArgument, "prepare needs --family, --preset or a config");
  const double eps = eps_of(cfg);
  const auto conv = parse_convention(cfg.value("convention", std::string("density")));
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const FamilyParams p = family_from_json(instances[i]);
    std::optional<Interval> iv;
    if (instances[i].contains("interval")) iv = interval_from_json(instances[i]["interval"]);
    else if (cfg.contains("interval")) iv = interval_from_json(cfg["interval"]);
    for (int n : n_list(cfg, 6)) {
      const std::string label =
          std::string(to_string(p.family)) + "-" + std::to_string(i) + "-n" + std::to_string(n);
      jobs.push_back({label, [=, format = f.format](PhaseCache& cache, const fs::path& dir) {
                        const MaxEntModel m = model_from_family(p, n, iv, conv);
                        MedlOptions o;
                        o.eps = eps;
                        o.cache = &cache;
                        const MedlResult r = run_medl(m, o);
                        write_histogram(dir, label, format, r.theory.x, r.theory.p, r.simulated.p);
                        json s = header(cfg, "prepare");
                        s["label"] = label;
                        s["family"] = to_json(p);
                        s["n"] = n;
                        s["eps"] = eps;
                        s["interval"] = {m.interval.a, m.interval.b};
                        s["convention"] = to_string(conv);
                        s["result"] = to_json(r);
                        return s;
                      }});
    }
  }
  return jobs;
}

// ------------------------------------------------------------------ mix

std::vector<Job> mix_jobs(const json& cfg, const Flags& f) {
  if (!cfg.contains("mixture"))
    throw Error(ErrorCode::kInvalidArgument, "mix needs a mixture preset or config");
  std::vector<MixtureModel> models;
  if (cfg.contains("weights")) {
    const auto ws = preset_weights(cfg);
    for (std::size_t k = 0; k < ws.size(); ++k) models.push_back(preset_mixture(cfg, k));
  } else {
    models.push_back(mixture_from_json(cfg["mixture"]));
  }
  std::vector<std::size_t> pick(models.size());
  for (std::size_t k = 0; k < pick.size(); ++k) pick[k] = k;
  if (f.weights_index != 0) {
    if (f.weights_index < 1 || f.weights_index > static_cast<int>(models.size()))
      throw Error(ErrorCode::kInvalidArgument, "--weights-index out of range");
    pick = {static_cast<std::size_t>(f.weights_index - 1)};
  }
  const double eps = eps_of(cfg);
  const std::optional<int> n_override = f.n;
  std::vector<Job> jobs;
  for (std::size_t k : pick) {
    MixtureModel m = models[k];
    if (n_override) m.n_x = *n_override;
    const std::string label = cfg.value("preset", std::string("mix")) + "-w" + std::to_string(k + 1);
    jobs.push_back({label, [=, format = f.format](PhaseCache& cache, const fs::path& dir) {
                      WdmOptions o;
                      o.eps = eps;
                      o.cache = &cache;
                      const MixtureResult r = run_wdm(m, o);
                      write_histogram(dir, label, format, r.oracle.x, r.oracle.p, r.marginal.p);
                      json s = header(cfg, "mix");
                      s["label"] = label;
                      s["weights"] = m.weights;
                      s["n_x"] = m.n_x;
                      s["n_theta"] = m.n_theta();
                      s["eps"] = eps;
                      s["result"] = to_json(r);
                      s["depth"] = to_json(mixture_depth_estimate(m, eps));
                      if (cfg.contains("tv_max")) {
                        const double tv_max = cfg["tv_max"];
                        s["tv_max"] = tv_max;
                        s["tv_ok"] = r.tv <= tv_max;
                      }
                      return s;
                    }});
  }
  return jobs;
}

// ------------------------------------------------------------------ calibrate

// Relative error of the sorted fitted means against the sorted target means.
double mu_rel_error(const TraceRecord& r, std::vector<double> target) {
  std::vector<double> fit;
  for (const auto& [k, v] : r.stats)
    if (k.rfind("mu", 0) == 0) fit.push_back(v);
  if (fit.size() != target.size()) return INFINITY;
  std::sort(fit.begin(), fit.end());
  std::sort(target.begin(), target.end());
  double worst = 0.0;
  for (std::size_t c = 0; c < fit.size(); ++c)
    worst = std::max(worst, std::abs(fit[c] - target[c]) / std::abs(target[c]));
  return worst;
}

std::vector<Job> calibrate_jobs(const json& cfg, const Flags& f) {
  if (!cfg.contains("template"))
    throw Error(ErrorCode::kInvalidArgument, "calibrate needs a template preset or config");
  const ModelTemplate t = template_from_json(cfg["template"]);
  std::optional<Eigen::VectorXd> truth;
  Eigen::VectorXd hist;
  const std::string hist_path = !f.histogram.empty() ? f.histogram : cfg.value("histogram", "");
  if (!hist_path.empty()) {
    std::ifstream in(hist_path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open histogram " + hist_path);
    hist = read_histogram(in);
    if (hist.size() != (Eigen::Index{1} << t.n))
      throw Error(ErrorCode::kInvalidArgument, "histogram length does not match 2^n");
  }
  if (cfg.contains("target")) {
    truth = template_params(t, cfg["target"]);
    if (hist_path.empty()) hist = t.distribution(*truth);
  }
  if (hist.size() == 0) throw Error(ErrorCode::kInvalidArgument, "calibrate needs a target");
  if (f.init == "truth" && !truth)
    throw Error(ErrorCode::kInvalidArgument, "--init truth needs target parameters");
  if (f.init != "truth" && f.init != "random")
    throw Error(ErrorCode::kInvalidArgument, "--init must be random or truth");

  TrainingConfig tc = training_from_json(cfg.value("training", json::object()));
  if (f.iters != 0) tc.max_iter = f.iters;
  if (cfg.contains("eps")) tc.prep_eps = eps_of(cfg);
  std::vector<std::uint64_t> seeds{0};
  if (f.seed_set) seeds = {f.seed};
  else if (cfg.contains("seeds")) seeds = cfg["seeds"].get<std::vector<std::uint64_t>>();

  const auto obs = std::make_shared<ObservedOracle>(compile_observed(hist));
  std::vector<Job> jobs;
  for (std::uint64_t seed : seeds) {
    const std::string label =
        cfg.value("preset", std::string("calibrate")) + "-seed" + std::to_string(seed);
    jobs.push_back({label, [=, init = f.init](PhaseCache&, const fs::path& dir) {
                      TrainingConfig c = tc;
                      c.seed = seed;
                      const Eigen::VectorXd x0 = init == "truth" ? *truth : t.random_init(seed);
                      const TrainingTrace tr = train(c, *obs, t, x0);
                      std::ostringstream lines;
                      for (const auto& r : tr.records) lines << to_json(r, t).dump() << '\n';
                      write_file(dir / (label + ".trace.jsonl"), lines.str());
                      const TraceRecord& last = tr.records.back();
                      json s = header(cfg, "calibrate");
                      s["label"] = label;
                      s["seed"] = seed;
                      s["init"] = init;
                      s["template"] = to_string(t.kind);
                      s["iterations"] = tr.records.size();
                      s["converged"] = tr.converged;
                      s["budget_exhausted"] = tr.budget_exhausted;
                      s["final"] = to_json(last, t);
                      s["best_loss"] = std::strtod(format_number(tr.best_loss).c_str(), nullptr);
                      if (cfg.contains("kl_max")) {
                        const double kl_max = cfg["kl_max"];
                        s["kl_ok"] = last.kl <= kl_max;
                        s["thresholds_note"] =
                            "thresholds are property-based stand-ins; no published tolerance";
                      }
                      if (cfg.contains("mu_rel_max") && cfg.contains("target")) {
                        const double e = mu_rel_error(last, cfg["target"]["mu"]);
                        s["mu_rel_error"] = std::strtod(format_number(e).c_str(), nullptr);
                        s["mu_ok"] = e <= cfg["mu_rel_max"].get<double>();
                      }
                      const bool improving = tr.best_loss < tr.records.front().loss;
                      s["best_loss_improved"] = improving;
                      return s;
                    }});
  }
  return jobs;
}

// ------------------------------------------------------------------ driver

std::vector<Job> jobs_for(const std::string& command, const json& cfg, const Flags& f) {
  if (command == "prepare") return prepare_jobs(cfg, f);
  if (command == "mix") return mix_jobs(cfg, f);
  if (command == "calibrate") return calibrate_jobs(cfg, f);
  throw Error(ErrorCode::kInvalidArgument, "unknown command " + command);
}

void print_line(const json& s) {
  std::cout << s.value("label", "") << ':';
  const json& r = s.contains("result") ? s["result"] : s["final"];
  for (const char* k : {"fidelity", "kl", "tv", "success_probability", "loss"})
    if (r.contains(k) && !r[k].is_null()) std::cout << ' ' << k << '=' << r[k].get<double>();
  std::cout << '\n';
}

int run_sequential(const std::vector<Job>& jobs, const fs::path& out) {
  fs::create_directories(out);
  PhaseCache& cache = PhaseCache::from_env();
  for (const auto& j : jobs) {
    const json s = j.run(cache, out);
    write_file(out / (j.label + ".json"), s.dump(2) + "\n");
    print_line(s);
  }
  return kOk;
}

// Independent runs over worker threads; each writes its own directory and
// owns its phase cache.
int run_parallel(const std::vector<Job>& jobs, const fs::path& out, int workers) {
  fs::create_directories(out);
  std::vector<json> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    PhaseCache cache;
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        const fs::path dir = out / jobs[i].label;
        fs::create_directories(dir);
        results[i] = jobs[i].run(cache, dir);
        write_file(dir / (jobs[i].label + ".json"), results[i].dump(2) + "\n");
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  json index = json::array();
  int status = kOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << jobs[i].label << ": " << errors[i] << '\n';
      index.push_back({{"label", jobs[i].label}, {"error", errors[i]}});
      status = kFailure;
    } else {
      print_line(results[i]);
      index.push_back(results[i]);
    }
  }
  write_file(out / "sweep.json", index.dump(2) + "\n");
  return status;
}

int cmd_verify(const Flags& f) {
  VerifyOptions o;
  o.phase_perturbation = f.perturb;
  const auto checks = run_invariant_suite(o);
  bool ok = true;
  std::cout << std::left << std::setw(24) << "check" << std::setw(14) << "measured"
            << std::setw(14) << "bound" << "status\n";
  json report = json::array();
  for (const auto& c : checks) {
    ok = ok && c.pass;
    std::cout << std::left << std::setw(24) << c.name << std::setw(14) << format_number(c.measured)
              << std::setw(14) << format_number(c.bound) << (c.pass ? "PASS" : "FAIL") << "  "
              << c.detail << '\n';
    report.push_back({{"name", c.name},
                      {"measured", c.measured},
                      {"bound", c.bound},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  }
  if (f.format == "json") {
    fs::create_directories(f.out);
    write_file(fs::path(f.out) / "verify.json", report.dump(2) + "\n");
  }
  return ok ? kOk : kInvariant;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kLayoutMismatch: return kUsage;
    case ErrorCode::kCapExceeded: return kCap;
    default: return kFailure;
  }
}

void report_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum state preparation for maximum-entropy distributions"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* c) {
    c->add_option("--config", f.config, "JSON config file");
    c->add_option("--preset", f.preset, "named preset from data/presets.json");
    c->add_option("--n", f.n, "qubits of the data register");
    c->add_option("--eps", f.eps, "target error");
    c->add_option("--seed", f.seed, "seed")->each([&f](const std::string&) { f.seed_set = true; });
    c->add_option("--out", f.out, "output directory")->capture_default_str();
    c->add_option("--format", f.format, "histogram format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };

  auto* prepare = app.add_subcommand("prepare", "prepare one or more single-family distributions");
  common(prepare);
  prepare->add_option("--family", f.family, "family name");
  prepare->add_option("--param", f.params, "family parameter key=value (repeatable)");

  auto* mix = app.add_subcommand("mix", "prepare a weighted mixture");
  common(mix);
  mix->add_option("--weights-index", f.weights_index, "1-based weight vector of the preset");

  auto* calibrate = app.add_subcommand("calibrate", "fit model parameters to observed data");
  common(calibrate);
  calibrate->add_option("--histogram", f.histogram, "observed histogram (CSV)");
  calibrate->add_option("--init", f.init, "random or truth")->capture_default_str();
  calibrate->add_option("--iters", f.iters, "iteration budget");

  auto* sweep = app.add_subcommand("sweep", "run every instance of a preset in parallel");
  common(sweep);
  sweep->add_option("--jobs", f.jobs, "worker threads (default: hardware)");
  sweep->add_option("--iters", f.iters, "iteration budget for calibrate presets");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  common(verify);
  verify->add_option("--perturb-phases", f.perturb,
                     "debug: shift every exponential-layer phase by this amount");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(f);
    const json cfg = load_config(f);
    if (sweep->parsed()) {
      const std::string command = cfg.value("command", "");
      if (command.empty())
        throw Error(ErrorCode::kInvalidArgument, "sweep needs a preset or config with a command");
      const int workers = f.jobs > 0 ? f.jobs
                                     : std::max(1u, std::thread::hardware_concurrency());
      return run_parallel(jobs_for(command, cfg, f), f.out, workers);
    }
    const std::string command = prepare->parsed() ? "prepare" : mix->parsed() ? "mix" : "calibrate";
    if (cfg.contains("command") && cfg["command"] != command)
      throw Error(ErrorCode::kInvalidArgument,
                  "preset is for '" + cfg["command"].get<std::string>() + "', not " + command);
    return run_sequential(jobs_for(command, cfg, f), f.out);
  } catch (const Error& e) {
    report_error(to_string(e.code()), e.what());
    return exit_code(e.code());
  } catch (const json::exception& e) {
    report_error("invalid_config", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    report_error("failure", e.what());
    return kFailure;
  }
}
