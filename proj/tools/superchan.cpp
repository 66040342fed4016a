/*
Copyright 2026 the superchan authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

/**
 * @file    superchan.cpp
 * @brief   Pipeline driver: simulate tomography experiments, reconstruct
 *          superchannels from counts, analyze correlations and fidelity
 *          surfaces, and sweep the ideal IC-norm curve.
 *
 * Exit codes: 0 success, 2 configuration error, 3 data error,
 * 4 solver failure.
 */

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "superchan/diamond.hpp"
#include "superchan/io.hpp"

namespace {

using namespace superchan;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

const rvector_t kPaperTaus = {0.012, 0.136, 0.423, 0.757, 0.908};

std::filesystem::path ensure_out_dir(const std::string &out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw data_error("cannot create output directory: " + out);
  return dir;
}

// Config file first, then flag overrides.
json load_config(const std::string &path) {
  if (path.empty())
    return json::object();
  return read_json(path);
}

struct SimulateArgs {
  std::string config, out = ".";
  std::optional<double> tau, theta, v;
  std::optional<std::string> target;
  std::optional<std::uint64_t> n0, seed;
  bool exact = false;
};

int cmd_simulate(const SimulateArgs &args) {
  json cfg = load_config(args.config);
  if (args.tau && args.theta)
    throw std::invalid_argument("give either --tau or --theta, not both");
  if (args.tau)
    cfg["tau"] = *args.tau;
  if (args.theta)
    cfg["theta"] = *args.theta;
  if (args.v)
    cfg["v"] = *args.v;
  if (args.target)
    cfg["interaction"] = *args.target;
  if (args.n0)
    cfg["n0"] = *args.n0;
  if (args.seed)
    cfg["seed"] = *args.seed;
  if (args.exact)
    cfg["exact"] = true;
  const ExperimentSpec spec = experiment_spec_from_json(cfg);

  const auto dir = ensure_out_dir(args.out);
  const CountDataset ds = simulate_counts(spec);
  write_file((dir / "counts.csv").string(), dataset_to_csv(ds));
  write_json((dir / "counts.json").string(), dataset_to_json(ds));
  write_json((dir / "truth_superchannel.json").string(),
             superchannel_to_json(true_superchannel(spec)));
  write_json((dir / "experiment_spec.json").string(),
             experiment_spec_to_json(spec));
  if (spec.exact)
    write_file((dir / "probabilities.csv").string(),
               probabilities_to_csv(ds, exact_probabilities(spec)));
  std::cout << "wrote " << ds.records.size() << " configurations to "
            << (dir / "counts.csv").string() << "\n";
  return kExitOk;
}

struct ReconstructArgs {
  std::string config, data, out = ".", truth;
  std::string method = "mle";
  std::optional<double> beta, tol;
  std::string weight_mode = "binomial";
};

int cmd_reconstruct(const ReconstructArgs &args) {
  json cfg = load_config(args.config);
  const std::string method = cfg.value("method", args.method);
  const double beta = args.beta ? *args.beta : cfg.value("beta", 0.1);
  const double tol = args.tol ? *args.tol : cfg.value("tol", 1e-6);
  const std::string weight_mode = cfg.value("weights", args.weight_mode);
  if (method != "linear" && method != "mle")
    throw std::invalid_argument("--method must be linear or mle");
  if (weight_mode != "binomial" && weight_mode != "uniform")
    throw std::invalid_argument("--weights must be binomial or uniform");

  CountDataset ds;
  if (args.data.ends_with(".json"))
    ds = dataset_from_json(read_json(args.data));
  else
    ds = dataset_from_csv(read_file(args.data));
  ds.beta = beta;

  std::vector<StateLabel> states;
  {
    std::set<int> seen;
    for (const CountRecord &r : ds.records)
      if (seen.insert(int(r.i)).second)
        states.push_back(r.i);
  }
  const Frame frame = build_frame(states);
  if (frame.projectors.size() != ds.records.size())
    throw data_error("dataset does not cover the full frame");

  const auto dir = ensure_out_dir(args.out);
  ReconstructionResult res = [&] {
    if (method == "linear") {
      CountDataset filled = ds;
      if (std::any_of(ds.records.begin(), ds.records.end(),
                      [](const CountRecord &r) { return !r.trials_known; }))
        filled = estimate_trials(ds, frame);
      rvector_t p, w;
      if (ds.exact || weight_mode == "uniform") {
        p = ds.exact ? raw_frequencies(filled) : hedge(filled);
        w.assign(p.size(), 1.0);
      } else {
        p = hedge(filled);
        w = weights(filled, p);
      }
      return linear_inversion(p, frame, w);
    }
    MleOptions opts;
    opts.tol = tol;
    return mle_reconstruct(ds, frame, opts);
  }();

  if (method == "linear" &&
      res.diagnostics.min_eig_pre_projection < -1e-6)
    std::cerr << "warning: linear inversion is not PSD (min eigenvalue "
              << res.diagnostics.min_eig_pre_projection << ")\n";

  json out_json = reconstruction_to_json(res);
  if (!args.truth.empty()) {
    const Superchannel truth =
        superchannel_from_json(read_json(args.truth));
    const double err = (res.superchannel.choi() - truth.choi()).frobenius_norm();
    out_json["frobenius_error_vs_truth"] = err;
    std::cout << "frobenius error vs truth: " << err << "\n";
  }
  write_json((dir / "reconstruction.json").string(), out_json);
  std::cout << "method=" << method << " objective=" << res.objective
            << " iterations=" << res.diagnostics.iterations << "\n";

  if (method == "mle" && !res.diagnostics.converged)
    throw solver_error("MLE certificate exceeds tolerance",
                       res.diagnostics.kkt_residual);
  return kExitOk;
}

struct AnalyzeArgs {
  std::string config, superchannel_path, out = ".";
  std::string target = "Z";
  std::optional<double> tol;
  bool print_pauli = false;
};

int cmd_analyze(const AnalyzeArgs &args) {
  json cfg = load_config(args.config);
  const double tol = args.tol ? *args.tol : cfg.value("tol", 1e-6);
  const std::string target_name = cfg.value("target", args.target);

  const Superchannel m =
      superchannel_from_json(read_json(args.superchannel_path));
  const CMatrix u_target = [&]() -> CMatrix {
    if (target_name == "RYZ")
      return gate(Gate::RY) * gate(Gate::Z);
    return gate(target_name);
  }();

  const auto dir = ensure_out_dir(args.out);
  const IcNormResult ic = ic_norm_detailed(m, tol);
  const DensityMatrix rho_av = average_initial_state(m);
  const Channel e_av = average_effective_map(m);
  const PrepOptimum fmax = optimize_prep(m, u_target, OptMode::Max);
  const PrepOptimum fmin = optimize_prep(m, u_target, OptMode::Min);

  json report;
  report["ic_norm"] = ic.value;
  report["ic_certificate"] = {{"primal", ic.diamond.certificate.primal},
                              {"dual", ic.diamond.certificate.dual}};
  report["witness_is_valid_preparation"] = ic.witness_is_valid_preparation;
  report["distinguish_probability"] = 0.5 * (1.0 + 0.5 * ic.diamond.value);
  report["rho_s_av"] = matrix_to_json(rho_av.mat());
  report["lambda_e_av"] = channel_to_json(e_av);
  report["fprep"] = {{"target", target_name},
                     {"max", {{"theta", fmax.theta},
                              {"phi", fmax.phi},
                              {"f", fmax.f}}},
                     {"min", {{"theta", fmin.theta},
                              {"phi", fmin.phi},
                              {"f", fmin.f}}},
                     {"skipped_points", fmax.skipped_points}};
  write_json((dir / "report.json").string(), report);
  write_file((dir / "fprep_surface.csv").string(),
             surface_to_csv(fmax.surface));

  if (args.print_pauli) {
    std::cout << "superchannel in {|H>,|V>} (x) {I,sx,sy,sz} basis:\n"
              << format_matrix(to_polarization_pauli_basis(m)) << "\n";
  }
  std::cout << "ic_norm=" << ic.value << " fprep_max=" << fmax.f
            << " fprep_min=" << fmin.f << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::string config, out = ".";
  std::vector<std::string> targets = {"Z", "H", "RYZ"};
  std::vector<double> taus;
  std::optional<double> v, tol;
  std::optional<int> points;
};

int cmd_sweep(const SweepArgs &args) {
  json cfg = load_config(args.config);
  const double v = args.v ? *args.v : cfg.value("v", 1.0);
  const double tol = args.tol ? *args.tol : cfg.value("tol", 1e-5);
  const int points = args.points ? *args.points : cfg.value("points", 20);
  if (points < 2)
    throw std::invalid_argument("--points must be at least 2");

  std::vector<InteractionTarget> targets;
  for (const std::string &t : args.targets)
    targets.push_back(interaction_from_string(t));

  // Default grid: uniform points merged with the mandatory tau values.
  rvector_t grid = args.taus;
  if (grid.empty()) {
    const int uniform = std::max(2, points - int(kPaperTaus.size()));
    for (int i = 0; i < uniform; ++i)
      grid.push_back(double(i) / double(uniform - 1));
    grid.insert(grid.end(), kPaperTaus.begin(), kPaperTaus.end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto rows = fig4_sweep(targets, grid, v, tol);
  const auto dir = ensure_out_dir(args.out);
  write_file((dir / "sweep.csv").string(), sweep_to_csv(rows));
  std::cout << "wrote " << rows.size() << " rows to "
            << (dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"superchan: superchannel simulation and reconstruction"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto *simulate = app.add_subcommand("simulate", "simulate a tomography run");
  simulate->add_option("--config", sim.config, "JSON config file");
  simulate->add_option("--tau", sim.tau, "correlation strength in [0,1]");
  simulate->add_option("--theta", sim.theta, "SE state angle");
  simulate->add_option("--v", sim.v, "state purity weight in [0,1]");
  simulate->add_option("--target", sim.target, "interaction target")
      ->check(CLI::IsMember({"Z", "H", "RYZ"}));
  simulate->add_option("--n0", sim.n0, "trials per configuration");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_flag("--exact", sim.exact, "store exact N0*p instead of sampling");
  simulate->add_option("--out", sim.out, "output directory");

  ReconstructArgs rec;
  auto *reconstruct =
      app.add_subcommand("reconstruct", "reconstruct a superchannel from counts");
  reconstruct->add_option("--config", rec.config, "JSON config file");
  reconstruct->add_option("--data", rec.data, "counts CSV/JSON or probabilities CSV")
      ->required();
  reconstruct->add_option("--method", rec.method, "linear or mle")
      ->check(CLI::IsMember({"linear", "mle"}));
  reconstruct->add_option("--beta", rec.beta, "hedging parameter");
  reconstruct->add_option("--tol", rec.tol, "MLE certificate tolerance");
  reconstruct->add_option("--weights", rec.weight_mode, "binomial or uniform")
      ->check(CLI::IsMember({"binomial", "uniform"}));
  reconstruct->add_option("--truth", rec.truth,
                          "true superchannel JSON for error reporting");
  reconstruct->add_option("--out", rec.out, "output directory");

  AnalyzeArgs ana;
  auto *analyze = app.add_subcommand("analyze", "correlation and fidelity report");
  analyze->add_option("--config", ana.config, "JSON config file");
  analyze->add_option("--superchannel", ana.superchannel_path,
                      "superchannel JSON")
      ->required();
  analyze->add_option("--target", ana.target, "fidelity target gate")
      ->check(CLI::IsMember({"Z", "H", "RYZ"}));
  analyze->add_option("--tol", ana.tol, "diamond-norm certificate tolerance");
  analyze->add_flag("--print-pauli", ana.print_pauli,
                    "print the matrix in the polarization-Pauli basis");
  analyze->add_option("--out", ana.out, "output directory");

  SweepArgs swp;
  auto *sweep = app.add_subcommand("sweep", "ideal IC-norm curve over tau");
  sweep->add_option("--config", swp.config, "JSON config file");
  sweep->add_option("--targets", swp.targets, "interaction targets")
      ->delimiter(',');
  sweep->add_option("--tau", swp.taus, "explicit tau grid points");
  sweep->add_option("--points", swp.points, "grid size (default 20)");
  sweep->add_option("--v", swp.v, "state purity weight");
  sweep->add_option("--tol", swp.tol, "diamond-norm tolerance");
  sweep->add_option("--out", swp.out, "output directory");

  try {
    app.parse(argc, argv);
    if (simulate->parsed())
      return cmd_simulate(sim);
    if (reconstruct->parsed())
      return cmd_reconstruct(rec);
    if (analyze->parsed())
      return cmd_analyze(ana);
    if (sweep->parsed())
      return cmd_sweep(swp);
    return kExitConfig;
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const solver_error &e) {
    std::cerr << "solver failure: " << e.what()
              << " (achieved " << e.achieved_residual << ")\n";
    return kExitSolver;
  } catch (const data_error &e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
