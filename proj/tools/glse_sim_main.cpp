// Command line front-end for the distortion-aware precoding simulator.
//
//   glse-sim run --config cfg.json --out-dir results/
//   glse-sim project --w-re 0.5 --w-im 0.2 --theta 0.05
//   glse-sim papr-tune --xi 1.8 --target-db 5

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "glse/experiment.hpp"
#include "glse/projection.hpp"
#include "glse/rng.hpp"
#include "glse/version.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<std::string> methods,
            std::optional<int> realizations, std::optional<int> threads, bool quiet) {
  glse::ExperimentConfig cfg =
      config_path.empty() ? glse::ExperimentConfig{} : glse::load_config(config_path);
  if (seed) cfg.master_seed = *seed;
  if (realizations) cfg.realizations = *realizations;
  if (threads) cfg.threads = *threads;
  if (methods) {
    cfg.methods.clear();
    std::string item;
    std::stringstream ss(*methods);
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) cfg.methods.push_back(item);
    }
  }

  const glse::SweepResult result = glse::run_sweep(cfg);
  const glse::OutputPaths paths = glse::emit_outputs(result, out_dir);
  if (!quiet) {
    for (const glse::SweepRow& row : result.rows) {
      if (!row.is_mean) continue;
      std::printf("xi=%-4g K=%-3d %-7s D=%8.3f dB  Dt=%8.3f dB  papr=%6.2f dB  tune=%g\n",
                  row.xi, row.K, row.method.c_str(), row.d_db, row.d_tilde_db, row.papr_db,
                  row.tuning_param);
    }
    std::printf("wrote %s\n", paths.csv.string().c_str());
    std::printf("wrote %s\n", paths.plot_data.string().c_str());
    std::printf("wrote %s\n", paths.manifest.string().c_str());
  }
  return 0;
}

int cmd_project(double w_re, double w_im, double theta) {
  const glse::ExperimentConfig defaults;
  const glse::RfModel rf(defaults.saleh, defaults.p_out, defaults.epsilon);
  glse::ProjectionConfig cfg;
  cfg.theta = theta;
  const std::complex<double> w{w_re, w_im};
  const std::complex<double> x = glse::project_symbol(w, rf, cfg);
  const std::complex<double> wt = rf.rf_convert(x);
  std::printf("w        = %+.12g %+.12gj  (|w| = %.12g)\n", w.real(), w.imag(), std::abs(w));
  std::printf("x        = %+.12g %+.12gj  (|x| = %.12g)\n", x.real(), x.imag(), std::abs(x));
  std::printf("f_RF(x)  = %+.12g %+.12gj  (residual = %.3e)\n", wt.real(), wt.imag(),
              std::abs(w - wt));
  return 0;
}

int cmd_papr_tune(double xi, double target_db, std::uint64_t seed, int realizations,
                  int threads) {
  glse::ExperimentConfig cfg;
  cfg.master_seed = seed;
  const int K = cfg.users_for(xi);
  std::vector<glse::GlseProblem> problems(static_cast<std::size_t>(realizations));
  const std::uint64_t xi_seed = glse::Rng::derive(cfg.master_seed, 1);
  for (int r = 0; r < realizations; ++r) {
    const std::uint64_t child = glse::Rng::derive(xi_seed, static_cast<std::uint64_t>(r) + 1);
    glse::GlseProblem p;
    p.H = glse::generate_channel(cfg.M, K, glse::Rng::derive(child, 0xA));
    p.s = glse::generate_symbols(K, glse::Rng::derive(child, 0xB));
    p.rho = cfg.rho;
    p.p_out = cfg.p_out;
    problems[static_cast<std::size_t>(r)] = std::move(p);
  }
  glse::LambdaTuneOptions opt;
  opt.probe = glse::LambdaTuneOptions::Probe::direct;
  opt.threads = threads;
  const glse::TuneResult t = glse::tune_lambda_for_papr(
      std::span<const glse::GlseProblem>(problems), target_db, opt);
  std::printf("xi=%g K=%d realizations=%d\n", xi, K, realizations);
  std::printf("lambda      = %.10g\n", t.value);
  std::printf("achieved    = %.4f dB (target %.4f dB)\n", t.achieved_db, target_db);
  std::printf("evaluations = %d\n", t.evaluations);
  std::printf("feasible    = %s\n", t.feasible ? "yes" : "no");
  return t.feasible ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distortion-aware RLS precoding simulator"};
  app.set_version_flag("--version", std::string(glse::kVersion));
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run the Monte-Carlo load sweep");
  std::string config_path;
  std::string out_dir = "results";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> methods;
  std::optional<int> realizations;
  std::optional<int> threads;
  bool quiet = false;
  run->add_option("--config", config_path, "JSON config file (defaults used when omitted)");
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override master seed");
  run->add_option("--methods", methods, "Comma-separated subset of amp,direct,rzf");
  run->add_option("--realizations", realizations, "Override realization count");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run->add_flag("--quiet", quiet, "Suppress progress output");

  // project
  auto* project = app.add_subcommand("project", "Project one RF symbol onto the input support");
  double w_re = 0.0, w_im = 0.0, theta = 0.05;
  project->add_option("--w-re", w_re, "Real part of the RF symbol")->required();
  project->add_option("--w-im", w_im, "Imaginary part of the RF symbol")->required();
  project->add_option("--theta", theta, "Regularization weight");

  // papr-tune
  auto* tune = app.add_subcommand("papr-tune", "Probe the penalty tuner at one load point");
  double xi = 1.0, target_db = 5.0;
  std::uint64_t tune_seed = 1;
  int tune_realizations = 16;
  int tune_threads = 0;
  tune->add_option("--xi", xi, "Antennas per user")->required();
  tune->add_option("--target-db", target_db, "PAPR target in dB")->required();
  tune->add_option("--seed", tune_seed, "Master seed");
  tune->add_option("--realizations", tune_realizations, "Ensemble size for tuning");
  tune->add_option("--threads", tune_threads, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, out_dir, seed, methods, realizations, threads, quiet);
    }
    if (project->parsed()) {
      return cmd_project(w_re, w_im, theta);
    }
    if (tune->parsed()) {
      return cmd_papr_tune(xi, target_db, tune_seed, tune_realizations, tune_threads);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
