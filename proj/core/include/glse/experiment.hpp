#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glse/baselines.hpp"
#include "glse/glse_amp.hpp"
#include "glse/projection.hpp"
#include "glse/reference_solver.hpp"
#include "glse/rf_model.hpp"

namespace glse {

struct ExperimentConfig {
  int M = 64;
  std::vector<double> xi_list{1.0, 1.4, 1.8, 2.2, 2.6, 3.0};
  double rho = 1.0;
  double papr_target_db = 5.0;
  SalehParams saleh{};
  double p_out = 1.0;
  double epsilon = 0.05;
  double theta = 0.05;  // defaults to epsilon when absent from the file
  int realizations = 200;
  std::uint64_t master_seed = 1;
  std::vector<std::string> methods{"amp", "direct", "rzf"};
  AmpOptions amp{};
  SolverOptions solver{};
  double rzf_delta = 1.0;
  int grid_points = 1024;
  int threads = 0;  // 0 = hardware concurrency

  /// Antennas per user xi maps to K = floor(M / xi) users.
  int users_for(double xi) const;
};

/// Parses the JSON config; unknown keys are rejected, missing keys keep
/// defaults, and theta falls back to epsilon.
ExperimentConfig load_config(const std::filesystem::path& file);
std::string config_to_json(const ExperimentConfig& config);

/// M x K entries i.i.d. CN(0, 1/M); bit-reproducible for a given seed.
Eigen::MatrixXcd generate_channel(int M, int K, std::uint64_t seed);

/// K i.i.d. CN(0, 1) data symbols.
Eigen::VectorXcd generate_symbols(int K, std::uint64_t seed);

struct SweepRow {
  double xi = 0.0;
  int K = 0;
  std::string method;
  std::uint64_t seed = 0;   // child seed of the realization
  bool is_mean = false;     // aggregate row (seed column prints "mean")
  double d_db = 0.0;
  double d_tilde_db = 0.0;
  double papr_db = 0.0;
  double tuning_param = 0.0;
  double iterations = 0.0;
  int diverged = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // realization rows, then per-(xi, method) means
  ExperimentConfig config;
};

/// Monte-Carlo driver: per load point draws shared (H, s) realizations,
/// tunes the GLSE penalty (and the RZF scale) against the configured PAPR
/// target at the ensemble level, runs the requested precoders, projects
/// through the amplifier, and aggregates linear-domain means.
SweepResult run_sweep(const ExperimentConfig& config);

struct OutputPaths {
  std::filesystem::path csv;
  std::filesystem::path plot_data;
  std::filesystem::path manifest;
};

/// Writes the CSV table, the per-method plot blocks, and the run manifest.
/// Throws std::runtime_error naming the path on I/O failure.
OutputPaths emit_outputs(const SweepResult& result, const std::filesystem::path& out_dir);

std::string sweep_to_csv(const SweepResult& result);

}  // namespace glse
