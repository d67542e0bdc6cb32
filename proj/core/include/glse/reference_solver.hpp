#pragma once

#include <Eigen/Dense>

#include "glse/glse_amp.hpp"

namespace glse {

struct SolverOptions {
  int max_iters = 50000;
  double rel_tol = 1e-10;     // scales the projected-gradient stopping level
  bool acceleration = true;   // Nesterov momentum with restart on increase
};

/// || H^T v - sqrt(rho) s ||^2 + lambda ||v||^2.
double glse_objective(const Eigen::VectorXcd& v, const GlseProblem& problem);

struct SolveResult {
  Eigen::VectorXcd w;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Convex reference: projected gradient on the disc-constrained problem with
/// fixed step 1 / (2 sigma_max(H)^2 + 2 lambda), sigma_max from power
/// iteration with a 1.05 safety margin. Accelerated variant restarts whenever
/// the objective increases.
SolveResult solve_glse_direct(const GlseProblem& problem, const SolverOptions& options = {});

/// Norm of the projected-gradient mapping at w; ~0 certifies optimality.
double kkt_residual(const Eigen::VectorXcd& w, const GlseProblem& problem);

}  // namespace glse
