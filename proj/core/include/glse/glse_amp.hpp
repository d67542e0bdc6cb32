#pragma once

#include <Eigen/Dense>
#include <vector>

#include "glse/augmented.hpp"

namespace glse {

/// One precoding instance: min over the disc support of
///   || H^T v - sqrt(rho) s ||^2 + lambda ||v||^2,   |v_m| <= sqrt(p_out).
struct GlseProblem {
  Eigen::MatrixXcd H;  // M x K uplink channel, columns h_k
  Eigen::VectorXcd s;  // K data symbols
  double rho = 1.0;
  double lambda = 0.1;
  double p_out = 1.0;  // squared support radius; may be +infinity
};

struct AmpOptions {
  int max_iters = 100;
  double damping = 0.7;     // applied to the A8 symbol update only
  double stop_tol = 1e-8;   // relative change of w between iterations
  double jitter = 1e-10;    // SPD eigenvalue floor for the R matrices
};

/// Message-passing state; sized M antennas by K users.
struct AmpState {
  std::vector<Aug2> w;    // per-antenna RF symbols
  std::vector<Spd2> r_w;  // per-antenna R^w
  std::vector<Aug2> y;    // per-user output messages
  std::vector<Spd2> r_y;  // per-user R^y
  std::vector<Aug2> v;    // per-user means
  std::vector<Spd2> r_v;  // per-user R^v
  int iter = 0;
};

/// Output thresholder: with z* minimizing q(z - v, R) + ||z - sqrt(rho) s||^2,
/// returns R^{-1}(z* - v) = 2 (I + 2R)^{-1} (sqrt(rho) s - v). The sign is the
/// gradient of the negated minimum, which keeps -grad_v g_out positive
/// definite as required by the A6 inversion.
Aug2 g_out(Aug2 v, Aug2 s, const Spd2& R, double rho);

/// -grad_v g_out = 2 (I + 2R)^{-1}; independent of v and s.
Spd2 g_out_jacobian(Aug2 v, Aug2 s, const Spd2& R, double rho);

/// Input thresholder: minimizer of q(u - w, R) + lambda ||w||^2 over the disc
/// ||w|| <= sqrt(p_out). Interior solution (I + 2 lambda R)^{-1} u; otherwise
/// the unique KKT point on the boundary, found by bisection on the
/// multiplier (the norm is strictly decreasing in it).
Aug2 g_in(Aug2 u, const Spd2& R, double lambda, double p_out);

/// grad_u g_in: analytic (I + 2 lambda R)^{-1} on the interior, a central
/// finite-difference Jacobian on the boundary.
Mat2 g_in_jacobian(Aug2 u, const Spd2& R, double lambda, double p_out);

/// Executes one full A1..A9 pass in place and advances state.iter.
void amp_step(AmpState& state, const GlseProblem& problem, const AmpOptions& options);

struct AmpResult {
  Eigen::VectorXcd w;
  std::vector<double> objective_trace;  // GLSE objective per iteration
  int iterations = 0;
  bool diverged = false;
};

/// Runs the message-passing precoder from the penalty-minimizing start
/// (w = 0, R^w = I / (2 lambda)) until the iterate stabilizes or max_iters.
/// Returns the best iterate seen; every entry satisfies |w_m|^2 <= p_out.
AmpResult amp_precode(const GlseProblem& problem, const AmpOptions& options = {});

}  // namespace glse
