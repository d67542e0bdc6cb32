#include "glse/reference_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace glse {

namespace {

/// Largest squared singular value of H by power iteration on H^T conj(H).
double sigma_max_sq(const Eigen::MatrixXcd& H) {
  const Eigen::Index K = H.cols();
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(K) / std::sqrt(static_cast<double>(K));
  double value = 0.0;
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXcd y = H.transpose() * (H.conjugate() * x);
    const double n = y.norm();
    if (n == 0.0) {
      return 0.0;
    }
    y /= n;
    const double prev = value;
    value = n;
    x = y;
    if (i > 10 && std::abs(value - prev) <= 1e-12 * value) {
      break;
    }
  }
  return value;
}

void project_disc(Eigen::VectorXcd& v, double p_out) {
  if (!std::isfinite(p_out)) {
    return;
  }
  const double r = std::sqrt(p_out);
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    const double a = std::abs(v(m));
    if (a > r) {
      v(m) *= r / a;
    }
  }
}

}  // namespace

double glse_objective(const Eigen::VectorXcd& v, const GlseProblem& problem) {
  const Eigen::VectorXcd r = problem.H.transpose() * v - std::sqrt(problem.rho) * problem.s;
  return r.squaredNorm() + problem.lambda * v.squaredNorm();
}

SolveResult solve_glse_direct(const GlseProblem& problem, const SolverOptions& options) {
  const Eigen::Index M = problem.H.rows();
  if (problem.s.size() != problem.H.cols()) {
    throw std::invalid_argument("solve_glse_direct: inconsistent dimensions");
  }
  const Eigen::MatrixXcd Hc = problem.H.conjugate();
  const Eigen::VectorXcd b = std::sqrt(problem.rho) * problem.s;
  const double lip = 2.0 * 1.05 * sigma_max_sq(problem.H) + 2.0 * problem.lambda;
  const double step = 1.0 / lip;

  auto gradient = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return 2.0 * (Hc * (problem.H.transpose() * v - b) + problem.lambda * v);
  };

  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(M);
  Eigen::VectorXcd y = w;
  double fw = glse_objective(w, problem);
  double tk = 1.0;

  // Stopping level for the gradient mapping, anchored at the initial scale.
  const double g0 = gradient(w).norm();
  const double eps_g = options.rel_tol * (g0 + 1.0);

  SolveResult result;
  int it = 0;
  for (; it < options.max_iters; ++it) {
    Eigen::VectorXcd wn = y - step * gradient(y);
    project_disc(wn, problem.p_out);
    double fn = glse_objective(wn, problem);
    if (options.acceleration && fn > fw) {
      // Momentum overshot; restart from the last good iterate.
      y = w;
      tk = 1.0;
      wn = y - step * gradient(y);
      project_disc(wn, problem.p_out);
      fn = glse_objective(wn, problem);
    }
    const double gmap = (y - wn).norm() / step;
    if (options.acceleration) {
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      y = wn + ((tk - 1.0) / tn) * (wn - w);
      tk = tn;
    } else {
      y = wn;
    }
    w = wn;
    fw = fn;
    if (gmap <= eps_g) {
      ++it;
      break;
    }
  }

  // Polish with plain projected-gradient steps until the mapping is small at
  // w itself (the loop above tests it at the extrapolated point).
  for (; it < options.max_iters; ++it) {
    Eigen::VectorXcd wn = w - step * gradient(w);
    project_disc(wn, problem.p_out);
    const double gmap = (w - wn).norm() / step;
    w = wn;
    fw = glse_objective(w, problem);
    if (gmap <= eps_g) {
      ++it;
      result.converged = true;
      break;
    }
  }

  result.w = w;
  result.objective = fw;
  result.iterations = it;
  return result;
}

double kkt_residual(const Eigen::VectorXcd& w, const GlseProblem& problem) {
  const double lip = 2.0 * 1.05 * sigma_max_sq(problem.H) + 2.0 * problem.lambda;
  const double step = 1.0 / lip;
  const Eigen::MatrixXcd Hc = problem.H.conjugate();
  const Eigen::VectorXcd b = std::sqrt(problem.rho) * problem.s;
  Eigen::VectorXcd g = 2.0 * (Hc * (problem.H.transpose() * w - b) + problem.lambda * w);
  Eigen::VectorXcd wn = w - step * g;
  project_disc(wn, problem.p_out);
  return (w - wn).norm() / step;
}

}  // namespace glse
