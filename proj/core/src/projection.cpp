#include "glse/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace glse {

double amplitude_objective(double a, double target, double theta, const RfModel& rf) {
  const double d = target - rf.amp_conv(a);
  return d * d + theta * a * a;
}

namespace {

struct Candidate {
  double objective;
  double amplitude;
};

/// Golden-section minimization of J on [lo, hi] down to width tol.
Candidate golden_refine(double lo, double hi, double tol, double target, double theta,
                        const RfModel& rf) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = amplitude_objective(c, target, theta, rf);
  double fd = amplitude_objective(d, target, theta, rf);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = amplitude_objective(c, target, theta, rf);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = amplitude_objective(d, target, theta, rf);
    }
  }
  const double a = 0.5 * (lo + hi);
  return {amplitude_objective(a, target, theta, rf), a};
}

/// All local minima of J on [0, a_hi] from a uniform scan, each refined.
std::vector<Candidate> scan_minima(double a_hi, int n, double target, double theta,
                                   const RfModel& rf, double tol) {
  std::vector<double> vals(static_cast<std::size_t>(n));
  const double dx = a_hi / (n - 1);
  for (int i = 0; i < n; ++i) {
    vals[static_cast<std::size_t>(i)] = amplitude_objective(i * dx, target, theta, rf);
  }
  std::vector<Candidate> out;
  for (int i = 0; i < n; ++i) {
    const bool left_ok = (i == 0) || vals[i] <= vals[i - 1];
    const bool right_ok = (i == n - 1) || vals[i] <= vals[i + 1];
    if (left_ok && right_ok) {
      const double lo = (i == 0) ? 0.0 : (i - 1) * dx;
      const double hi = (i == n - 1) ? a_hi : (i + 1) * dx;
      out.push_back(golden_refine(lo, hi, tol, target, theta, rf));
    }
  }
  return out;
}

}  // namespace

std::complex<double> project_symbol(std::complex<double> w, const RfModel& rf,
                                    const ProjectionConfig& cfg) {
  const double target = std::abs(w);
  if (target == 0.0) {
    return {0.0, 0.0};
  }
  if (cfg.grid_points < 64) {
    throw std::invalid_argument("project_symbol: grid_points must be >= 64");
  }
  const double a_peak = rf.saturation_peak().amplitude;
  const double theta = cfg.theta;

  double a_hi = cfg.a_max > 0.0 ? cfg.a_max : 4.0 * a_peak;
  int n = cfg.grid_points;
  auto cands = scan_minima(a_hi, n, target, theta, rf, cfg.refine_tol);
  auto best_of = [](const std::vector<Candidate>& cs) {
    double b = cs.front().objective;
    for (const auto& c : cs) b = std::min(b, c.objective);
    return b;
  };
  if (cfg.a_max <= 0.0) {
    if (theta > 0.0) {
      // Expand until the penalty alone beyond a_hi exceeds the best value
      // found, which guarantees the global minimizer is inside the scan.
      while (theta * a_hi * a_hi <= best_of(cands)) {
        a_hi *= 2.0;
        n *= 2;
        cands = scan_minima(a_hi, n, target, theta, rf, cfg.refine_tol);
      }
    } else {
      a_hi = 16.0 * a_peak;
      n = 4 * cfg.grid_points;
      cands = scan_minima(a_hi, n, target, theta, rf, cfg.refine_tol);
    }
  }

  // Smallest amplitude among ties at the global minimum.
  const double j_min = best_of(cands);
  double a_star = a_hi;
  for (const auto& c : cands) {
    if (c.objective <= j_min + cfg.refine_tol && c.amplitude < a_star) {
      a_star = c.amplitude;
    }
  }
  const double phase = std::arg(w) - rf.phase_conv(a_star);
  return {a_star * std::cos(phase), a_star * std::sin(phase)};
}

Eigen::VectorXcd project_signal(const Eigen::VectorXcd& w, const RfModel& rf,
                                const ProjectionConfig& cfg) {
  Eigen::VectorXcd x(w.size());
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    x(m) = project_symbol(w(m), rf, cfg);
  }
  return x;
}

}  // namespace glse
