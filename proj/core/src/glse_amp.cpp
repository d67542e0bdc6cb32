#include "glse/glse_amp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace glse {

namespace {

void require_spd(const Spd2& R, const char* who) {
  if (!(R.det() > 0.0) || !(R.trace() > 0.0)) {
    throw std::domain_error(std::string(who) + ": R is not positive definite");
  }
}

/// Solve (I + c R) x = b for SPD R and c >= 0.
Aug2 solve_shifted(const Spd2& R, double c, Aug2 b) {
  const double m11 = 1.0 + c * R.a11;
  const double m12 = c * R.a12;
  const double m22 = 1.0 + c * R.a22;
  const double det = m11 * m22 - m12 * m12;
  return {(m22 * b.re - m12 * b.im) / det, (m11 * b.im - m12 * b.re) / det};
}

/// (I + c R)^{-1} for SPD R, c >= 0; SPD because it shares eigenvectors with R.
Spd2 inverse_shifted(const Spd2& R, double c) {
  const double m11 = 1.0 + c * R.a11;
  const double m12 = c * R.a12;
  const double m22 = 1.0 + c * R.a22;
  const double det = m11 * m22 - m12 * m12;
  return {m22 / det, -m12 / det, m11 / det};
}

}  // namespace

Aug2 g_out(Aug2 v, Aug2 s, const Spd2& R, double rho) {
  require_spd(R, "g_out");
  const double sr = std::sqrt(rho);
  const Aug2 rhs{2.0 * (sr * s.re - v.re), 2.0 * (sr * s.im - v.im)};
  return solve_shifted(R, 2.0, rhs);
}

Spd2 g_out_jacobian(Aug2 /*v*/, Aug2 /*s*/, const Spd2& R, double /*rho*/) {
  require_spd(R, "g_out_jacobian");
  return 2.0 * inverse_shifted(R, 2.0);
}

Aug2 g_in(Aug2 u, const Spd2& R, double lambda, double p_out) {
  require_spd(R, "g_in");
  if (lambda < 0.0) {
    throw std::domain_error("g_in: lambda must be non-negative");
  }
  const Aug2 w0 = solve_shifted(R, 2.0 * lambda, u);
  if (!(std::isfinite(p_out)) || w0.norm2() <= p_out) {
    return w0;
  }
  // Boundary case: ||w(mu)||^2 = p_out with w(mu) = (I + 2(lambda+mu)R)^{-1} u.
  // The norm decreases strictly in mu, so expand then bisect.
  auto norm2_at = [&](double mu) {
    return solve_shifted(R, 2.0 * (lambda + mu), u).norm2();
  };
  double lo = 0.0;
  double hi = 1.0;
  int guard = 0;
  while (norm2_at(hi) > p_out) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 600) {
      throw std::runtime_error("g_in: boundary bracket expansion failed");
    }
  }
  for (int i = 0; i < 120; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (norm2_at(mid) > p_out) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return solve_shifted(R, 2.0 * (lambda + 0.5 * (lo + hi)), u);
}

Mat2 g_in_jacobian(Aug2 u, const Spd2& R, double lambda, double p_out) {
  require_spd(R, "g_in_jacobian");
  const Aug2 w0 = solve_shifted(R, 2.0 * lambda, u);
  if (!(std::isfinite(p_out)) || w0.norm2() <= p_out) {
    const Spd2 j = inverse_shifted(R, 2.0 * lambda);
    return j.as_mat2();
  }
  const double h = 1e-6 * std::max(1.0, std::sqrt(u.norm2()));
  Mat2 jac;
  const Aug2 wp_re = g_in({u.re + h, u.im}, R, lambda, p_out);
  const Aug2 wm_re = g_in({u.re - h, u.im}, R, lambda, p_out);
  const Aug2 wp_im = g_in({u.re, u.im + h}, R, lambda, p_out);
  const Aug2 wm_im = g_in({u.re, u.im - h}, R, lambda, p_out);
  jac.a11 = (wp_re.re - wm_re.re) / (2.0 * h);
  jac.a21 = (wp_re.im - wm_re.im) / (2.0 * h);
  jac.a12 = (wp_im.re - wm_im.re) / (2.0 * h);
  jac.a22 = (wp_im.im - wm_im.im) / (2.0 * h);
  return jac;
}

void amp_step(AmpState& state, const GlseProblem& problem, const AmpOptions& options) {
  const Eigen::Index M = problem.H.rows();
  const Eigen::Index K = problem.H.cols();
  const double jitter = options.jitter;

  // A1 + A3 + A4 + A5, per user.
  for (Eigen::Index k = 0; k < K; ++k) {
    Mat2 acc{0.0, 0.0, 0.0, 0.0};
    Aug2 hv{0.0, 0.0};
    for (Eigen::Index m = 0; m < M; ++m) {
      const cplx h = problem.H(m, k);
      const Spd2 sw = channel_sandwich(h, state.r_w[m]);
      acc.a11 += sw.a11;
      acc.a12 += sw.a12;
      acc.a21 += sw.a12;
      acc.a22 += sw.a22;
      const cplx hw = h * de_augment(state.w[m]);
      hv.re += hw.real();
      hv.im += hw.imag();
    }
    const Spd2 r_v = clamp_spd(acc, jitter);
    const Aug2 y_prev = state.y[k];
    const Aug2 v{hv.re - (r_v.a11 * y_prev.re + r_v.a12 * y_prev.im),
                 hv.im - (r_v.a12 * y_prev.re + r_v.a22 * y_prev.im)};
    const Aug2 s_k = augment(problem.s(k));
    state.v[k] = v;
    state.r_v[k] = r_v;
    state.y[k] = g_out(v, s_k, r_v, problem.rho);
    state.r_y[k] = clamp_spd(g_out_jacobian(v, s_k, r_v, problem.rho), jitter);
  }

  // A6 + A7 + A8 + A9, per antenna.
  for (Eigen::Index m = 0; m < M; ++m) {
    Mat2 acc{0.0, 0.0, 0.0, 0.0};
    Aug2 hy{0.0, 0.0};
    for (Eigen::Index k = 0; k < K; ++k) {
      const cplx hc = std::conj(problem.H(m, k));
      const Spd2 sy = channel_sandwich(hc, state.r_y[k]);
      acc.a11 += sy.a11;
      acc.a12 += sy.a12;
      acc.a21 += sy.a12;
      acc.a22 += sy.a22;
      const cplx hyk = hc * de_augment(state.y[k]);
      hy.re += hyk.real();
      hy.im += hyk.imag();
    }
    const Spd2 sum = clamp_spd(acc, jitter);
    const Spd2 r_u = clamp_spd(spd2_inverse(sum, jitter * jitter), jitter);
    const Aug2 u = state.w[m] + r_u.apply(hy);
    const Aug2 gi = g_in(u, r_u, problem.lambda, problem.p_out);
    const double gd = options.damping;
    state.w[m] = (1.0 - gd) * state.w[m] + gd * gi;
    const Mat2 j = g_in_jacobian(u, r_u, problem.lambda, problem.p_out);
    state.r_w[m] = clamp_spd(j * r_u.as_mat2(), jitter);
  }
  ++state.iter;
}

namespace {

double objective_of(const Eigen::VectorXcd& w, const GlseProblem& p) {
  const Eigen::VectorXcd r = p.H.transpose() * w - std::sqrt(p.rho) * p.s;
  return r.squaredNorm() + p.lambda * w.squaredNorm();
}

Eigen::VectorXcd to_vector(const std::vector<Aug2>& w) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(w.size()));
  for (std::size_t m = 0; m < w.size(); ++m) {
    out(static_cast<Eigen::Index>(m)) = de_augment(w[m]);
  }
  return out;
}

}  // namespace

AmpResult amp_precode(const GlseProblem& problem, const AmpOptions& options) {
  const auto M = static_cast<std::size_t>(problem.H.rows());
  const auto K = static_cast<std::size_t>(problem.H.cols());
  if (M == 0 || K == 0 || problem.s.size() != problem.H.cols()) {
    throw std::invalid_argument("amp_precode: inconsistent problem dimensions");
  }
  if (problem.lambda < 0.0) {
    throw std::invalid_argument("amp_precode: lambda must be non-negative");
  }

  AmpState state;
  state.w.assign(M, Aug2{});
  // R^w(1) is the inverse Hessian of the augmented penalty lambda ||w||^2;
  // a large prior covariance stands in for the lambda = 0 limit.
  const double r0 = problem.lambda > 0.0 ? 1.0 / (2.0 * problem.lambda) : 100.0;
  state.r_w.assign(M, Spd2::identity(r0));
  state.y.assign(K, Aug2{});
  state.r_y.assign(K, Spd2::identity());
  state.v.assign(K, Aug2{});
  state.r_v.assign(K, Spd2::identity());

  AmpResult result;
  result.objective_trace.reserve(static_cast<std::size_t>(options.max_iters));

  Eigen::VectorXcd w_vec = to_vector(state.w);
  const double f0 = objective_of(w_vec, problem);
  double best_obj = f0;
  Eigen::VectorXcd best_w = w_vec;

  std::vector<Aug2> w_prev = state.w;
  for (int t = 0; t < options.max_iters; ++t) {
    amp_step(state, problem, options);
    w_vec = to_vector(state.w);
    const double f = objective_of(w_vec, problem);
    result.objective_trace.push_back(f);
    result.iterations = t + 1;
    if (f < best_obj) {
      best_obj = f;
      best_w = w_vec;
    }
    if (!std::isfinite(f) || f > 1e6 * std::max(f0, 1e-300)) {
      result.diverged = true;
      break;
    }
    double dw = 0.0;
    double nw = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      dw += (state.w[m] - w_prev[m]).norm2();
      nw += w_prev[m].norm2();
    }
    w_prev = state.w;
    if (std::sqrt(dw) < options.stop_tol * std::max(std::sqrt(nw), 1e-300)) {
      break;
    }
  }
  result.w = best_w;
  return result;
}

}  // namespace glse
