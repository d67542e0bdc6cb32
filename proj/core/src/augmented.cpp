#include "glse/augmented.hpp"

#include <cmath>
#include <stdexcept>

namespace glse {

double Spd2::min_eig() const {
  const double mean = 0.5 * (a11 + a22);
  const double disc = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
  return mean - disc;
}

Aug2 augment(cplx c) { return {c.real(), c.imag()}; }

cplx de_augment(Aug2 a) { return {a.re, a.im}; }

Mat2 channel_block(cplx h) {
  return {h.real(), -h.imag(), h.imag(), h.real()};
}

double quad_form(Aug2 x, const Spd2& R) {
  const double det = R.det();
  if (!(det > 0.0) || !(R.trace() > 0.0)) {
    throw std::domain_error("quad_form: matrix is not positive definite");
  }
  // x^T R^{-1} x via the adjugate, without forming the inverse.
  const double quad = R.a22 * x.re * x.re - 2.0 * R.a12 * x.re * x.im + R.a11 * x.im * x.im;
  return 0.5 * quad / det;
}

Spd2 spd2_inverse(const Spd2& R, double det_floor) {
  const double det = R.det();
  if (!(det > det_floor)) {
    throw std::domain_error("spd2_inverse: near-singular matrix");
  }
  return {R.a22 / det, -R.a12 / det, R.a11 / det};
}

Spd2 make_spd(const Mat2& R, double sym_tol, double eig_floor) {
  const double scale = std::max({std::abs(R.a11), std::abs(R.a12), std::abs(R.a21),
                                 std::abs(R.a22), 1.0});
  if (std::abs(R.a12 - R.a21) > sym_tol * scale) {
    throw std::domain_error("make_spd: matrix is not symmetric");
  }
  Spd2 s{R.a11, 0.5 * (R.a12 + R.a21), R.a22};
  if (!(s.min_eig() > eig_floor)) {
    throw std::domain_error("make_spd: matrix is not positive definite");
  }
  return s;
}

namespace {

Spd2 clamp_eigs(Spd2 s, double floor) {
  const double mean = 0.5 * (s.a11 + s.a22);
  const double d = 0.5 * (s.a11 - s.a22);
  const double disc = std::sqrt(d * d + s.a12 * s.a12);
  const double lo = mean - disc;
  const double hi = mean + disc;
  if (lo > floor) {
    return s;
  }
  // Reconstruct from the (clamped) spectral decomposition.
  const double lo_c = floor;
  const double hi_c = std::max(hi, floor);
  if (disc == 0.0) {
    return Spd2::identity(lo_c);
  }
  // Unit eigenvector for the larger eigenvalue.
  double vx, vy;
  if (d >= 0.0) {
    vx = disc + d;
    vy = s.a12;
  } else {
    vx = s.a12;
    vy = disc - d;
  }
  const double n = std::hypot(vx, vy);
  if (n == 0.0) {
    return Spd2::identity(lo_c);
  }
  vx /= n;
  vy /= n;
  return {hi_c * vx * vx + lo_c * vy * vy, (hi_c - lo_c) * vx * vy,
          hi_c * vy * vy + lo_c * vx * vx};
}

}  // namespace

Spd2 clamp_spd(const Mat2& R, double floor) {
  return clamp_eigs(Spd2{R.a11, 0.5 * (R.a12 + R.a21), R.a22}, floor);
}

Spd2 clamp_spd(const Spd2& R, double floor) { return clamp_eigs(R, floor); }

Spd2 channel_sandwich(cplx h, const Spd2& s) {
  const double h2 = std::norm(h);
  const double t = 0.5 * (s.a11 + s.a22) * h2;
  const cplx tau{0.5 * (s.a11 - s.a22), s.a12};
  const cplx rot = h * h * tau;
  return {t + rot.real(), rot.imag(), t - rot.real()};
}

}  // namespace glse
