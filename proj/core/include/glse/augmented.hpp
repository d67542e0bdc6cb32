#pragma once

#include <complex>

namespace glse {

using cplx = std::complex<double>;

/// Augmented 2-vector [Re z, Im z] of a complex scalar.
struct Aug2 {
  double re = 0.0;
  double im = 0.0;

  friend Aug2 operator+(Aug2 a, Aug2 b) { return {a.re + b.re, a.im + b.im}; }
  friend Aug2 operator-(Aug2 a, Aug2 b) { return {a.re - b.re, a.im - b.im}; }
  friend Aug2 operator*(double c, Aug2 a) { return {c * a.re, c * a.im}; }
  double norm2() const { return re * re + im * im; }
};

/// General real 2x2 matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  Aug2 apply(Aug2 x) const { return {a11 * x.re + a12 * x.im, a21 * x.re + a22 * x.im}; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }

  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
  }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
};

/// Symmetric positive-definite 2x2 matrix; the off-diagonal is stored once.
struct Spd2 {
  double a11 = 1.0, a12 = 0.0, a22 = 1.0;

  Mat2 as_mat2() const { return {a11, a12, a12, a22}; }
  Aug2 apply(Aug2 x) const { return {a11 * x.re + a12 * x.im, a12 * x.re + a22 * x.im}; }
  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a12; }
  double min_eig() const;

  friend Spd2 operator+(const Spd2& a, const Spd2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a22 + b.a22};
  }
  friend Spd2 operator*(double c, const Spd2& a) { return {c * a.a11, c * a.a12, c * a.a22}; }

  static Spd2 identity(double scale = 1.0) { return {scale, 0.0, scale}; }
};

Aug2 augment(cplx c);
cplx de_augment(Aug2 a);

/// Real 2x2 block representing multiplication by the complex scalar h:
/// channel_block(h) * augment(x) == augment(h * x).
Mat2 channel_block(cplx h);

/// q(x, R) = x^T R^{-1} x / 2. Throws std::domain_error for non-SPD R.
double quad_form(Aug2 x, const Spd2& R);

/// Inverse of an SPD 2x2 via the adjugate. Throws std::domain_error when the
/// determinant falls below `det_floor` (caller is expected to jitter-clamp).
Spd2 spd2_inverse(const Spd2& R, double det_floor = 1e-24);

/// Validating conversion: symmetric to `sym_tol`, eigenvalues > `eig_floor`.
/// Symmetrizes as (R + R^T)/2. Throws std::domain_error otherwise.
Spd2 make_spd(const Mat2& R, double sym_tol = 1e-10, double eig_floor = 1e-12);

/// Non-throwing conversion used inside iterative updates: symmetrizes and
/// clamps eigenvalues from below to `floor`.
Spd2 clamp_spd(const Mat2& R, double floor);
Spd2 clamp_spd(const Spd2& R, double floor);

/// Congruence Q S Q^T with Q = channel_block(h) and symmetric S.
/// The trace part scales by |h|^2 and the traceless part rotates by h^2.
Spd2 channel_sandwich(cplx h, const Spd2& s);

}  // namespace glse
