#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "glse/augmented.hpp"
#include "glse/rng.hpp"

using namespace glse;

TEST_SUITE_BEGIN("augmented");

TEST_CASE("augment round-trips complex scalars") {
  CHECK(augment({0.0, 0.0}).re == 0.0);
  CHECK(augment({0.0, 0.0}).im == 0.0);
  CHECK(augment({1.0, 2.0}).re == 1.0);
  CHECK(augment({1.0, 2.0}).im == 2.0);
  CHECK(augment({0.0, 1.0}).re == 0.0);
  CHECK(augment({0.0, 1.0}).im == 1.0);

  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const cplx c = rng.complex_gaussian(4.0);
    CHECK(de_augment(augment(c)) == c);
  }
}

TEST_CASE("channel_block basis cases") {
  const Mat2 id = channel_block({1.0, 0.0});
  CHECK(id.a11 == 1.0);
  CHECK(id.a12 == 0.0);
  CHECK(id.a21 == 0.0);
  CHECK(id.a22 == 1.0);

  const Mat2 rot = channel_block({0.0, 1.0});
  CHECK(rot.a11 == 0.0);
  CHECK(rot.a12 == -1.0);
  CHECK(rot.a21 == 1.0);
  CHECK(rot.a22 == 0.0);

  // (2+j)(1-j) = 3 - j
  const Aug2 prod = channel_block({2.0, 1.0}).apply(augment({1.0, -1.0}));
  CHECK(prod.re == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(prod.im == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("channel_block is the complex-multiplication homomorphism") {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const cplx h = rng.complex_gaussian(2.0);
    const cplx x = rng.complex_gaussian(2.0);
    const Aug2 lhs = channel_block(h).apply(augment(x));
    const cplx ref = h * x;
    CHECK(std::abs(lhs.re - ref.real()) <= 1e-12 * (1.0 + std::abs(ref)));
    CHECK(std::abs(lhs.im - ref.imag()) <= 1e-12 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("channel_block transpose times itself is |h|^2 I") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const cplx h = rng.complex_gaussian(2.0);
    const Mat2 q = channel_block(h);
    const Mat2 g = q.transpose() * q;
    const double h2 = std::norm(h);
    CHECK(g.a11 == doctest::Approx(h2).epsilon(1e-13));
    CHECK(g.a22 == doctest::Approx(h2).epsilon(1e-13));
    CHECK(std::abs(g.a12) <= 1e-13 * (1.0 + h2));
    CHECK(std::abs(g.a21) <= 1e-13 * (1.0 + h2));
  }
}

TEST_CASE("quad_form examples") {
  const Spd2 I = Spd2::identity();
  CHECK(quad_form({0.0, 0.0}, I) == 0.0);
  CHECK(quad_form({1.0, 0.0}, I) == doctest::Approx(0.5));
  // diag(2,4): (1/2 + 1/4) / 2
  CHECK(quad_form({1.0, 1.0}, Spd2{2.0, 0.0, 4.0}) == doctest::Approx(0.375));
}

TEST_CASE("quad_form positive for nonzero arguments over random SPD draws") {
  Rng rng(14);
  for (int i = 0; i < 500; ++i) {
    // Random SPD via A A^T + small ridge.
    const double a = rng.gaussian(), b = rng.gaussian(), c = rng.gaussian(), d = rng.gaussian();
    const Mat2 m{a, b, c, d};
    const Mat2 g = m * m.transpose();
    const Spd2 R{g.a11 + 0.01, 0.5 * (g.a12 + g.a21), g.a22 + 0.01};
    Aug2 x{rng.gaussian(), rng.gaussian()};
    if (x.re == 0.0 && x.im == 0.0) x.re = 1.0;
    CHECK(quad_form(x, R) > 0.0);
  }
}

TEST_CASE("quad_form rejects non-SPD matrices") {
  CHECK_THROWS_AS(quad_form({1.0, 0.0}, Spd2{1.0, 2.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(quad_form({1.0, 0.0}, Spd2{-1.0, 0.0, -1.0}), std::domain_error);
}

TEST_CASE("spd2_inverse examples") {
  const Spd2 I = Spd2::identity();
  const Spd2 invI = spd2_inverse(I);
  CHECK(invI.a11 == doctest::Approx(1.0));
  CHECK(invI.a22 == doctest::Approx(1.0));
  CHECK(invI.a12 == doctest::Approx(0.0));

  const Spd2 d = spd2_inverse(Spd2{2.0, 0.0, 4.0});
  CHECK(d.a11 == doctest::Approx(0.5));
  CHECK(d.a22 == doctest::Approx(0.25));

  // [[2,1],[1,2]]^{-1} = (1/3) [[2,-1],[-1,2]]
  const Spd2 m = spd2_inverse(Spd2{2.0, 1.0, 2.0});
  CHECK(m.a11 == doctest::Approx(2.0 / 3.0));
  CHECK(m.a12 == doctest::Approx(-1.0 / 3.0));
  CHECK(m.a22 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("spd2_inverse hits identity to 1e-12 on random draws") {
  Rng rng(15);
  for (int i = 0; i < 300; ++i) {
    const double a = rng.gaussian(), b = rng.gaussian(), d = rng.gaussian();
    const Spd2 R{a * a + 0.1, 0.0 + b * 0.1, d * d + 0.1};
    if (!(R.det() > 1e-6)) continue;
    const Spd2 Ri = spd2_inverse(R);
    const Mat2 prod = R.as_mat2() * Ri.as_mat2();
    CHECK(std::abs(prod.a11 - 1.0) <= 1e-12);
    CHECK(std::abs(prod.a22 - 1.0) <= 1e-12);
    CHECK(std::abs(prod.a12) <= 1e-12);
    CHECK(std::abs(prod.a21) <= 1e-12);
  }
}

TEST_CASE("spd2_inverse signals near-singular input") {
  CHECK_THROWS_AS(spd2_inverse(Spd2{1e-14, 0.0, 1e-14}, 1e-24), std::domain_error);
}

TEST_CASE("make_spd validates and clamp_spd repairs") {
  CHECK_THROWS_AS(make_spd(Mat2{1.0, 0.5, -0.5, 1.0}), std::domain_error);
  CHECK_THROWS_AS(make_spd(Mat2{1.0, 2.0, 2.0, 1.0}), std::domain_error);
  const Spd2 ok = make_spd(Mat2{2.0, 0.3, 0.3, 1.0});
  CHECK(ok.a12 == doctest::Approx(0.3));

  const Spd2 fixed = clamp_spd(Mat2{1.0, 2.0, 2.0, 1.0}, 1e-10);
  CHECK(fixed.min_eig() >= 1e-10 * (1.0 - 1e-9));
  // Clamping preserves an already-SPD matrix.
  const Spd2 same = clamp_spd(Spd2{2.0, 0.3, 1.0}, 1e-10);
  CHECK(same.a11 == 2.0);
  CHECK(same.a12 == 0.3);
  CHECK(same.a22 == 1.0);
}

TEST_CASE("channel_sandwich equals the naive triple product") {
  Rng rng(16);
  for (int i = 0; i < 500; ++i) {
    const cplx h = rng.complex_gaussian(2.0);
    const double a = rng.gaussian(), b = rng.gaussian(), d = rng.gaussian();
    const Spd2 S{a * a + 0.05, 0.3 * b, d * d + 0.05};
    const Spd2 fast = channel_sandwich(h, S);
    const Mat2 q = channel_block(h);
    const Mat2 ref = q * S.as_mat2() * q.transpose();
    const double scale = 1.0 + std::abs(ref.a11) + std::abs(ref.a22);
    CHECK(std::abs(fast.a11 - ref.a11) <= 1e-12 * scale);
    CHECK(std::abs(fast.a12 - ref.a12) <= 1e-12 * scale);
    CHECK(std::abs(fast.a22 - ref.a22) <= 1e-12 * scale);
    CHECK(std::abs(ref.a12 - ref.a21) <= 1e-12 * scale);
  }
}

TEST_SUITE_END();
