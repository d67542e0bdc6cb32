#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "glse/augmented.hpp"
#include "glse/rf_model.hpp"
#include "glse/rng.hpp"

using namespace glse;

namespace {

const SalehParams kFig1{2.0922, 1.2466, 0.0, 0.0};
const SalehParams kDefault{};  // 2.159 / 1.152 / 4.003 / 9.104

double db10(double x) { return 10.0 * std::log10(x); }

}  // namespace

TEST_SUITE_BEGIN("rf_model");

TEST_CASE("amp_conv zero and the two reference crossings") {
  const RfModel rf(kFig1, 1.0, 0.0, std::nullopt, 0.1);
  CHECK(rf.amp_conv(0.0) == 0.0);
  // Both amplitude-axis inputs -4.6 dB and 3.65 dB map to -2.0 dB output
  // (10 log10 convention on amplitudes).
  const double out1 = db10(rf.amp_conv(std::pow(10.0, -4.6 / 10.0)));
  const double out2 = db10(rf.amp_conv(std::pow(10.0, 3.65 / 10.0)));
  CHECK(out1 == doctest::Approx(-2.0).epsilon(0.025));
  CHECK(out2 == doctest::Approx(-2.0).epsilon(0.025));
  CHECK(std::abs(out1 + 2.0) <= 0.05);
  CHECK(std::abs(out2 + 2.0) <= 0.05);
  CHECK_THROWS_AS(rf.amp_conv(-0.1), std::domain_error);
}

TEST_CASE("phase_conv limits and direct evaluation") {
  const RfModel rf(kDefault, 1.0);
  CHECK(rf.phase_conv(0.0) == 0.0);
  // a = 1: 4.003 / (1 + 9.104)
  CHECK(rf.phase_conv(1.0) == doctest::Approx(4.003 / 10.104).epsilon(1e-12));
  // Asymptote alpha_phi / beta_phi from below.
  const double lim = kDefault.alpha_phi / kDefault.beta_phi;
  CHECK(rf.phase_conv(1e6) == doctest::Approx(lim).epsilon(1e-6));
  CHECK(rf.phase_conv(1e6) < lim);
  CHECK_THROWS_AS(rf.phase_conv(-1.0), std::domain_error);
}

TEST_CASE("saturation_peak formula and extremal property") {
  const RfModel simple(SalehParams{2.0, 1.0, 0.0, 0.0}, 1.0);
  const auto p = simple.saturation_peak();
  CHECK(p.amplitude == doctest::Approx(1.0));
  CHECK(p.value == doctest::Approx(1.0));

  const RfModel rf(kDefault, 1.0);
  const auto q = rf.saturation_peak();
  CHECK(q.amplitude == doctest::Approx(0.9317).epsilon(1e-4));
  CHECK(q.value == doctest::Approx(1.0058).epsilon(1e-4));

  // Strictly increasing before the peak, strictly decreasing after.
  double prev = 0.0;
  for (double a = 0.01; a < q.amplitude; a += 0.01) {
    const double v = rf.amp_conv(a);
    CHECK(v > prev);
    prev = v;
  }
  prev = q.value;
  for (double a = q.amplitude + 0.01; a < 5.0; a += 0.01) {
    const double v = rf.amp_conv(a);
    CHECK(v < prev);
    prev = v;
  }
  // Peak dominates everywhere.
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rf.amp_conv(10.0 * rng.uniform01()) <= q.value + 1e-15);
  }

  CHECK_THROWS_AS(RfModel(SalehParams{1.0, 0.0, 0.0, 0.0}, 1.0).saturation_peak(),
                  std::domain_error);
}

TEST_CASE("rf_convert structure") {
  const RfModel rf(kDefault, 1.0);
  CHECK(rf.rf_convert({0.0, 0.0}) == std::complex<double>(0.0, 0.0));

  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const cplx x = rng.complex_gaussian(1.0);
    const cplx w = rf.rf_convert(x);
    CHECK(std::abs(w) == doctest::Approx(rf.amp_conv(std::abs(x))).epsilon(1e-12));
    // Phase equivariance: rf(e^{j phi} x) = e^{j phi} rf(x).
    const double phi = 2.0 * 3.14159265358979 * rng.uniform01();
    const cplx rot{std::cos(phi), std::sin(phi)};
    CHECK(std::abs(rf.rf_convert(rot * x) - rot * w) <= 1e-12 * (1.0 + std::abs(w)));
    // Output power never exceeds the disc.
    CHECK(std::norm(w) <= rf.p_out() * (1.0 + 0.02) + 1e-12);
  }

  // Real positive input keeps arg(output) = phase_conv(x).
  const cplx wr = rf.rf_convert({0.5, 0.0});
  CHECK(std::arg(wr) == doctest::Approx(rf.phase_conv(0.5)).epsilon(1e-12));
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(RfModel(SalehParams{-1.0, 1.0, 0.0, 0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RfModel(kDefault, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(RfModel(kDefault, 1.0, -0.5), std::invalid_argument);
  // Peak value^2 = 1.0116 must fit into p_out (1 + tol).
  CHECK_THROWS_AS(RfModel(kDefault, 0.9), std::invalid_argument);
  CHECK_NOTHROW(RfModel(kDefault, 1.0, 0.0, std::nullopt, 0.02));
}

TEST_CASE("true_output defaults to the analytic model and zero stays zero") {
  const RfModel rf(kDefault, 1.0, 0.05);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const cplx x = rng.complex_gaussian(1.0);
    CHECK(rf.true_output(x) == rf.rf_convert(x));
  }
  const RfModel rippled(kDefault, 1.0, 0.05, RippleSpec{0.5, 7.0});
  CHECK(rippled.true_output({0.0, 0.0}) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("ripple calibration keeps the mean-square deviation within epsilon") {
  const double eps = 0.05;
  const RfModel rf(kDefault, 1.0, eps, RippleSpec{0.9, 11.0});
  // Monte-Carlo oracle over CN(0,1) inputs.
  Rng rng(6);
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const cplx x = rng.complex_gaussian(1.0);
    acc += std::norm(rf.true_output(x) - rf.rf_convert(x));
  }
  acc /= n;
  CHECK(acc <= eps * 1.02);
  CHECK(acc > 0.0);  // perturbation actually active
}

TEST_SUITE_END();
