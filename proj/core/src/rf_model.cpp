#include "glse/rf_model.hpp"

#include <cmath>
#include <stdexcept>

namespace glse {

namespace {

double saleh_amp(const SalehParams& p, double a) {
  return p.alpha_a * a / (1.0 + p.beta_a * a * a);
}

/// E[ sin^2(freq a) f_A(a)^2 ] for a Rayleigh amplitude with E a^2 = 1,
/// i.e. the squared ripple deviation per unit gain_ripple^2 over CN(0,1)
/// inputs. Midpoint rule on [0, 8 sigma] is plenty for this smooth density.
double ripple_ms_unit(const SalehParams& p, double freq) {
  const double sigma2 = 0.5;  // per-component variance of CN(0,1)
  const int n = 4000;
  const double hi = 8.0;
  const double dx = hi / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = (i + 0.5) * dx;
    const double pdf = (a / sigma2) * std::exp(-a * a / (2.0 * sigma2));
    const double s = std::sin(freq * a);
    const double fa = saleh_amp(p, a);
    acc += s * s * fa * fa * pdf * dx;
  }
  return acc;
}

}  // namespace

RfModel::RfModel(SalehParams saleh, double p_out, double epsilon,
                 std::optional<RippleSpec> perturbation, double peak_tolerance)
    : saleh_(saleh), p_out_(p_out), epsilon_(epsilon), ripple_(perturbation) {
  if (!(saleh_.alpha_a > 0.0) || saleh_.beta_a < 0.0 || saleh_.alpha_phi < 0.0 ||
      saleh_.beta_phi < 0.0) {
    throw std::invalid_argument("RfModel: Saleh parameters must be non-negative, alpha_a > 0");
  }
  if (!(p_out_ > 0.0)) {
    throw std::invalid_argument("RfModel: p_out must be positive");
  }
  if (epsilon_ < 0.0) {
    throw std::invalid_argument("RfModel: epsilon must be non-negative");
  }
  if (saleh_.beta_a > 0.0) {
    const double peak = saleh_.alpha_a / (2.0 * std::sqrt(saleh_.beta_a));
    if (peak * peak > p_out_ * (1.0 + peak_tolerance)) {
      throw std::invalid_argument(
          "RfModel: amplitude peak exceeds the sqrt(p_out) output disc");
    }
  }
  if (ripple_ && ripple_->gain_ripple != 0.0) {
    // Scale the requested ripple down until its mean-square deviation over
    // the operating input distribution stays within epsilon.
    const double unit = ripple_ms_unit(saleh_, ripple_->ripple_freq);
    const double ms = ripple_->gain_ripple * ripple_->gain_ripple * unit;
    if (ms > epsilon_) {
      ripple_->gain_ripple = (epsilon_ > 0.0 && unit > 0.0)
                                 ? ripple_->gain_ripple * std::sqrt(epsilon_ / ms)
                                 : 0.0;
    }
  }
}

double RfModel::amp_conv(double a) const {
  if (a < 0.0) {
    throw std::domain_error("amp_conv: amplitude must be non-negative");
  }
  return saleh_amp(saleh_, a);
}

double RfModel::phase_conv(double a) const {
  if (a < 0.0) {
    throw std::domain_error("phase_conv: amplitude must be non-negative");
  }
  return saleh_.alpha_phi * a * a / (1.0 + saleh_.beta_phi * a * a);
}

std::complex<double> RfModel::rf_convert(std::complex<double> x) const {
  const double a = std::abs(x);
  if (a == 0.0) {
    return {0.0, 0.0};
  }
  const double mag = amp_conv(a);
  const double rot = phase_conv(a);
  const std::complex<double> phase{std::cos(rot), std::sin(rot)};
  return mag * phase * (x / a);
}

RfModel::Peak RfModel::saturation_peak() const {
  if (!(saleh_.beta_a > 0.0)) {
    throw std::domain_error("saturation_peak: beta_a = 0 gives an unbounded-gain model");
  }
  const double a = 1.0 / std::sqrt(saleh_.beta_a);
  return {a, saleh_.alpha_a / (2.0 * std::sqrt(saleh_.beta_a))};
}

std::complex<double> RfModel::true_output(std::complex<double> x) const {
  const std::complex<double> w = rf_convert(x);
  if (!ripple_) {
    return w;
  }
  const double gain = 1.0 + ripple_->gain_ripple * std::sin(ripple_->ripple_freq * std::abs(x));
  return gain * w;
}

}  // namespace glse
