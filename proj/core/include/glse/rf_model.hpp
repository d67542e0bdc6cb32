#pragma once

#include <complex>
#include <optional>

namespace glse {

/// Saleh AM-AM / AM-PM parameters. All non-negative, alpha_a > 0.
struct SalehParams {
  double alpha_a = 2.159;
  double beta_a = 1.152;
  double alpha_phi = 4.003;
  double beta_phi = 9.104;
};

/// Deterministic gain ripple used to realize a "true" amplifier that
/// deviates from the analytic model by a bounded mean-square error.
struct RippleSpec {
  double gain_ripple = 0.0;  // relative amplitude of the ripple
  double ripple_freq = 0.0;  // radians per unit input amplitude
};

/// An RF chain dominated by a memoryless Saleh power amplifier.
///
/// Amplitude conversion  f_A(a)   = alpha_a a / (1 + beta_a a^2)
/// Phase conversion      f_Phi(a) = alpha_phi a^2 / (1 + beta_phi a^2)
/// Full conversion       f(x)     = f_A(|x|) exp(j f_Phi(|x|)) x/|x|, f(0) = 0.
///
/// The output constellation lives inside the disc |w| <= sqrt(p_out); the
/// constructor verifies the amplitude peak against that radius.
class RfModel {
 public:
  /// Throws std::invalid_argument on parameter violations, including an
  /// amplitude peak whose square exceeds p_out * (1 + peak_tolerance).
  explicit RfModel(SalehParams saleh, double p_out = 1.0, double epsilon = 0.0,
                   std::optional<RippleSpec> perturbation = std::nullopt,
                   double peak_tolerance = 0.02);

  /// AM-AM conversion; a must be >= 0 (std::domain_error otherwise).
  double amp_conv(double a) const;

  /// AM-PM conversion in radians; a must be >= 0.
  double phase_conv(double a) const;

  /// Complex conversion through the chain; exactly 0 at x = 0.
  std::complex<double> rf_convert(std::complex<double> x) const;

  struct Peak {
    double amplitude;  // input amplitude 1/sqrt(beta_a)
    double value;      // output amplitude alpha_a / (2 sqrt(beta_a))
  };
  /// Unique maximizer of amp_conv on [0, inf). Throws std::domain_error when
  /// beta_a == 0 (unbounded-gain model, no finite peak).
  Peak saturation_peak() const;

  /// Output of the physical amplifier. Identical to rf_convert unless a
  /// perturbation was supplied; then a smooth gain ripple is applied whose
  /// mean-square deviation over CN(0,1) inputs is calibrated to <= epsilon.
  std::complex<double> true_output(std::complex<double> x) const;

  const SalehParams& saleh() const { return saleh_; }
  double p_out() const { return p_out_; }
  double epsilon() const { return epsilon_; }
  bool has_perturbation() const { return ripple_.has_value(); }
  const std::optional<RippleSpec>& perturbation() const { return ripple_; }

 private:
  SalehParams saleh_;
  double p_out_;
  double epsilon_;
  std::optional<RippleSpec> ripple_;
};

}  // namespace glse
