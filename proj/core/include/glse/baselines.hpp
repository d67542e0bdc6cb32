#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

#include "glse/glse_amp.hpp"
#include "glse/reference_solver.hpp"
#include "glse/rf_model.hpp"

namespace glse {

struct MetricReport {
  double d_predicted = 0.0;  // per-user average RSS of the designed RF signal
  double d_actual = 0.0;     // per-user average RSS after projection + true PA
  double papr_db = 0.0;
  double lambda_used = 0.0;
  bool feasible = true;
};

struct ProjectionConfig;  // glse/projection.hpp

/// Full per-realization measurement of a designed RF-stage signal w:
/// predicted distortion, realized distortion through projection and the true
/// amplifier, spatial PAPR, and the disc-feasibility verdict.
MetricReport measure_glse_signal(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& w,
                                 const Eigen::VectorXcd& s, double rho, const RfModel& rf,
                                 const ProjectionConfig& projection, double lambda_used);

/// || H^T v - sqrt(rho) s ||^2.
double rss(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& v, const Eigen::VectorXcd& s,
           double rho);

/// rss / K, the per-user average distortion (linear scale).
double avg_distortion(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& v,
                      const Eigen::VectorXcd& s, double rho, int K);

double to_db(double linear);

/// Spatial peak-to-average power ratio max_m |w_m|^2 / mean_m |w_m|^2.
/// Throws std::domain_error for the all-zero signal.
double papr(const Eigen::VectorXcd& w);

struct TuneResult {
  double value = 0.0;        // tuned lambda or gamma
  double achieved_db = 0.0;  // tuning functional at the returned value
  bool feasible = true;      // false when the target sat outside the bracket
  int evaluations = 0;
};

struct LambdaTuneOptions {
  double lambda_min = 1e-4;
  double lambda_max = 1e2;
  int bisection_steps = 45;
  enum class Probe { direct, amp } probe = Probe::amp;
  SolverOptions solver{.max_iters = 20000, .rel_tol = 1e-7};
  AmpOptions amp{};
  int threads = 1;  // parallelism across the template ensemble
};

/// Tunes the penalty weight so the transmit signal sits target_db below the
/// disc ceiling: the tuning functional is the back-off ratio
///   p_out / mean(|w_m|^2)    (pooled over the template ensemble),
/// which is smooth and strictly increasing in lambda, unlike the realized
/// max/mean ratio whose per-realization crossings are not unique.
TuneResult tune_lambda_for_papr(std::span<const GlseProblem> templates, double target_db,
                                const LambdaTuneOptions& options = {});

/// Single-instance overload.
TuneResult tune_lambda_for_papr(const GlseProblem& prob, double target_db,
                                const LambdaTuneOptions& options = {});

/// gamma * conj(H) (H^T conj(H) + delta I)^{-1} s; K x K Gram in the user
/// domain, O(M K^2 + K^3).
Eigen::VectorXcd rzf_precode(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& s, double delta,
                             double gamma);

struct GammaTuneOptions {
  double gamma_min = 1e-3;
  double gamma_cap = 1e4;
  int bisection_steps = 45;
  int threads = 1;
};

/// Tunes the linear precoder scale so the ensemble-mean realized PAPR of the
/// amplifier output f_RF(gamma x0) meets target_db; amplifier compression
/// makes the post-PA PAPR monotone decreasing in gamma over the bracket.
/// `rzf_outputs` holds the unscaled precoder outputs x0 per realization.
TuneResult tune_gamma_for_papr(std::span<const Eigen::VectorXcd> rzf_outputs, const RfModel& rf,
                               double target_db, const GammaTuneOptions& options = {});

TuneResult tune_gamma_for_papr(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& s,
                               const RfModel& rf, double delta, double target_db,
                               const GammaTuneOptions& options = {});

}  // namespace glse
