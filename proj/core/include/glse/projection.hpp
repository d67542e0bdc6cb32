#pragma once

#include <Eigen/Dense>
#include <complex>

#include "glse/rf_model.hpp"

namespace glse {

struct ProjectionConfig {
  double theta = 0.05;       // regularization weight on |u|^2
  int grid_points = 1024;    // coarse scan resolution
  double refine_tol = 1e-10; // golden-section width and tie threshold
  double a_max = 0.0;        // search upper bound; 0 selects it automatically
};

/// J(a) = (target - f_A(a))^2 + theta a^2, the scalar objective after phase
/// alignment: for fixed |u| the phase arg(u) = arg(w) - f_Phi(|u|) cancels the
/// amplifier rotation, and the penalty is phase-independent.
double amplitude_objective(double a, double target, double theta, const RfModel& rf);

/// Recovers the pre-amplifier symbol for one RF-stage symbol w: global 1-D
/// search over the amplitude (uniform grid, then golden-section refinement of
/// every local minimum), ties resolved toward the smaller amplitude.
std::complex<double> project_symbol(std::complex<double> w, const RfModel& rf,
                                    const ProjectionConfig& cfg);

/// Element-wise project_symbol across the signal.
Eigen::VectorXcd project_signal(const Eigen::VectorXcd& w, const RfModel& rf,
                                const ProjectionConfig& cfg);

}  // namespace glse
