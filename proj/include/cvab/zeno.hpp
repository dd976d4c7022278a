#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace cvab::resilience {

/// One vertex star (four edge modes) coupled to one decaying ancilla.
struct ZenoConfig {
  double g = 1.0;          // code-ancilla coupling
  double delta = 10.0;     // ancilla decay; the amplitude damping rate is 2 delta
  double gamma_err = 0.01; // isotropic diffusion on every edge quadrature
  double T = 40.0;
  double s = 1.0;          // squeezing factor inside the star nullifier
  int samples = 200;       // grid points after t = 0

  void validate() const;
};

struct ZenoResult {
  std::vector<double> times;
  std::vector<double> excitation;  // <a^dag a> of the star nullifier
  std::optional<double> steady_state;  // none when the nullifier diffuses freely (g = 0)
  double step = 0.0;
  double min_uncertainty_margin = 0.0;  // over sampled times
};

/// Integrates the covariance ODE dS/dt = A S + S A^T + D with fixed-step RK4,
/// checking the trajectory against a run at half the step. Throws StepSizeError
/// when the two disagree.
ZenoResult zeno_simulate(const ZenoConfig& config);

/// Stationary nullifier excitation of the star + ancilla system.
double zeno_steady_state(const ZenoConfig& config);

/// Solves A X + X A^T + D = 0.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D);

}  // namespace cvab::resilience
