#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "cvab/closed_form.hpp"

namespace cvab::anonymity {

/// Bayesian sender identification from the full announcement vector, flat prior.
/// Each hypothesis a has covariance Sigma_bar + n tau^2 e_a e_a^T; the rank-one
/// structure is used so every posterior costs one solve with Sigma_bar.
class MapAttacker {
 public:
  MapAttacker(const closed_form::CovarianceModel& model, double tau);

  int n() const { return n_; }
  Eigen::VectorXd log_likelihoods(const Eigen::VectorXd& m) const;
  Eigen::VectorXd posterior(const Eigen::VectorXd& m) const;
  /// Most probable sender; ties go to the lowest index.
  int map_guess(const Eigen::VectorXd& m) const;

 private:
  int n_;
  double beta_;  // n tau^2
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd log_norm_;  // -(1/2) log(1 + beta P_aa)
  Eigen::VectorXd p_diag_;
};

struct AttackEstimate {
  int trials = 0;
  double map_success_rate = 0.0;
  double success_std_error = 0.0;
  double empirical_I_bits = 0.0;
  double I_std_error = 0.0;
};

/// Monte Carlo over uniformly drawn senders and Gaussian messages r ~ N(0, tau^2).
/// Trial t uses random stream (seed, t).
AttackEstimate empirical_attack(const closed_form::CovarianceModel& model, double tau, int trials,
                                std::uint64_t seed);

}  // namespace cvab::anonymity
