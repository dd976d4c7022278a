#include "cvab/attacker.hpp"

#include <algorithm>
#include <cmath>

#include "cvab/errors.hpp"
#include "cvab/random.hpp"

namespace cvab::anonymity {

MapAttacker::MapAttacker(const closed_form::CovarianceModel& model, double tau) : n_(model.n) {
  if (!(tau >= 0.0)) throw DomainError("tau must be nonnegative");
  const Eigen::MatrixXd bar = closed_form::sigma_bar(model);
  llt_.compute(bar);
  if (llt_.info() != Eigen::Success) throw SingularCovarianceError("pre-broadcast covariance is not positive definite");
  beta_ = n_ * tau * tau;
  p_diag_ = llt_.solve(Eigen::MatrixXd::Identity(n_, n_)).diagonal();
  log_norm_ = -0.5 * (1.0 + beta_ * p_diag_.array()).log();
}

Eigen::VectorXd MapAttacker::log_likelihoods(const Eigen::VectorXd& m) const {
  if (m.size() != n_) throw ValidationError("announcement vector has the wrong length");
  // Sherman-Morrison: m^T S_a^-1 m = m^T P m - beta (P m)_a^2 / (1 + beta P_aa).
  const Eigen::VectorXd pm = llt_.solve(m);
  const double base = m.dot(pm);
  Eigen::VectorXd out(n_);
  for (int a = 0; a < n_; ++a) {
    const double quad = base - beta_ * pm[a] * pm[a] / (1.0 + beta_ * p_diag_[a]);
    out[a] = log_norm_[a] - 0.5 * quad;
  }
  return out;
}

Eigen::VectorXd MapAttacker::posterior(const Eigen::VectorXd& m) const {
  Eigen::VectorXd l = log_likelihoods(m);
  l.array() -= l.maxCoeff();
  Eigen::VectorXd p = l.array().exp();
  return p / p.sum();
}

int MapAttacker::map_guess(const Eigen::VectorXd& m) const {
  const Eigen::VectorXd l = log_likelihoods(m);
  int best = 0;
  for (int a = 1; a < n_; ++a) {
    // Differences at rounding level count as ties.
    if (l[a] > l[best] + 1e-12 * std::max(1.0, std::abs(l[best]))) best = a;
  }
  return best;
}

AttackEstimate empirical_attack(const closed_form::CovarianceModel& model, double tau, int trials,
                                std::uint64_t seed) {
  if (trials < 1000) throw ValidationError("empirical attack needs at least 1000 trials");
  const MapAttacker attacker(model, tau);
  const int n = model.n;
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(closed_form::sigma_bar(model)).matrixL();
  const double root_n = std::sqrt(static_cast<double>(n));

  long hits = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  Eigen::VectorXd z(n);
  for (int t = 0; t < trials; ++t) {
    RandomStream rng(seed, static_cast<std::uint64_t>(t));
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const double r = rng.normal(0.0, tau);
    for (int k = 0; k < n; ++k) z[k] = rng.normal();
    Eigen::VectorXd m = chol * z;
    m[a] += root_n * r;
    if (attacker.map_guess(m) == a) ++hits;
    const double info = std::log2(n * attacker.posterior(m)[a]);
    sum += info;
    sum_sq += info * info;
  }
  AttackEstimate est;
  est.trials = trials;
  est.map_success_rate = static_cast<double>(hits) / trials;
  est.success_std_error = std::sqrt(est.map_success_rate * (1.0 - est.map_success_rate) / trials);
  est.empirical_I_bits = sum / trials;
  const double var = std::max(0.0, sum_sq / trials - est.empirical_I_bits * est.empirical_I_bits);
  est.I_std_error = std::sqrt(var / (trials - 1.0));
  return est;
}

}  // namespace cvab::anonymity
