#include "cvab/anonymity.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "cvab/errors.hpp"

namespace cvab::anonymity {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

void check_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be nonnegative and finite");
}

// arccosh(1 + e) without cancellation for small e.
double acosh1p(double e) { return std::log1p(e + std::sqrt(e * (2.0 + e))); }

// ln(sinh a / sinh b) for a, b > 0.
double log_ratio_sinh(double a, double b) {
  if (std::max(a, b) > 20.0) {
    return (a - b) + std::log1p(-std::exp(-2.0 * a)) - std::log1p(-std::exp(-2.0 * b));
  }
  return std::log(std::sinh(a) / std::sinh(b));
}

template <typename Real>
Real det_ratio_nats(const closed_form::BasicCovarianceModel<Real>& model, Real tau) {
  using std::log;
  using boost::multiprecision::log;
  const closed_form::Matrix<Real> bar = closed_form::sigma_bar(model);
  const closed_form::Matrix<Real> mixed = bar + tau * tau * closed_form::Matrix<Real>::Identity(model.n, model.n);
  const closed_form::Matrix<Real> shifted = closed_form::sigma_given_sender(model, tau, 0);
  const Real num = Eigen::PartialPivLU<closed_form::Matrix<Real>>(mixed).determinant();
  const Real den = Eigen::PartialPivLU<closed_form::Matrix<Real>>(shifted).determinant();
  if (!(num > Real(0)) || !(den > Real(0))) throw SingularCovarianceError("covariance is not positive definite");
  return log(num / den) / Real(2);
}

}  // namespace

double epsilon(double s, int w, double s2) {
  check_positive(s, "s");
  check_positive(s2, "s2");
  if (w < 1) throw ValidationError("w must be >= 1");
  return static_cast<double>(w) / (2.0 * std::pow(s, 4) * s2 * s2);
}

double alpha(double s, double tau, double s2) {
  check_positive(s, "s");
  check_positive(s2, "s2");
  check_nonnegative(tau, "tau");
  return 2.0 * s * s * s2 * s2 * tau * tau;
}

double tau_for_alpha(double alpha, double s, double s2) {
  check_nonnegative(alpha, "alpha");
  check_positive(s, "s");
  check_positive(s2, "s2");
  return std::sqrt(alpha / (2.0 * s * s * s2 * s2));
}

double capacity(double alpha, InfoUnit unit) {
  check_nonnegative(alpha, "alpha");
  const double nats = 0.5 * std::log1p(alpha);
  return unit == InfoUnit::nats ? nats : nats / std::log(2.0);
}

double alpha_for_capacity(double capacity_bits) {
  check_nonnegative(capacity_bits, "capacity");
  return std::expm1(2.0 * capacity_bits * std::log(2.0));
}

double mutual_info_bound(int n, double eps, double alpha, InfoUnit unit) {
  if (n < 3) throw UnsupportedError("the leak bound needs n >= 3");
  check_positive(eps, "epsilon");
  check_nonnegative(alpha, "alpha");
  if (alpha == 0.0) return 0.0;
  // T_n(cosh t) - 1 = 2 sinh^2(n t / 2); the eps-derivative of the denominator
  // turns into a coth factor.
  const double t0 = acosh1p(eps);
  const double t1 = acosh1p(eps + eps * alpha);
  const double half0 = 0.5 * n * t0;
  const double correction = eps * alpha * n / (std::tanh(half0) * std::sinh(t0));
  // Clamp the rounding residue when alpha * eps is tiny; the exact value is >= 0.
  const double nats =
      std::max(0.0, 0.5 * (2.0 * log_ratio_sinh(0.5 * n * t1, half0) - std::log1p(correction)));
  return unit == InfoUnit::nats ? nats : nats / std::log(2.0);
}

double det_ratio_bound(const closed_form::CovarianceModel& model, double tau) {
  check_nonnegative(tau, "tau");
  return det_ratio_nats(model, tau) / std::log(2.0);
}

double mutual_info_bound_det_ratio(int n, double eps, double alpha) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  if (n < 2) throw UnsupportedError("the determinant ratio needs n >= 2");
  check_positive(eps, "epsilon");
  check_nonnegative(alpha, "alpha");
  // w = 2 keeps n*w even; then eps = 1 / s^4.
  closed_form::BasicCovarianceModel<Real> model;
  model.n = n;
  model.w = 2;
  model.s = boost::multiprecision::pow(Real(1) / Real(eps), Real(0.25));
  const Real tau = boost::multiprecision::sqrt(Real(alpha) / (Real(2) * model.s * model.s));
  const Real nats = det_ratio_nats(model, tau);
  return static_cast<double>(nats / boost::multiprecision::log(Real(2)));
}

double identification_probability(int n, double eps, double alpha) {
  return std::exp2(mutual_info_bound(n, eps, alpha)) / n;
}

SemiAnonymity semi_anonymous_max_n(double eps, double alpha, int n_limit) {
  if (n_limit < 3) throw ValidationError("search limit must be >= 3");
  SemiAnonymity out;
  for (int n = 3; n <= n_limit; ++n) {
    if (mutual_info_bound(n, eps, alpha) >= 1.0) return out;
    out.max_n = n;
  }
  out.capped = true;
  return out;
}

double expanded_leak_factor(int n, double eps, double alpha) {
  const double nn = static_cast<double>(n) * n;
  return 1.0 + (nn - 1.0) * alpha * alpha * eps / (6.0 * (1.0 + alpha));
}

HighAnonymityCondition high_anonymity_condition(int n, double eps, double alpha) {
  check_nonnegative(eps, "epsilon");
  check_nonnegative(alpha, "alpha");
  HighAnonymityCondition c;
  c.lhs = static_cast<double>(n) * n;
  c.rhs = expanded_leak_factor(n, eps, alpha);
  c.ratio = alpha * eps / 6.0;
  c.satisfied = c.ratio <= kHighAnonymityRatio;
  return c;
}

AnonymityReport analyze(int n, double s, int w, double tau, double s2) {
  AnonymityReport r;
  r.n = n;
  r.epsilon = epsilon(s, w, s2);
  r.alpha = alpha(s, tau, s2);
  r.capacity_bits = capacity(r.alpha);
  r.I_bound_bits = mutual_info_bound(n, r.epsilon, r.alpha);
  r.H_A_given_M_bits = std::log2(static_cast<double>(n)) - r.I_bound_bits;
  r.p_identify = std::exp2(r.I_bound_bits) / n;
  return r;
}

std::vector<GridPoint> figure2_grid(double s, int w, const std::vector<int>& n_values,
                                    const std::vector<double>& C_values, double s2) {
  const double eps = epsilon(s, w, s2);
  std::vector<GridPoint> grid;
  grid.reserve(n_values.size() * C_values.size());
  for (int n : n_values) {
    for (double c : C_values) {
      GridPoint g;
      g.n = n;
      g.C_bits = c;
      g.alpha = alpha_for_capacity(c);
      g.epsilon = eps;
      g.I_bound_bits = mutual_info_bound(n, eps, g.alpha);
      g.p_identify = std::exp2(g.I_bound_bits) / n;
      grid.push_back(g);
    }
  }
  return grid;
}

bool contour_attained(const std::vector<GridPoint>& grid, double level) {
  bool below = false;
  bool above = false;
  for (const auto& g : grid) {
    below = below || g.p_identify <= level;
    above = above || g.p_identify >= level;
  }
  return below && above;
}

}  // namespace cvab::anonymity
