#pragma once

#include <optional>
#include <vector>

#include "cvab/closed_form.hpp"

namespace cvab::anonymity {

enum class InfoUnit { bits, nats };

/// Ratio of global noise to excess local noise, w / (2 s^4 s2^2).
double epsilon(double s, int w, double s2 = 1.0);
/// Broadcast signal-to-noise ratio 2 s^2 s2^2 tau^2.
double alpha(double s, double tau, double s2 = 1.0);
double tau_for_alpha(double alpha, double s, double s2 = 1.0);

double capacity(double alpha, InfoUnit unit = InfoUnit::bits);
double alpha_for_capacity(double capacity_bits);

/// Upper bound on I(M; A) for the toroidal code, n >= 3.
double mutual_info_bound(int n, double eps, double alpha, InfoUnit unit = InfoUnit::bits);

/// Same bound from log det(Sigma_bar + tau^2 I) - log det(Sigma_{|a}) of an explicit model,
/// in double precision. Bits.
double det_ratio_bound(const closed_form::CovarianceModel& model, double tau);

/// Determinant-ratio form of mutual_info_bound at given (n, eps, alpha), evaluated with
/// 50-digit arithmetic on a model realising eps and alpha. Bits.
double mutual_info_bound_det_ratio(int n, double eps, double alpha);

/// 2^I / n: best-case chance of naming the sender.
double identification_probability(int n, double eps, double alpha);

struct SemiAnonymity {
  std::optional<int> max_n;  // empty: even n = 3 leaks a full bit
  bool capped = false;       // still below one bit at the search limit
};

/// Largest n >= 3 whose bound stays below one bit (p < 2/n).
SemiAnonymity semi_anonymous_max_n(double eps, double alpha, int n_limit = 100000);

/// First-order expansion of 2^{2I} in eps: 1 + (n^2 - 1) alpha^2 eps / (6 (1 + alpha)).
double expanded_leak_factor(int n, double eps, double alpha);

struct HighAnonymityCondition {
  double lhs = 0.0;    // n^2
  double rhs = 0.0;    // expanded_leak_factor
  double ratio = 0.0;  // alpha eps / 6
  bool satisfied = false;
};

/// alpha eps / 6 below this counts as "much less than one".
inline constexpr double kHighAnonymityRatio = 0.01;

HighAnonymityCondition high_anonymity_condition(int n, double eps, double alpha);

struct AnonymityReport {
  int n = 0;
  double epsilon = 0.0;
  double alpha = 0.0;
  double capacity_bits = 0.0;
  double I_bound_bits = 0.0;
  double H_A_given_M_bits = 0.0;
  double p_identify = 0.0;
};

AnonymityReport analyze(int n, double s, int w, double tau, double s2 = 1.0);

struct GridPoint {
  int n = 0;
  double C_bits = 0.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  double I_bound_bits = 0.0;
  double p_identify = 0.0;
};

/// Identification probability over an (n, C) grid, C in bits. Uses the bound, not an exact leak.
std::vector<GridPoint> figure2_grid(double s, int w, const std::vector<int>& n_values,
                                    const std::vector<double>& C_values, double s2 = 1.0);

/// True when some grid point lies on each side of (or on) the level.
bool contour_attained(const std::vector<GridPoint>& grid, double level);

}  // namespace cvab::anonymity
