#include "cvab/chebyshev.hpp"

#include <boost/math/special_functions/chebyshev.hpp>

#include "cvab/errors.hpp"

namespace cvab::anonymity {

namespace {

double det_toeplitz(int n, double x) { return boost::math::chebyshev_u(static_cast<unsigned>(n), 0.5 * x); }

double det_circulant(int n, double x) {
  // C_1 and C_2 are defined to equal T_1 and T_2.
  if (n <= 2) return det_toeplitz(n, x);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return 2.0 * sign * (boost::math::chebyshev_t(static_cast<unsigned>(n), -0.5 * x) - 1.0);
}

}  // namespace

ChebDets cheb_dets(int n, double x) {
  if (n < 1) throw ValidationError("determinant order must be >= 1");
  return {det_toeplitz(n, x), det_circulant(n, x)};
}

double det_circulant_perturbed(int n, double x, double a) {
  if (n < 1) throw ValidationError("determinant order must be >= 1");
  // Expansion along the perturbed row: the minor is T_{n-1}(x).
  return det_circulant(n, x) + a * det_toeplitz(n - 1, x);
}

}  // namespace cvab::anonymity
