#pragma once

#include <sstream>

#include <Eigen/Dense>

#include "cvab/errors.hpp"
#include "cvab/lattice.hpp"

namespace cvab::closed_form {

using lattice::Boundary;

/// Covariance model of the players' arc observables. `s` is the effective
/// squeezing factor; `s2` only enters epsilon and alpha downstream.
template <typename Real>
struct BasicCovarianceModel {
  int n = 2;
  int w = 1;
  Real s = Real(1);
  Boundary boundary = Boundary::toroidal;
  Real s2 = Real(1);

  void validate() const {
    if (n < 2) throw ValidationError("covariance model needs n >= 2");
    if (w < 1) throw ValidationError("covariance model needs w >= 1");
    if (!(s > Real(0)) || !(s2 > Real(0))) throw DomainError("squeezing factors must be positive");
    if (boundary == Boundary::toroidal && (n * w < 4 || (n * w) % 2 != 0)) {
      std::ostringstream msg;
      msg << "toroidal model needs n*w even and >= 4 (got " << n * w << ")";
      throw ValidationError(msg.str());
    }
  }
};

using CovarianceModel = BasicCovarianceModel<double>;

template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

/// <M_j^2> before the broadcast; j is 0-based.
template <typename Real>
Real local_variance(const BasicCovarianceModel<Real>& m, int j) {
  m.validate();
  if (j < 0 || j >= m.n) throw IndexError("player index out of range");
  const Real s2 = m.s * m.s;
  const Real base = Real(1) / (Real(2) * s2);
  if (m.boundary == Boundary::open && (j == 0 || j == m.n - 1)) return base + s2 / (Real(2) * Real(m.w));
  return base + s2 / Real(m.w);
}

template <typename Real>
Real adjacent_covariance(const BasicCovarianceModel<Real>& m) {
  m.validate();
  return -(m.s * m.s) / (Real(2) * Real(m.w));
}

/// Variance of the reconstructed message; the same for both boundaries.
template <typename Real>
Real global_variance(const BasicCovarianceModel<Real>& m) {
  m.validate();
  return Real(1) / (Real(2) * m.s * m.s);
}

/// Pre-broadcast covariance of (m_1..m_n). Circulant on the torus (for n = 2 the
/// two neighbours coincide, so the off-diagonal doubles), tridiagonal when open.
template <typename Real>
Matrix<Real> sigma_bar(const BasicCovarianceModel<Real>& m) {
  m.validate();
  const int n = m.n;
  const Real c = adjacent_covariance(m);
  Matrix<Real> sig = Matrix<Real>::Zero(n, n);
  for (int j = 0; j < n; ++j) sig(j, j) = local_variance(m, j);
  for (int j = 0; j + 1 < n; ++j) {
    sig(j, j + 1) += c;
    sig(j + 1, j) += c;
  }
  if (m.boundary == Boundary::toroidal) {
    if (n == 2) {
      sig(0, 1) = sig(1, 0) = Real(2) * c;
    } else {
      sig(0, n - 1) += c;
      sig(n - 1, 0) += c;
    }
  }
  return sig;
}

/// Covariance once player `a` (0-based) has shifted her outcome by sqrt(n) r, r ~ N(0, tau^2).
template <typename Real>
Matrix<Real> sigma_given_sender(const BasicCovarianceModel<Real>& m, Real tau, int a) {
  if (tau < Real(0)) throw DomainError("tau must be nonnegative");
  if (a < 0 || a >= m.n) throw IndexError("sender index out of range");
  Matrix<Real> sig = sigma_bar(m);
  sig(a, a) += Real(m.n) * tau * tau;
  return sig;
}

}  // namespace cvab::closed_form
