#pragma once

namespace cvab::anonymity {

/// Determinants of the n x n tridiagonal Toeplitz matrix T_n(x) (x on the
/// diagonal, 1 on the off-diagonals) and its circulant closure C_n(x).
struct ChebDets {
  double toeplitz = 0.0;
  double circulant = 0.0;
};

ChebDets cheb_dets(int n, double x);

/// det of C_n(x) with a added to one diagonal entry.
double det_circulant_perturbed(int n, double x, double a);

}  // namespace cvab::anonymity
