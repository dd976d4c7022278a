#pragma once

#include <optional>

#include <Eigen/Dense>

#include "cvab/lattice.hpp"
#include "cvab/random.hpp"

namespace cvab::engine {

enum class Quadrature { q, p };

/// Gaussian state of N modes, hbar = 1, quadratures ordered (q_1..q_N, p_1..p_N).
/// The covariance is the symmetrised one, so the vacuum has cov = I/2.
class GaussianState {
 public:
  GaussianState() = default;
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  static GaussianState vacuum(int modes);

  int modes() const { return static_cast<int>(mean_.size() / 2); }
  int q_index(int mode) const;
  int p_index(int mode) const;
  int index(int mode, Quadrature quad) const { return quad == Quadrature::q ? q_index(mode) : p_index(mode); }

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }

  /// <c . r>
  double expectation(const Eigen::VectorXd& c) const;
  /// Symmetrised covariance of a . r and b . r.
  double covariance_of(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  /// Smallest eigenvalue of cov + (i/2) Omega; nonnegative for physical states.
  double uncertainty_margin() const;
  /// Symplectic eigenvalues, ascending.
  Eigen::VectorXd symplectic_eigenvalues() const;
  bool is_pure(double tol = 1e-9) const;

  GaussianState apply_symplectic(const Eigen::MatrixXd& S) const;
  GaussianState displaced(const Eigen::VectorXd& d) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Standard symplectic form for the qq..pp ordering.
Eigen::MatrixXd symplectic_form(int modes);

/// Graph state with Z = A + i s^-2 I: p-squeezed inputs followed by one CZ per edge.
GaussianState build_cluster_state(const Eigen::MatrixXd& adjacency, double s);

/// Cluster state on the full grid of the lattice (every node, nearest-neighbour edges).
GaussianState build_canonical_cluster(const lattice::Lattice& lattice, double s);

Eigen::MatrixXd cluster_adjacency(const lattice::Lattice& lattice);

struct HomodyneResult {
  double outcome = 0.0;
  GaussianState state;
};

/// Ideal homodyne detection of one quadrature. The measured mode is removed.
/// With no outcome given, one is drawn from the marginal using `rng`.
HomodyneResult homodyne_measure(const GaussianState& state, int mode, Quadrature quad,
                                std::optional<double> outcome, RandomStream* rng = nullptr);

}  // namespace cvab::engine
