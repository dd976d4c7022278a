#include "cvab/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cvab/errors.hpp"

namespace cvab::engine {

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() % 2 != 0) throw ValidationError("mean vector must have even length");
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw ValidationError("covariance shape does not match the mean vector");
  }
  if (cov_.size() == 0) return;
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw ValidationError("covariance matrix is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

GaussianState GaussianState::vacuum(int modes) {
  if (modes < 0) throw ValidationError("negative mode count");
  return {Eigen::VectorXd::Zero(2 * modes), 0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

int GaussianState::q_index(int mode) const {
  if (mode < 0 || mode >= modes()) throw IndexError("mode " + std::to_string(mode) + " out of range");
  return mode;
}

int GaussianState::p_index(int mode) const {
  if (mode < 0 || mode >= modes()) throw IndexError("mode " + std::to_string(mode) + " out of range");
  return modes() + mode;
}

double GaussianState::expectation(const Eigen::VectorXd& c) const {
  if (c.size() != mean_.size()) throw ValidationError("coefficient vector has the wrong length");
  return c.dot(mean_);
}

double GaussianState::covariance_of(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  if (a.size() != mean_.size() || b.size() != mean_.size()) {
    throw ValidationError("coefficient vector has the wrong length");
  }
  return a.dot(cov_ * b);
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes) = Eigen::MatrixXd::Identity(modes, modes);
  omega.bottomLeftCorner(modes, modes) = -Eigen::MatrixXd::Identity(modes, modes);
  return omega;
}

double GaussianState::uncertainty_margin() const {
  const int n2 = static_cast<int>(mean_.size());
  if (n2 == 0) return 0.0;
  Eigen::MatrixXcd h = cov_.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 0.5) * symplectic_form(modes()).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::VectorXd GaussianState::symplectic_eigenvalues() const {
  const int n = modes();
  if (n == 0) return {};
  // The eigenvalues of i*Omega*cov come in pairs +-nu.
  Eigen::MatrixXcd m = (std::complex<double>(0.0, 1.0) * symplectic_form(n).cast<std::complex<double>>()) *
                       cov_.cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<double> vals;
  for (int k = 0; k < 2 * n; ++k) vals.push_back(es.eigenvalues()[k].real());
  std::sort(vals.begin(), vals.end());
  Eigen::VectorXd nu(n);
  for (int k = 0; k < n; ++k) nu[k] = vals[n + k];
  return nu;
}

bool GaussianState::is_pure(double tol) const {
  const Eigen::VectorXd nu = symplectic_eigenvalues();
  return nu.size() == 0 || (nu.array() - 0.5).abs().maxCoeff() < tol;
}

GaussianState GaussianState::apply_symplectic(const Eigen::MatrixXd& S) const {
  if (S.rows() != mean_.size() || S.cols() != mean_.size()) throw ValidationError("symplectic matrix has the wrong shape");
  return {S * mean_, S * cov_ * S.transpose()};
}

GaussianState GaussianState::displaced(const Eigen::VectorXd& d) const {
  if (d.size() != mean_.size()) throw ValidationError("displacement has the wrong length");
  GaussianState out = *this;
  out.mean_ += d;
  return out;
}

GaussianState build_cluster_state(const Eigen::MatrixXd& adjacency, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("squeezing factor s must be positive");
  const int n = static_cast<int>(adjacency.rows());
  if (adjacency.cols() != n) throw ValidationError("adjacency must be square");
  if (n > 0 && (adjacency - adjacency.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw ValidationError("adjacency must be symmetric");
  }
  Eigen::VectorXd diag(2 * n);
  diag.head(n).setConstant(0.5 * s * s);
  diag.tail(n).setConstant(0.5 / (s * s));
  GaussianState squeezed(Eigen::VectorXd::Zero(2 * n), diag.asDiagonal().toDenseMatrix());
  // CZ gates: p -> p + A q.
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  S.bottomLeftCorner(n, n) = adjacency;
  return squeezed.apply_symplectic(S);
}

Eigen::MatrixXd cluster_adjacency(const lattice::Lattice& lattice) {
  const int n = lattice.num_cluster_nodes();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int node = 0; node < n; ++node) {
    for (int nb : lattice.cluster_neighbors(node)) a(node, nb) = 1.0;
  }
  return a;
}

GaussianState build_canonical_cluster(const lattice::Lattice& lattice, double s) {
  return build_cluster_state(cluster_adjacency(lattice), s);
}

HomodyneResult homodyne_measure(const GaussianState& state, int mode, Quadrature quad,
                                std::optional<double> outcome, RandomStream* rng) {
  const int n = state.modes();
  const int k = state.index(mode, quad);
  const Eigen::MatrixXd& cov = state.covariance();
  const Eigen::VectorXd& mu = state.mean();
  const double var = cov(k, k);
  const double scale = std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff());
  if (!(var > 1e-14 * scale)) {
    throw DegenerateVarianceError("measured quadrature has vanishing variance");
  }
  double x;
  if (outcome) {
    x = *outcome;
  } else {
    if (rng == nullptr) throw ValidationError("homodyne_measure needs an outcome or a random stream");
    x = rng->normal(mu[k], std::sqrt(var));
  }

  // Schur complement on the 1x1 measured block, then drop both quadratures of the mode.
  const Eigen::VectorXd col = cov.col(k);
  Eigen::VectorXd new_mean = mu + col * ((x - mu[k]) / var);
  Eigen::MatrixXd new_cov = cov - col * col.transpose() / var;

  std::vector<int> keep;
  keep.reserve(2 * n - 2);
  for (int i = 0; i < 2 * n; ++i) {
    if (i != mode && i != n + mode) keep.push_back(i);
  }
  const int m = static_cast<int>(keep.size());
  Eigen::VectorXd out_mean(m);
  Eigen::MatrixXd out_cov(m, m);
  for (int i = 0; i < m; ++i) {
    out_mean[i] = new_mean[keep[i]];
    for (int j = 0; j < m; ++j) out_cov(i, j) = new_cov(keep[i], keep[j]);
  }
  return {x, GaussianState(std::move(out_mean), std::move(out_cov))};
}

}  // namespace cvab::engine
