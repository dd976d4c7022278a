#include "cvab/zeno.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen_algebra.hpp>

#include "cvab/errors.hpp"
#include "cvab/gaussian_state.hpp"

namespace cvab::resilience {

namespace {

// Quadratures (q_0..q_3, q_c, p_0..p_3, p_c).
constexpr int kModes = 5;
constexpr int kDim = 2 * kModes;
constexpr int kAncilla = 4;
using Mat = Eigen::Matrix<double, kDim, kDim>;

struct Generator {
  Mat A;
  Mat D;
};

Generator generator(const ZenoConfig& c) {
  // H = (g/2) (s q_c sum q_e + s^-1 p_c sum p_e)
  Mat h = Mat::Zero();
  for (int e = 0; e < 4; ++e) {
    h(kAncilla, e) = h(e, kAncilla) = 0.5 * c.g * c.s;
    h(kModes + kAncilla, kModes + e) = h(kModes + e, kModes + kAncilla) = 0.5 * c.g / c.s;
  }
  const Mat omega = engine::symplectic_form(kModes);
  Generator gen;
  const double kappa = 2.0 * c.delta;
  gen.A = omega * h;
  gen.A(kAncilla, kAncilla) -= 0.5 * kappa;
  gen.A(kModes + kAncilla, kModes + kAncilla) -= 0.5 * kappa;
  gen.D = Mat::Zero();
  gen.D(kAncilla, kAncilla) = gen.D(kModes + kAncilla, kModes + kAncilla) = 0.5 * kappa;
  for (int e = 0; e < 4; ++e) gen.D(e, e) = gen.D(kModes + e, kModes + e) = c.gamma_err;
  return gen;
}

Mat initial_state(const ZenoConfig& c) {
  // Star in its code state: the collective mode (1,1,1,1)/2 carries the
  // nullifier squeezing, everything else is vacuum.
  const Eigen::Vector4d u = Eigen::Vector4d::Constant(0.5);
  Mat sig = 0.5 * Mat::Identity();
  sig.block<4, 4>(0, 0) += (0.5 / (c.s * c.s) - 0.5) * u * u.transpose();
  sig.block<4, 4>(kModes, kModes) += (0.5 * c.s * c.s - 0.5) * u * u.transpose();
  return sig;
}

// a = X + iY with X = (s/sqrt 8) sum q, Y = (1/(s sqrt 8)) sum p; <a^dag a> = VarX + VarY - 1/2.
double nullifier_excitation(const Mat& sig, double s) {
  Eigen::Matrix<double, kDim, 1> x = Eigen::Matrix<double, kDim, 1>::Zero();
  Eigen::Matrix<double, kDim, 1> y = Eigen::Matrix<double, kDim, 1>::Zero();
  for (int e = 0; e < 4; ++e) {
    x[e] = s / std::sqrt(8.0);
    y[kModes + e] = 1.0 / (s * std::sqrt(8.0));
  }
  return x.dot(sig * x) + y.dot(sig * y) - 0.5;
}

struct Trajectory {
  std::vector<double> excitation;
  double min_margin = 0.0;
};

Trajectory integrate(const ZenoConfig& c, const Generator& gen, int steps_per_sample, double h) {
  namespace odeint = boost::numeric::odeint;
  odeint::runge_kutta4<Mat, double, Mat, double, odeint::vector_space_algebra> stepper;
  auto rhs = [&gen](const Mat& x, Mat& dxdt, double) { dxdt = gen.A * x + x * gen.A.transpose() + gen.D; };
  Mat sig = initial_state(c);
  Trajectory tr;
  tr.excitation.push_back(nullifier_excitation(sig, c.s));
  tr.min_margin = engine::GaussianState(Eigen::VectorXd::Zero(kDim), sig).uncertainty_margin();
  double t = 0.0;
  for (int k = 0; k < c.samples; ++k) {
    for (int i = 0; i < steps_per_sample; ++i) {
      stepper.do_step(rhs, sig, t, h);
      t += h;
    }
    tr.excitation.push_back(nullifier_excitation(sig, c.s));
    const double margin = engine::GaussianState(Eigen::VectorXd::Zero(kDim), sig).uncertainty_margin();
    tr.min_margin = std::min(tr.min_margin, margin);
  }
  return tr;
}

}  // namespace

void ZenoConfig::validate() const {
  if (!(g >= 0.0) || !(delta > 0.0) || !(gamma_err >= 0.0) || !(T > 0.0) || !(s > 0.0)) {
    throw ValidationError("Zeno rates must be nonnegative, with delta, T and s positive");
  }
  if (samples < 1) throw ValidationError("need at least one sample");
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D) {
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  // vec(A X + X A^T) = (I kron A + A kron I) vec(X)
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      k.block(i * n, j * n, n, n) += id(i, j) * A + A(i, j) * id;
    }
  }
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(D.data(), n * n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  if (!lu.isInvertible()) throw NumericalError("Lyapunov equation has no unique solution");
  Eigen::VectorXd x = lu.solve(-d);
  return Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
}

double zeno_steady_state(const ZenoConfig& c) {
  c.validate();
  // Only the collective mode (X~ = (s/2) sum q, Y~ = (1/(2s)) sum p) and the
  // ancilla reach a steady state; the other edge modes just diffuse.
  // Order: (X~, q_c, Y~, p_c); H = g (q_c X~ + p_c Y~).
  const double kappa = 2.0 * c.delta;
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 1) = h(1, 0) = c.g;
  h(2, 3) = h(3, 2) = c.g;
  const Eigen::MatrixXd omega = engine::symplectic_form(2);
  Eigen::MatrixXd a = omega * h;
  a(1, 1) -= 0.5 * kappa;
  a(3, 3) -= 0.5 * kappa;
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d(0, 0) = c.s * c.s * c.gamma_err;
  d(1, 1) = 0.5 * kappa;
  d(2, 2) = c.gamma_err / (c.s * c.s);
  d(3, 3) = 0.5 * kappa;
  if (c.g == 0.0) {
    if (c.gamma_err == 0.0) return 0.0;
    throw NumericalError("no steady state without coupling: the nullifier diffuses freely");
  }
  const Eigen::MatrixXd sig = solve_lyapunov(a, d);
  return 0.5 * (sig(0, 0) + sig(2, 2)) - 0.5;
}

ZenoResult zeno_simulate(const ZenoConfig& c) {
  c.validate();
  const Generator gen = generator(c);
  const double rate = std::max({c.g, c.delta, c.gamma_err});
  const double h_max = 1e-2 / rate;
  const double interval = c.T / c.samples;
  const int steps = std::max(1, static_cast<int>(std::ceil(interval / h_max)));
  const double h = interval / steps;

  const Trajectory coarse = integrate(c, gen, steps, h);
  const Trajectory fine = integrate(c, gen, 2 * steps, 0.5 * h);
  double worst = 0.0;
  int worst_k = 0;
  for (std::size_t k = 0; k < coarse.excitation.size(); ++k) {
    const double tol = 1e-9 + 1e-6 * std::abs(fine.excitation[k]);
    const double excess = std::abs(coarse.excitation[k] - fine.excitation[k]) / tol;
    if (excess > worst) {
      worst = excess;
      worst_k = static_cast<int>(k);
    }
  }
  if (worst > 1.0) {
    std::ostringstream msg;
    msg << "RK4 step " << h << " not converged: at t = " << worst_k * interval << " the excitation is "
        << coarse.excitation[worst_k] << " with step h and " << fine.excitation[worst_k] << " with h/2";
    throw StepSizeError(msg.str());
  }

  ZenoResult out;
  out.step = h;
  out.excitation = fine.excitation;
  for (int k = 0; k <= c.samples; ++k) out.times.push_back(k * interval);
  out.min_uncertainty_margin = std::min(coarse.min_margin, fine.min_margin);
  if (c.g > 0.0 || c.gamma_err == 0.0) out.steady_state = zeno_steady_state(c);
  return out;
}

}  // namespace cvab::resilience
