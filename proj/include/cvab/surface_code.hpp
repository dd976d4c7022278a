#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cvab/gaussian_state.hpp"
#include "cvab/lattice.hpp"
#include "cvab/random.hpp"

namespace cvab::engine {

/// Where measurement outcomes come from during the reduction.
/// Fixed outcomes take precedence; remaining ones are sampled, or set to
/// `fallback` when there is no random stream.
class OutcomeSource {
 public:
  static OutcomeSource zeros() { return OutcomeSource(); }
  static OutcomeSource sampled(RandomStream& rng);
  static OutcomeSource fixed(std::map<int, double> by_node, double fallback = 0.0);

  std::optional<double> outcome_for(int cluster_node) const;
  RandomStream* rng() const { return rng_; }

 private:
  RandomStream* rng_ = nullptr;
  std::map<int, double> fixed_;
  double fallback_ = 0.0;
};

struct CodePreparationRecord {
  GaussianState state;               // one mode per lattice edge, in edge-index order
  std::map<int, double> q_outcomes;  // face nodes
  std::map<int, double> p_outcomes;  // vertex nodes
  std::optional<double> Q1;          // vertical loop (torus only)
  double Q2 = 0.0;                   // horizontal line at `p2_row`
  int p2_row = 0;
  double s = 1.0;
};

/// Measures p on every vertex node and q on every face node of the canonical cluster.
CodePreparationRecord cluster_to_surface_code(const GaussianState& cluster, const lattice::Lattice& lattice,
                                              double s, const OutcomeSource& outcomes, int p2_row = 0);

/// Accumulated shift of a string mode from the q outcomes of the faces beside it.
double string_shift(const lattice::Lattice& lattice, const lattice::OrientedPath& path,
                    const std::map<int, double>& q_outcomes, double s);

/// Mean of the normalised string momentum caused by a shift Q2.
double message_offset(double Q2, double s);

/// U of the reduced graph Z = iU: s^-2 I + s^2 B B^T with B the edge-vertex incidence.
Eigen::MatrixXd surface_code_U(const lattice::Lattice& lattice, double s);

/// Linear combination a = x.r + i y.r of the edge-mode quadratures.
struct ModeOperator {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

ModeOperator vertex_nullifier(const lattice::Lattice& lattice, int vertex, double s);
ModeOperator face_nullifier(const lattice::Lattice& lattice, int face, double s);

/// <Delta a^dag Delta a>; zero iff the state is annihilated by a up to its mean.
double excitation(const GaussianState& state, const ModeOperator& a);

/// Observable w^{-1/2} sum_e sign_e p_e over a set of modes.
struct ArcObservable {
  std::vector<int> modes;
  std::vector<int> signs;
};

ArcObservable arc_observable(const lattice::OrientedPath& path);
std::vector<ArcObservable> arc_observables(const lattice::WedgePartition& partition);
/// The whole primal line as one observable (normalised by its length).
ArcObservable union_observable(const lattice::WedgePartition& partition);

struct MeasurementMoments {
  Eigen::VectorXd means;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd second_moments;  // covariance + means means^T
};

MeasurementMoments measurement_covariance(const GaussianState& state, const std::vector<ArcObservable>& arcs);

/// Sender's displacement along a dual line inside her wedge. Shifts p_e by
/// sqrt(n w) r f(e) sign, with the sign chosen so that her arc mean rises by sqrt(n) r.
GaussianState string_displacement(const GaussianState& state, const lattice::WedgePartition& partition,
                                  int sender, const lattice::OrientedPath& dual_path,
                                  const lattice::Lattice& lattice, double r);

}  // namespace cvab::engine
