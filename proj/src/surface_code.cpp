#include "cvab/surface_code.hpp"

#include <cmath>
#include <sstream>

#include "cvab/errors.hpp"

namespace cvab::engine {

using lattice::Lattice;
using lattice::NodeRole;
using lattice::OrientedPath;

OutcomeSource OutcomeSource::sampled(RandomStream& rng) {
  OutcomeSource src;
  src.rng_ = &rng;
  return src;
}

OutcomeSource OutcomeSource::fixed(std::map<int, double> by_node, double fallback) {
  OutcomeSource src;
  src.fixed_ = std::move(by_node);
  src.fallback_ = fallback;
  return src;
}

std::optional<double> OutcomeSource::outcome_for(int cluster_node) const {
  auto it = fixed_.find(cluster_node);
  if (it != fixed_.end()) return it->second;
  if (rng_ != nullptr) return std::nullopt;
  return fallback_;
}

CodePreparationRecord cluster_to_surface_code(const GaussianState& cluster, const Lattice& lattice, double s,
                                              const OutcomeSource& outcomes, int p2_row) {
  if (!(s > 0.0)) throw DomainError("squeezing factor s must be positive");
  if (cluster.modes() != lattice.num_cluster_nodes()) {
    std::ostringstream msg;
    msg << "cluster has " << cluster.modes() << " modes but the lattice grid has " << lattice.num_cluster_nodes()
        << " nodes";
    throw PatternError(msg.str());
  }
  if (p2_row < 0 || p2_row >= lattice.rows()) throw IndexError("primal row out of range");

  CodePreparationRecord rec;
  rec.s = s;
  rec.p2_row = p2_row;
  GaussianState state = cluster;
  // alive[k] = cluster node carried by mode k of `state`.
  std::vector<int> alive(lattice.num_cluster_nodes());
  for (int k = 0; k < lattice.num_cluster_nodes(); ++k) alive[k] = k;

  std::size_t pos = 0;
  while (pos < alive.size()) {
    const int node = alive[pos];
    const NodeRole role = lattice.role(node);
    if (role == NodeRole::horizontal_edge || role == NodeRole::vertical_edge) {
      ++pos;
      continue;
    }
    const Quadrature quad = role == NodeRole::vertex ? Quadrature::p : Quadrature::q;
    auto res = homodyne_measure(state, static_cast<int>(pos), quad, outcomes.outcome_for(node), outcomes.rng());
    state = std::move(res.state);
    (quad == Quadrature::p ? rec.p_outcomes : rec.q_outcomes)[node] = res.outcome;
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  rec.state = std::move(state);
  rec.Q2 = string_shift(lattice, lattice.primal_row(p2_row), rec.q_outcomes, s);
  if (lattice.toroidal()) rec.Q1 = string_shift(lattice, lattice.primal_column(0), rec.q_outcomes, s);
  return rec;
}

double string_shift(const Lattice& lattice, const OrientedPath& path, const std::map<int, double>& q_outcomes,
                    double s) {
  if (path.size() == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    double q = 0.0;
    for (int f : lattice.faces_beside(path.edges[k])) {
      auto it = q_outcomes.find(lattice.faces()[f].cluster_node);
      if (it == q_outcomes.end()) throw PatternError("missing q outcome for a face beside the path");
      q += it->second;
    }
    sum += path.signs[k] * q;
  }
  return s / std::sqrt(2.0 * static_cast<double>(path.size())) * sum;
}

double message_offset(double Q2, double s) { return std::sqrt(2.0) * Q2 / s; }

Eigen::MatrixXd surface_code_U(const Lattice& lattice, double s) {
  const int ne = lattice.num_edges();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(ne, lattice.num_vertices());
  for (const auto& e : lattice.edges()) {
    if (e.lower >= 0) b(e.index, e.lower) += 1.0;
    if (e.upper >= 0) b(e.index, e.upper) += 1.0;
  }
  return Eigen::MatrixXd::Identity(ne, ne) / (s * s) + s * s * b * b.transpose();
}

ModeOperator vertex_nullifier(const Lattice& lattice, int vertex, double s) {
  const int ne = lattice.num_edges();
  const Eigen::MatrixXd u = surface_code_U(lattice, s);
  const double stilde = std::sqrt(5.0 * s * s + 1.0 / (s * s));
  const double norm = 1.0 / (std::sqrt(8.0) * stilde);
  ModeOperator a{Eigen::VectorXd::Zero(2 * ne), Eigen::VectorXd::Zero(2 * ne)};
  for (int e : lattice.star(vertex)) {
    a.x.head(ne) += norm * u.row(e).transpose();
    a.y[ne + e] += norm;
  }
  return a;
}

ModeOperator face_nullifier(const Lattice& lattice, int face, double s) {
  const int ne = lattice.num_edges();
  if (face < 0 || face >= lattice.num_faces()) throw IndexError("face out of range");
  ModeOperator b{Eigen::VectorXd::Zero(2 * ne), Eigen::VectorXd::Zero(2 * ne)};
  const double norm = 1.0 / std::sqrt(8.0);
  for (const auto& t : lattice.faces()[face].boundary) {
    b.x[ne + t.edge] += norm * s * t.sign;
    b.y[t.edge] -= norm * t.sign / s;
  }
  return b;
}

double excitation(const GaussianState& state, const ModeOperator& a) {
  const Eigen::MatrixXd omega = symplectic_form(state.modes());
  return state.covariance_of(a.x, a.x) + state.covariance_of(a.y, a.y) - a.x.dot(omega * a.y);
}

ArcObservable arc_observable(const OrientedPath& path) { return {path.edges, path.signs}; }

std::vector<ArcObservable> arc_observables(const lattice::WedgePartition& partition) {
  std::vector<ArcObservable> out;
  for (const auto& arc : partition.arcs) out.push_back(arc_observable(arc.path));
  return out;
}

ArcObservable union_observable(const lattice::WedgePartition& partition) {
  ArcObservable all;
  for (const auto& arc : partition.arcs) {
    all.modes.insert(all.modes.end(), arc.path.edges.begin(), arc.path.edges.end());
    all.signs.insert(all.signs.end(), arc.path.signs.begin(), arc.path.signs.end());
  }
  return all;
}

MeasurementMoments measurement_covariance(const GaussianState& state, const std::vector<ArcObservable>& arcs) {
  const int n = state.modes();
  const int k = static_cast<int>(arcs.size());
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(2 * n, k);
  for (int j = 0; j < k; ++j) {
    const auto& arc = arcs[j];
    if (arc.modes.size() != arc.signs.size()) throw ValidationError("arc modes and signs differ in length");
    if (arc.modes.empty()) continue;
    const double norm = 1.0 / std::sqrt(static_cast<double>(arc.modes.size()));
    for (std::size_t e = 0; e < arc.modes.size(); ++e) {
      if (arc.modes[e] < 0 || arc.modes[e] >= n) {
        throw IndexError("arc references mode " + std::to_string(arc.modes[e]) + " which is not in the state");
      }
      coeffs(n + arc.modes[e], j) += norm * arc.signs[e];
    }
  }
  MeasurementMoments out;
  out.means = coeffs.transpose() * state.mean();
  out.covariance = coeffs.transpose() * state.covariance() * coeffs;
  out.second_moments = out.covariance + out.means * out.means.transpose();
  return out;
}

GaussianState string_displacement(const GaussianState& state, const lattice::WedgePartition& partition, int sender,
                                  const OrientedPath& dual_path, const Lattice& lattice, double r) {
  if (sender < 0 || sender >= partition.n) throw IndexError("sender out of range");
  if (dual_path.kind != lattice::PathKind::dual) throw ValidationError("displacement needs a dual path");
  const auto& arc = partition.arcs[sender];
  int crossings = 0;
  int sign = 1;
  for (std::size_t k = 0; k < dual_path.size(); ++k) {
    const auto& e = lattice.edges().at(dual_path.edges[k]);
    if (e.axis != lattice::Axis::horizontal || partition.owner_of_column(e.col) != sender) {
      throw DomainError("dual path leaves the sender's wedge");
    }
    const int o = arc.path.sign_of(e.index);
    if (o != 0) {
      ++crossings;
      sign = o * dual_path.signs[k];
    }
  }
  if (crossings != 1) throw DomainError("dual path must cross the sender's arc exactly once");
  if (dual_path.edges.empty() || r == 0.0) return state;

  const int n = state.modes();
  const double amplitude = std::sqrt(static_cast<double>(partition.n * partition.w)) * r * sign;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * n);
  for (std::size_t k = 0; k < dual_path.size(); ++k) {
    if (dual_path.edges[k] >= n) throw IndexError("dual path references a mode outside the state");
    d[n + dual_path.edges[k]] += amplitude * dual_path.signs[k];
  }
  return state.displaced(d);
}

}  // namespace cvab::engine
