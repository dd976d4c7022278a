#include "cvab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvab/errors.hpp"
#include "cvab/random.hpp"
#include "cvab/surface_code.hpp"

namespace cvab::protocol {

using lattice::Boundary;

struct BroadcastSimulator::Engine {
  lattice::Lattice lattice;
  lattice::WedgePartition partition;
  engine::GaussianState cluster;
};

namespace {

lattice::Lattice engine_lattice(const ProtocolConfig& c) {
  const int length = c.model.n * c.model.w;
  if (c.model.boundary == Boundary::toroidal) return lattice::Lattice(c.engine_rows, length, Boundary::toroidal);
  return lattice::Lattice(c.engine_rows, length - 1, Boundary::open);
}

}  // namespace

BroadcastSimulator::BroadcastSimulator(ProtocolConfig config) : config_(std::move(config)) {
  config_.model.validate();
  if (!(config_.tau >= 0.0)) throw DomainError("tau must be nonnegative");
  if (config_.engine_path) {
    lattice::Lattice lat = engine_lattice(config_);
    if (lat.num_cluster_nodes() > kEngineModeCap) {
      std::ostringstream msg;
      msg << "engine path would need " << lat.num_cluster_nodes() << " modes (cap " << kEngineModeCap
          << "); use the closed-form path";
      throw CapacityError(msg.str());
    }
    auto part = lattice::partition_wedges(lat, config_.model.n, config_.model.w, 0);
    auto cluster = engine::build_canonical_cluster(lat, config_.model.s);
    engine_ = std::make_unique<Engine>(Engine{std::move(lat), std::move(part), std::move(cluster)});
  } else {
    Eigen::LLT<Eigen::MatrixXd> llt(closed_form::sigma_bar(config_.model));
    if (llt.info() != Eigen::Success) throw SingularCovarianceError("pre-broadcast covariance is not positive definite");
    chol_ = llt.matrixL();
  }
}

BroadcastSimulator::~BroadcastSimulator() = default;
BroadcastSimulator::BroadcastSimulator(BroadcastSimulator&&) noexcept = default;
BroadcastSimulator& BroadcastSimulator::operator=(BroadcastSimulator&&) noexcept = default;

BroadcastRun BroadcastSimulator::run_round(int sender, double r, std::uint64_t round) const {
  const auto& m = config_.model;
  if (sender < 0 || sender >= m.n) throw IndexError("sender out of range");
  RandomStream rng(config_.seed, round);
  BroadcastRun run;
  run.sender = sender;
  run.message = r;
  run.round = round;

  if (!engine_) {
    Eigen::VectorXd z(m.n);
    for (int k = 0; k < m.n; ++k) z[k] = rng.normal();
    run.announcements = chol_ * z;
    run.announcements[sender] += std::sqrt(static_cast<double>(m.n)) * r;
    run.reconstructed = reconstruct(run.announcements, m, 0.0);
    return run;
  }

  const Engine& eng = *engine_;
  auto rec = engine::cluster_to_surface_code(eng.cluster, eng.lattice, m.s, engine::OutcomeSource::sampled(rng), 0);
  const auto& arc = eng.partition.arcs[sender];
  engine::GaussianState state = engine::string_displacement(
      rec.state, eng.partition, sender, eng.lattice.dual_column(arc.first_edge_col), eng.lattice, r);

  // Players measure p on their arc edges; alive[k] is the edge held by mode k.
  std::vector<int> alive(eng.lattice.num_edges());
  for (int e = 0; e < eng.lattice.num_edges(); ++e) alive[e] = e;
  run.announcements = Eigen::VectorXd::Zero(m.n);
  for (const auto& a : eng.partition.arcs) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.path.size(); ++k) {
      const int e = a.path.edges[k];
      const auto it = std::find(alive.begin(), alive.end(), e);
      auto res = engine::homodyne_measure(state, static_cast<int>(it - alive.begin()), engine::Quadrature::p,
                                          std::nullopt, &rng);
      state = std::move(res.state);
      alive.erase(it);
      sum += a.path.signs[k] * res.outcome;
    }
    run.announcements[a.player] = sum / std::sqrt(static_cast<double>(a.path.size()));
  }
  run.q2_correction = engine::message_offset(rec.Q2, m.s);
  run.reconstructed = reconstruct(run.announcements, m, run.q2_correction);
  return run;
}

BroadcastRun BroadcastSimulator::run_random_round(std::uint64_t round, std::optional<int> sender) const {
  // A separate stream from the one run_round uses for the same round index.
  RandomStream rng(config_.seed ^ 0x9e3779b97f4a7c15ULL, round);
  const int drawn = static_cast<int>(rng.below(static_cast<std::uint64_t>(config_.model.n)));
  const double r = rng.normal(0.0, config_.tau);
  return run_round(sender.value_or(drawn), r, round);
}

BroadcastRun run_round(const ProtocolConfig& config, int sender, double r, std::uint64_t round) {
  return BroadcastSimulator(config).run_round(sender, r, round);
}

double reconstruct(const Eigen::VectorXd& m, const closed_form::CovarianceModel& model, double q2_correction) {
  if (m.size() != model.n) throw ValidationError("announcement vector length must equal n");
  const double total = static_cast<double>(model.n) * model.w;
  return std::sqrt(static_cast<double>(model.w) / total) * m.sum() - q2_correction;
}

DvRound dv_round(int n, int d, const std::vector<int>& messages, std::uint64_t seed, std::uint64_t round) {
  if (n < 2) throw ValidationError("parity protocol needs n >= 2");
  if (d < 2) throw ValidationError("parity protocol needs d >= 2");
  if (static_cast<int>(messages.size()) != n) throw ValidationError("need one message per player");
  long total = 0;
  for (int r : messages) {
    if (r < 0 || r >= d) throw ValidationError("messages must lie in [0, d)");
    total += r;
  }
  RandomStream rng(seed, round);
  DvRound out;
  out.announcements.resize(n);
  long partial = 0;
  for (int j = 0; j + 1 < n; ++j) {
    out.announcements[j] = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    partial += out.announcements[j];
  }
  out.announcements[n - 1] = static_cast<int>(((total - partial) % d + d) % d);
  out.total = static_cast<int>(total % d);
  return out;
}

}  // namespace cvab::protocol
