#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cvab/closed_form.hpp"

namespace cvab::protocol {

/// Largest cluster (in modes) the engine path will build.
inline constexpr int kEngineModeCap = 256;

struct ProtocolConfig {
  closed_form::CovarianceModel model;
  double tau = 0.0;
  bool engine_path = false;
  std::uint64_t seed = 0;
  /// Vertex rows of the lattice used by the engine path.
  int engine_rows = 2;
};

struct BroadcastRun {
  int sender = 0;  // 0-based
  double message = 0.0;
  Eigen::VectorXd announcements;
  double reconstructed = 0.0;
  double q2_correction = 0.0;
  std::uint64_t round = 0;
};

/// Runs broadcast rounds for one configuration. Round k draws from random
/// stream (seed, k), so rounds can be replayed or split across workers.
class BroadcastSimulator {
 public:
  explicit BroadcastSimulator(ProtocolConfig config);
  ~BroadcastSimulator();
  BroadcastSimulator(BroadcastSimulator&&) noexcept;
  BroadcastSimulator& operator=(BroadcastSimulator&&) noexcept;

  const ProtocolConfig& config() const { return config_; }

  BroadcastRun run_round(int sender, double r, std::uint64_t round) const;
  /// Message r ~ N(0, tau^2); the sender is uniform over players unless fixed.
  BroadcastRun run_random_round(std::uint64_t round, std::optional<int> sender = std::nullopt) const;

 private:
  struct Engine;
  ProtocolConfig config_;
  Eigen::MatrixXd chol_;
  std::unique_ptr<Engine> engine_;
};

BroadcastRun run_round(const ProtocolConfig& config, int sender, double r, std::uint64_t round = 0);

/// Weighted sum |P2|^{-1/2} sum_j |P2(j)|^{1/2} m_j minus the string-shift correction.
double reconstruct(const Eigen::VectorXd& m, const closed_form::CovarianceModel& model, double q2_correction = 0.0);

struct DvRound {
  std::vector<int> announcements;
  int total = 0;
};

/// Ideal qudit parity protocol: announcements uniform subject to summing to the
/// total of the messages mod d.
DvRound dv_round(int n, int d, const std::vector<int>& messages, std::uint64_t seed, std::uint64_t round = 0);

}  // namespace cvab::protocol
