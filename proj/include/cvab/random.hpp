#pragma once

#include <cstdint>
#include <random>

namespace cvab {

/// Seeded random stream. Streams with the same seed but different stream ids
/// are independent, so batches can be split across workers without sharing state.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  double normal();
  double normal(double mean, double stddev);
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace cvab
