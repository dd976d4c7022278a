#include "cvab/random.hpp"

namespace cvab {

namespace {
std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x63766162u};
  return std::mt19937_64(seq);
}
}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(seeded_engine(seed, stream)) {}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::normal(double mean, double stddev) { return mean + stddev * normal_(engine_); }

double RandomStream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

std::uint64_t RandomStream::below(std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

}  // namespace cvab
