#include "cvab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cvab/errors.hpp"
#include "cvab/random.hpp"

namespace cvab::resilience {

namespace {

double distance_term(double p_err) {
  if (!(p_err >= 0.0)) throw DomainError("error probability must be >= 0");
  if (p_err >= 0.5) throw AboveThresholdError("error probability at or above the 50% percolation threshold");
  return std::pow(0.5 - p_err, 4.0 / 3.0);
}

}  // namespace

double p_fail(double w, double p_err) {
  if (!(w >= 0.0)) throw ValidationError("width must be nonnegative");
  return std::exp(-0.5 * w * distance_term(p_err));
}

int min_width(double p_fail_target, double p_err) {
  if (!(p_fail_target > 0.0 && p_fail_target < 1.0)) throw DomainError("target failure probability must be in (0, 1)");
  const double bound = 2.0 * std::log(1.0 / p_fail_target) / distance_term(p_err);
  int w = static_cast<int>(std::ceil(bound));
  // Guard the ceiling against rounding in the bound.
  while (w > 0 && p_fail(w - 1, p_err) <= p_fail_target) --w;
  while (p_fail(w, p_err) > p_fail_target) ++w;
  return w;
}

PercolationEstimate percolation_mc(const lattice::Lattice& lattice, int w, double p_err, int trials,
                                   std::uint64_t seed) {
  if (trials < 1000) throw ValidationError("percolation estimate needs at least 1000 trials");
  if (!(p_err >= 0.0 && p_err <= 1.0)) throw DomainError("error probability must lie in [0, 1]");
  if (w < 1 || w > lattice.edge_columns()) throw ValidationError("wedge width does not fit the lattice");
  lattice::Arc wedge;
  wedge.row = 0;
  wedge.first_edge_col = 0;
  wedge.width = w;
  const std::vector<int> edges = lattice::wedge_edges(lattice, wedge);

  PercolationEstimate est;
  est.trials = trials;
  for (int t = 0; t < trials; ++t) {
    RandomStream rng(seed, static_cast<std::uint64_t>(t));
    std::set<int> lost;
    for (int e : edges) {
      if (rng.bernoulli(p_err)) lost.insert(e);
    }
    if (std::holds_alternative<lattice::Percolated>(lattice::reroute_path(lattice, lost, wedge))) ++est.failures;
  }
  est.estimate = static_cast<double>(est.failures) / trials;
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / trials);
  return est;
}

lattice::Lattice square_wedge_lattice(int w) {
  if (w < 1) throw ValidationError("wedge width must be >= 1");
  const int rows = 2 * w;
  const int cols = (w + 1) + (w + 1) % 2;
  return lattice::Lattice(rows, cols, lattice::Boundary::toroidal);
}

PercolationEstimate percolation_mc(int w, double p_err, int trials, std::uint64_t seed) {
  return percolation_mc(square_wedge_lattice(w), w, p_err, trials, seed);
}

}  // namespace cvab::resilience
