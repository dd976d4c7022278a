#pragma once

#include <cstdint>

#include "cvab/lattice.hpp"

namespace cvab::resilience {

/// exp(-(w/2) |p_err - 1/2|^{4/3})
double p_fail(double w, double p_err);

/// Least integer w with p_fail(w, p_err) <= target.
int min_width(double p_fail_target, double p_err);

struct PercolationEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int trials = 0;
  int failures = 0;
};

/// Fraction of trials in which losing each wedge edge with probability p_err
/// leaves no left-to-right crossing of the first wedge of width w (columns 0..w-1, row 0).
/// Trial t uses random stream (seed, t).
PercolationEstimate percolation_mc(const lattice::Lattice& lattice, int w, double p_err, int trials,
                                   std::uint64_t seed);

/// Torus whose height grows with w, so a detour may stray about w rows from
/// the arc: rows = 2w, cols = w + 1 rounded up to even.
lattice::Lattice square_wedge_lattice(int w);

/// percolation_mc on square_wedge_lattice(w).
PercolationEstimate percolation_mc(int w, double p_err, int trials, std::uint64_t seed);

}  // namespace cvab::resilience
