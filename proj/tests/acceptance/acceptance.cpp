// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance             run all criteria
//   acceptance --criterion N

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cvab/anonymity.hpp"
#include "cvab/attacker.hpp"
#include "cvab/calibration.hpp"
#include "cvab/chebyshev.hpp"
#include "cvab/closed_form.hpp"
#include "cvab/gaussian_state.hpp"
#include "cvab/percolation.hpp"
#include "cvab/protocol.hpp"
#include "cvab/surface_code.hpp"
#include "cvab/zeno.hpp"
#include "oracles.hpp"

using namespace cvab;
using closed_form::Boundary;
using closed_form::CovarianceModel;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

engine::MeasurementMoments engine_moments(const lattice::Lattice& lat, int n, int w, double s, int row) {
  const auto rec =
      engine::cluster_to_surface_code(engine::build_canonical_cluster(lat, s), lat, s, engine::OutcomeSource::zeros());
  const auto part = lattice::partition_wedges(lat, n, w, row);
  auto obs = engine::arc_observables(part);
  obs.push_back(engine::union_observable(part));
  return engine::measurement_covariance(rec.state, obs);
}

void criterion1(Outcome& o) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  const int pairs[][2] = {{2, 2}, {2, 3}, {4, 2}, {3, 4}};
  for (const auto& nw : pairs) {
    for (double s : {0.8, 1.0, 2.0}) {
      const int n = nw[0], w = nw[1];
      const lattice::Lattice lat(2, n * w, Boundary::toroidal);
      const auto mom = engine_moments(lat, n, w, s, 0);
      const Eigen::MatrixXd cf = closed_form::sigma_bar(CovarianceModel{n, w, s, Boundary::toroidal, 1.0});
      worst = std::max(worst, (mom.covariance.topLeftCorner(n, n) - cf).cwiseAbs().maxCoeff());
      worst = std::max(worst, std::abs(mom.covariance(n, n) - 0.5 / (s * s)));
    }
  }
  const double secs = seconds_since(t0);
  o.detail << "max |engine - closed form| = " << worst << " over 12 configurations, " << secs << " s";
  o.require(worst < 1e-9, "entries within 1e-9");
  o.require(secs < 60.0, "runtime < 1 min");
}

void criterion2(Outcome& o) {
  // The 3 x 3 open patch: three full-width lines of four edges each.
  const lattice::Lattice lat(3, 3, Boundary::open);
  double worst = 0.0;
  const int pairs[][2] = {{2, 2}, {4, 1}};
  for (const auto& nw : pairs) {
    for (double s : {0.8, 1.0, 2.0}) {
      for (int row = 0; row < 3; ++row) {
        const int n = nw[0], w = nw[1];
        const auto mom = engine_moments(lat, n, w, s, row);
        const double end = 0.5 / (s * s) + s * s / (2.0 * w);
        worst = std::max(worst, std::abs(mom.covariance(0, 0) - end));
        worst = std::max(worst, std::abs(mom.covariance(n - 1, n - 1) - end));
        worst = std::max(worst, std::abs(mom.covariance(n, n) - 0.5 / (s * s)));
        const Eigen::MatrixXd cf = closed_form::sigma_bar(CovarianceModel{n, w, s, Boundary::open, 1.0});
        worst = std::max(worst, (mom.covariance.topLeftCorner(n, n) - cf).cwiseAbs().maxCoeff());
      }
    }
  }
  o.detail << "max deviation from end-wedge/global/tridiagonal entries = " << worst;
  o.require(worst < 1e-9, "within 1e-9");
}

void criterion3(Outcome& o) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ux(-4.0, 4.0), ua(-2.0, 2.0);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const double x = ux(gen), a = ua(gen);
    for (int n = 1; n <= 12; ++n) {
      const auto d = anonymity::cheb_dets(n, x);
      const double t = oracle::dense_det(oracle::toeplitz(n, x));
      const double c = oracle::dense_det(oracle::circulant(n, x));
      const double p = oracle::dense_det(oracle::circulant_perturbed(n, x, a));
      worst = std::max(worst, std::abs(d.toeplitz - t) / std::abs(t));
      worst = std::max(worst, std::abs(d.circulant - c) / std::abs(c));
      worst = std::max(worst, std::abs(anonymity::det_circulant_perturbed(n, x, a) - p) / std::abs(p));
    }
  }
  o.detail << "max relative error over 100 draws, n <= 12: " << worst;
  o.require(worst < 1e-8, "relative error < 1e-8");
}

void criterion4(Outcome& o) {
  double worst = 0.0;
  for (int n = 3; n <= 30; ++n) {
    for (double eps : {1e-4, 1e-2, 0.2}) {
      for (double a : {0.1, 1.0, 10.0}) {
        const double cheb = anonymity::mutual_info_bound(n, eps, a);
        const double det = anonymity::mutual_info_bound_det_ratio(n, eps, a);
        worst = std::max(worst, std::abs(cheb - det) / std::abs(det));
      }
    }
  }
  o.detail << "max relative difference Chebyshev vs determinant ratio: " << worst;
  o.require(worst < 1e-9, "relative difference < 1e-9");
}

void criterion5(Outcome& o) {
  using calibration::Construction;
  const double s5 = calibration::effective_s(5.0, Construction::surface_macronode);
  const double l5 = calibration::effective_s(5.0, Construction::linear_macronode);
  const double s10 = calibration::effective_s(10.0, Construction::surface_macronode);
  const double db5 = calibration::effective_db(s5);
  const double dbl5 = calibration::effective_db(l5);
  o.detail << "surface 5 dB: s = " << s5 << " (" << db5 << " dB); linear 5 dB: s = " << l5 << " (" << dbl5
           << " dB); surface 10 dB: s = " << s10;
  o.require(std::abs(s5 - 0.5965) <= 1e-4, "surface 5 dB s = 0.5965");
  o.require(std::abs(db5 + 4.488) <= 1e-3, "surface 5 dB = -4.488 dB");
  o.require(std::abs(l5 - 1.006) <= 1e-3, "linear 5 dB s = 1.006");
  o.require(std::abs(dbl5 - 0.05297) <= 5e-4, "linear 5 dB = +0.05297 dB");
  o.require(std::abs(s10 - 1.112) <= 1e-3, "surface 10 dB s = 1.112");
}

void criterion6(Outcome& o) {
  const double c_ghz[] = {0.25, 0.5, 0.75, 1.0};
  const int ghz[] = {17, 8, 5, 4};
  o.detail << "GHZ:";
  for (int k = 0; k < 4; ++k) {
    const auto r = anonymity::semi_anonymous_max_n(anonymity::epsilon(1.006, 1), anonymity::alpha_for_capacity(c_ghz[k]));
    const int got = r.max_n.value_or(-1);
    o.detail << " " << got;
    o.require(got == ghz[k], "GHZ entry " + std::to_string(ghz[k]));
  }
  const double c_surf[] = {0.25, 0.5};
  const int surf[] = {11, 5};
  o.detail << "; surface:";
  for (int k = 0; k < 2; ++k) {
    const auto r =
        anonymity::semi_anonymous_max_n(anonymity::epsilon(1.112, 6), anonymity::alpha_for_capacity(c_surf[k]));
    const int got = r.max_n.value_or(-1);
    o.detail << " " << got;
    o.require(got == surf[k], "surface entry " + std::to_string(surf[k]));
  }
}

void criterion7(Outcome& o) {
  const double c3 = anonymity::capacity(3.0), c1 = anonymity::capacity(1.0), c0 = anonymity::capacity(0.414);
  o.detail << "C(3) = " << c3 << ", C(1) = " << c1 << ", C(0.414) = " << c0 << " bits";
  o.require(std::abs(c3 - 1.0) <= 1e-3, "C(3) = 1");
  o.require(std::abs(c1 - 0.5) <= 1e-3, "C(1) = 0.5");
  o.require(std::abs(c0 - 0.25) <= 1e-3, "C(0.414) = 0.25");
}

void criterion8(Outcome& o) {
  const auto t0 = Clock::now();
  const double s = calibration::effective_s(20.0, calibration::Construction::direct);
  std::vector<int> ns;
  for (int n = 3; n <= 100; ++n) ns.push_back(n);
  std::vector<double> cs;
  for (int k = 0; k <= 300; ++k) cs.push_back(0.01 * k);
  const auto grid = anonymity::figure2_grid(s, 6, ns, cs);
  bool exact = true, monotone = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].C_bits == 0.0 && grid[i].p_identify != 1.0 / grid[i].n) exact = false;
    if (i > 0 && grid[i].n == grid[i - 1].n && grid[i].p_identify < grid[i - 1].p_identify) monotone = false;
  }
  const double secs = seconds_since(t0);
  o.detail << grid.size() << " grid points at s = " << s << ", w = 6; levels attained:";
  bool levels = true;
  for (double level : {0.01, 0.02, 0.03}) {
    const bool hit = anonymity::contour_attained(grid, level);
    o.detail << " " << level << (hit ? " yes" : " no");
    levels = levels && hit;
  }
  o.detail << "; " << secs << " s";
  o.require(exact, "p(n, 0) = 1/n");
  o.require(monotone, "monotone in C");
  o.require(levels, "contour levels attained");
  o.require(secs < 60.0, "runtime < 1 min");
}

void criterion9(Outcome& o) {
  const auto t0 = Clock::now();
  const CovarianceModel m{10, 6, 10.0, Boundary::toroidal, 1.0};
  const double a = anonymity::alpha_for_capacity(1.0);
  const double tau = anonymity::tau_for_alpha(a, 10.0);
  const double eps = anonymity::epsilon(10.0, 6);
  const double bound = anonymity::mutual_info_bound(10, eps, a);
  const double p_id = anonymity::identification_probability(10, eps, a);
  const auto est = anonymity::empirical_attack(m, tau, 100000, 9);
  const double secs = seconds_since(t0);
  o.detail << "MAP success " << est.map_success_rate << " +- " << est.success_std_error << " vs p_identify " << p_id
           << "; plug-in I " << est.empirical_I_bits << " +- " << est.I_std_error << " bits vs bound " << bound
           << "; " << secs << " s";
  o.require(est.map_success_rate <= p_id + 3.0 * est.success_std_error, "MAP success <= p_identify + 3 sigma");
  o.require(est.empirical_I_bits <= bound + 3.0 * est.I_std_error, "plug-in I <= bound + 3 sigma");
  o.require(secs < 300.0, "runtime < 5 min");
}

void criterion10(Outcome& o) {
  const auto t0 = Clock::now();
  const int w_min = resilience::min_width(std::exp(-1.0), 0.06);
  o.detail << "min_width(1/e, 0.06) = " << w_min;
  o.require(w_min == 6, "min_width = 6");

  const int trials = 4000;
  bool up = true;
  o.detail << "; failures at w = 6 for p_err 0.05/0.15/0.3/0.45:";
  resilience::PercolationEstimate prev{};
  for (double p : {0.05, 0.15, 0.3, 0.45}) {
    const auto cur = resilience::percolation_mc(6, p, trials, 31);
    o.detail << " " << cur.estimate;
    if (cur.estimate + 3.0 * std::hypot(cur.std_error, prev.std_error) < prev.estimate) up = false;
    prev = cur;
  }
  bool down = true;
  o.detail << "; at p_err 0.45 for w 4..12:";
  prev = resilience::percolation_mc(4, 0.45, trials, 37);
  o.detail << " " << prev.estimate;
  for (int w = 5; w <= 12; ++w) {
    const auto cur = resilience::percolation_mc(w, 0.45, trials, 37);
    o.detail << " " << cur.estimate;
    if (cur.estimate > prev.estimate + 3.0 * std::hypot(cur.std_error, prev.std_error)) down = false;
    prev = cur;
  }
  const double secs = seconds_since(t0);
  o.detail << "; " << secs << " s";
  o.require(up, "monotone in p_err");
  o.require(down, "decreasing in w");
  o.require(secs < 300.0, "runtime < 5 min");
}

void criterion11(Outcome& o) {
  const auto good = resilience::zeno_simulate(resilience::ZenoConfig{1.0, 10.0, 0.01, 40.0});
  const auto broken = resilience::zeno_simulate(resilience::ZenoConfig{1.0, 200.0, 0.01, 40.0});
  const auto clean = resilience::zeno_simulate(resilience::ZenoConfig{1.0, 10.0, 0.0, 40.0});
  double clean_max = 0.0;
  for (double e : clean.excitation) clean_max = std::max(clean_max, std::abs(e));
  const double g = good.steady_state.value_or(NAN), b = broken.steady_state.value_or(NAN);
  o.detail << "steady excitation good " << g << " vs broken " << b << " (at T = 40: " << good.excitation.back()
           << " vs " << broken.excitation.back() << "); gamma_err = 0 max " << clean_max;
  o.require(g < b, "good regime below broken regime");
  o.require(good.excitation.back() < broken.excitation.back(), "ordering at T = 40");
  o.require(clean_max < 1e-9, "no excitation without errors");
}

void criterion12(Outcome& o) {
  protocol::ProtocolConfig cfg;
  cfg.model = CovarianceModel{4, 6, 10.0, Boundary::toroidal, 1.0};
  cfg.tau = 1.0;
  cfg.seed = 12;
  const protocol::BroadcastSimulator sim(cfg);
  const int rounds = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < rounds; ++k) {
    const double m = sim.run_round(k % 4, 1.0, static_cast<std::uint64_t>(k)).reconstructed;
    sum += m;
    sum_sq += m * m;
  }
  const double mean = sum / rounds;
  const double var = (sum_sq - rounds * mean * mean) / (rounds - 1.0);
  const double se = std::sqrt(var / rounds);
  o.detail << "mean(M) = " << mean << " +- " << se << ", Var(M) = " << var << " (target 0.005)";
  o.require(std::abs(mean - 1.0) <= 3.0 * se, "mean within 3 std-errors");
  o.require(std::abs(var - 0.005) <= 0.03 * 0.005, "variance within 3%");

  // n = 4, d = 2: every 3-subset of announcements is uniform over Z_2^3.
  std::vector<std::vector<long>> counts(4, std::vector<long>(8, 0));
  for (int k = 0; k < rounds; ++k) {
    const auto r = protocol::dv_round(4, 2, {1, 0, 1, 1}, 12, static_cast<std::uint64_t>(k));
    for (int skip = 0; skip < 4; ++skip) {
      int cell = 0;
      for (int j = 0; j < 4; ++j) {
        if (j != skip) cell = 2 * cell + r.announcements[j];
      }
      counts[skip][cell]++;
    }
  }
  double min_p = 1.0;
  for (const auto& c : counts) min_p = std::min(min_p, oracle::chi_square_uniform_pvalue(c));
  o.detail << "; DV 3-subset chi-square min p = " << min_p;
  o.require(min_p > 0.01, "DV chi-square p > 0.01");
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> list = {
      {"engine vs closed-form covariance", criterion1},
      {"open-boundary variant", criterion2},
      {"Chebyshev determinant identities", criterion3},
      {"bound two-path equality", criterion4},
      {"calibration numbers", criterion5},
      {"semi-anonymity tables", criterion6},
      {"capacity point checks", criterion7},
      {"identification grid properties", criterion8},
      {"attacker consistency", criterion9},
      {"percolation planner", criterion10},
      {"Zeno regime property", criterion11},
      {"protocol statistics", criterion12},
  };
  return list;
}

bool run(int k) {
  const auto& [name, fn] = criteria()[k - 1];
  Outcome o;
  try {
    fn(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  std::printf("criterion %2d %s: %s -- %s\n", k, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const int count = static_cast<int>(criteria().size());
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      const int k = std::atoi(argv[++i]);
      if (k < 1 || k > count) {
        std::fprintf(stderr, "criterion must be 1..%d\n", count);
        return 1;
      }
      selected.push_back(k);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 1;
    }
  }
  if (selected.empty()) {
    for (int k = 1; k <= count; ++k) selected.push_back(k);
  }
  int failed = 0;
  for (int k : selected) failed += run(k) ? 0 : 1;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(selected.size()) - failed, selected.size());
  return failed == 0 ? 0 : 1;
}
