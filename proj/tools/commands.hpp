#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cvab::cli {

/// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 0;
  std::string format;
  std::string out;
};

struct StateArgs {
  int rows = 2;
  int cols = 4;
  std::string boundary = "toroidal";
  double s = 1.0;
  bool reduce = false;
  std::string outcomes = "zeros";
};

struct SimulateArgs {
  int n = 4;
  int w = 6;
  std::optional<double> s;
  std::optional<double> s_db;
  double s2 = 1.0;
  double tau = 1.0;
  int sender = 0;  // 1-based; 0 draws a sender per round
  std::optional<double> message;
  int rounds = 1;
  std::string boundary = "toroidal";
  bool engine = false;
  int engine_rows = 2;
};

struct AnalyzeArgs {
  int n = 10;
  int w = 6;
  std::optional<double> s;
  std::optional<double> s_db;
  double s2 = 1.0;
  std::optional<double> capacity;
  std::optional<double> tau;
  std::optional<double> alpha;
};

struct ContourArgs {
  std::optional<double> s;
  std::optional<double> s_db;
  double s2 = 1.0;
  int w = 6;
  int n_min = 3;
  int n_max = 100;
  double c_max = 3.0;
  double c_step = 0.1;
  std::vector<double> levels{0.01, 0.02, 0.03};
};

struct PercolationArgs {
  // Both unset: the square wedge lattice for w.
  std::optional<int> rows;
  std::optional<int> cols;
  std::string boundary = "toroidal";
  int w = 6;
  double p_err = 0.06;
  int trials = 10000;
  std::optional<double> target;
};

struct ZenoArgs {
  double g = 1.0;
  double delta = 10.0;
  double gamma_err = 0.01;
  double T = 40.0;
  double s = 1.0;
  int samples = 200;
};

struct SqueezingArgs {
  double db = 5.0;
  std::string construction = "surface";
};

void run_state(const Common& common, const StateArgs& args);
void run_simulate(const Common& common, const SimulateArgs& args);
void run_analyze(const Common& common, const AnalyzeArgs& args);
void run_contour(const Common& common, const ContourArgs& args);
void run_percolation(const Common& common, const PercolationArgs& args);
void run_zeno(const Common& common, const ZenoArgs& args);
void run_squeezing(const Common& common, const SqueezingArgs& args);

}  // namespace cvab::cli
