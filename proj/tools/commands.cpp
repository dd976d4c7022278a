#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cvab/anonymity.hpp"
#include "cvab/calibration.hpp"
#include "cvab/errors.hpp"
#include "cvab/gaussian_state.hpp"
#include "cvab/percolation.hpp"
#include "cvab/protocol.hpp"
#include "cvab/serialization.hpp"
#include "cvab/surface_code.hpp"
#include "cvab/version.hpp"
#include "cvab/zeno.hpp"

namespace cvab::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string num(double x) { return json(x).dump(); }

void write_output(const Common& common, const std::string& text) {
  if (common.out.empty() || common.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::filesystem::path path(common.out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("CVAB_OUT_DIR"); dir != nullptr && *dir != '\0') path = std::filesystem::path(dir) / path;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file " + path.string());
  f << text;
  if (!f) throw ValidationError("failed writing output file " + path.string());
}

ordered_json header(const std::string& sub, const ordered_json& params, std::optional<std::uint64_t> seed) {
  ordered_json h;
  h["tool_version"] = kToolVersion;
  h["subcommand"] = sub;
  h["params"] = params;
  h["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  return h;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw ValidationError("unsupported --format '" + format + "' (expected " + list + ")");
}

double resolve_s(const std::optional<double>& s, const std::optional<double>& s_db) {
  if (s && s_db) throw ValidationError("give either --s or --s-db, not both");
  if (s) return *s;
  if (s_db) return calibration::effective_s(*s_db, calibration::Construction::direct);
  throw ValidationError("one of --s or --s-db is required");
}

ordered_json vec(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

void run_state(const Common& common, const StateArgs& a) {
  const std::string format = common.format.empty() ? "json" : common.format;
  check_format(format, {"json"});
  if (a.outcomes != "zeros" && a.outcomes != "sampled") throw ValidationError("--outcomes must be zeros or sampled");
  const lattice::Lattice lat(a.rows, a.cols, lattice::boundary_from_string(a.boundary));
  const auto cluster = engine::build_canonical_cluster(lat, a.s);
  const bool stochastic = a.reduce && a.outcomes == "sampled";

  ordered_json params;
  params["rows"] = a.rows;
  params["cols"] = a.cols;
  params["boundary"] = a.boundary;
  params["s"] = a.s;
  params["reduce"] = a.reduce;
  params["outcomes"] = a.outcomes;
  ordered_json out = header("state", params, stochastic ? std::optional(common.seed) : std::nullopt);
  out["lattice"] = lattice_to_json(lat);
  if (!a.reduce) {
    out["state"] = state_to_json(cluster);
  } else {
    RandomStream rng(common.seed, 0);
    const auto src = stochastic ? engine::OutcomeSource::sampled(rng) : engine::OutcomeSource::zeros();
    const auto rec = engine::cluster_to_surface_code(cluster, lat, a.s, src);
    out["state"] = state_to_json(rec.state);
    out["Q1"] = rec.Q1 ? ordered_json(*rec.Q1) : ordered_json(nullptr);
    out["Q2"] = rec.Q2;
    out["p2_row"] = rec.p2_row;
    double worst = 0.0;
    for (const auto& v : lat.vertices())
      worst = std::max(worst, engine::excitation(rec.state, engine::vertex_nullifier(lat, v.index, a.s)));
    for (const auto& f : lat.faces())
      worst = std::max(worst, engine::excitation(rec.state, engine::face_nullifier(lat, f.index, a.s)));
    out["max_nullifier_excitation"] = worst;
  }
  write_output(common, dump(out));
}

void run_simulate(const Common& common, const SimulateArgs& a) {
  const std::string format = common.format.empty() ? "jsonl" : common.format;
  check_format(format, {"jsonl", "csv"});
  if (a.rounds < 1) throw ValidationError("--rounds must be >= 1");
  protocol::ProtocolConfig cfg;
  cfg.model.n = a.n;
  cfg.model.w = a.w;
  cfg.model.s = resolve_s(a.s, a.s_db);
  cfg.model.s2 = a.s2;
  cfg.model.boundary = lattice::boundary_from_string(a.boundary);
  cfg.tau = a.tau;
  cfg.engine_path = a.engine;
  cfg.engine_rows = a.engine_rows;
  cfg.seed = common.seed;
  if (a.sender < 0 || a.sender > a.n) throw IndexError("--sender must lie in 1..n (or 0 for a random sender)");
  if (a.message && a.sender == 0) throw ValidationError("--message needs --sender");
  const protocol::BroadcastSimulator sim(cfg);
  const std::optional<int> sender = a.sender > 0 ? std::optional(a.sender - 1) : std::nullopt;

  ordered_json params;
  params["n"] = a.n;
  params["w"] = a.w;
  params["s"] = cfg.model.s;
  params["s2"] = a.s2;
  params["tau"] = a.tau;
  params["sender"] = a.sender > 0 ? ordered_json(a.sender) : ordered_json(nullptr);
  params["message"] = a.message ? ordered_json(*a.message) : ordered_json(nullptr);
  params["rounds"] = a.rounds;
  params["boundary"] = a.boundary;
  params["engine"] = a.engine;
  if (a.engine) params["engine_rows"] = a.engine_rows;

  std::ostringstream os;
  if (format == "jsonl") {
    os << header("simulate", params, common.seed).dump() << "\n";
  } else {
    os << "# seed=" << common.seed << "\n";
    os << "a,r";
    for (int j = 1; j <= a.n; ++j) os << ",m" << j;
    os << ",M\n";
  }
  for (int k = 0; k < a.rounds; ++k) {
    const auto round = static_cast<std::uint64_t>(k);
    const protocol::BroadcastRun run = a.message ? sim.run_round(sender.value_or(0), *a.message, round)
                                                 : sim.run_random_round(round, sender);
    if (format == "jsonl") {
      ordered_json line;
      line["round"] = k;
      line["sender"] = run.sender + 1;
      line["r"] = run.message;
      line["m"] = vec(run.announcements);
      line["M"] = run.reconstructed;
      if (a.engine) line["q2_correction"] = run.q2_correction;
      os << line.dump() << "\n";
    } else {
      os << run.sender + 1 << "," << num(run.message);
      for (Eigen::Index j = 0; j < run.announcements.size(); ++j) os << "," << num(run.announcements[j]);
      os << "," << num(run.reconstructed) << "\n";
    }
  }
  write_output(common, os.str());
}

void run_analyze(const Common& common, const AnalyzeArgs& a) {
  const std::string format = common.format.empty() ? "json" : common.format;
  check_format(format, {"json"});
  const double s = resolve_s(a.s, a.s_db);
  const int given = (a.capacity ? 1 : 0) + (a.tau ? 1 : 0) + (a.alpha ? 1 : 0);
  if (given != 1) throw ValidationError("give exactly one of --capacity, --tau, --alpha");
  double tau = 0.0;
  if (a.tau) tau = *a.tau;
  if (a.alpha) tau = anonymity::tau_for_alpha(*a.alpha, s, a.s2);
  if (a.capacity) tau = anonymity::tau_for_alpha(anonymity::alpha_for_capacity(*a.capacity), s, a.s2);

  const auto r = anonymity::analyze(a.n, s, a.w, tau, a.s2);
  const auto cond = anonymity::high_anonymity_condition(a.n, r.epsilon, r.alpha);
  const auto semi = anonymity::semi_anonymous_max_n(r.epsilon, r.alpha);

  ordered_json params;
  params["n"] = a.n;
  params["w"] = a.w;
  params["s"] = s;
  params["s2"] = a.s2;
  params["tau"] = tau;
  ordered_json out = header("analyze", params, std::nullopt);
  ordered_json rep;
  rep["epsilon"] = r.epsilon;
  rep["alpha"] = r.alpha;
  rep["alpha_epsilon"] = r.alpha * r.epsilon;
  rep["capacity_bits"] = r.capacity_bits;
  rep["I_bound_bits"] = r.I_bound_bits;
  rep["H_A_given_M_bits"] = r.H_A_given_M_bits;
  rep["p_identify"] = r.p_identify;
  rep["high_anonymity"] = {{"n_squared", cond.lhs},
                           {"expanded_leak_factor", cond.rhs},
                           {"alpha_epsilon_over_6", cond.ratio},
                           {"threshold", anonymity::kHighAnonymityRatio},
                           {"satisfied", cond.satisfied}};
  rep["semi_anonymous_max_n"] = semi.max_n ? ordered_json(*semi.max_n) : ordered_json(nullptr);
  rep["semi_anonymous_capped"] = semi.capped;
  out["report"] = rep;
  write_output(common, dump(out));
}

void run_contour(const Common& common, const ContourArgs& a) {
  const std::string format = common.format.empty() ? "csv" : common.format;
  check_format(format, {"csv", "json"});
  const double s = resolve_s(a.s, a.s_db);
  if (a.n_min < 3 || a.n_max < a.n_min) throw ValidationError("need 3 <= --n-min <= --n-max");
  if (!(a.c_step > 0.0) || !(a.c_max >= 0.0)) throw ValidationError("need --c-step > 0 and --c-max >= 0");
  std::vector<int> ns;
  for (int n = a.n_min; n <= a.n_max; ++n) ns.push_back(n);
  std::vector<double> cs;
  const int steps = static_cast<int>(std::floor(a.c_max / a.c_step + 1e-9));
  for (int k = 0; k <= steps; ++k) cs.push_back(k * a.c_step);
  const auto grid = anonymity::figure2_grid(s, a.w, ns, cs, a.s2);

  std::ostringstream os;
  if (format == "csv") {
    os << "n,C_bits,alpha,epsilon,I_bound_bits,p_identify\n";
    for (const auto& g : grid) {
      os << g.n << "," << num(g.C_bits) << "," << num(g.alpha) << "," << num(g.epsilon) << ","
         << num(g.I_bound_bits) << "," << num(g.p_identify) << "\n";
    }
    write_output(common, os.str());
    return;
  }
  ordered_json params;
  params["s"] = s;
  params["s2"] = a.s2;
  params["w"] = a.w;
  params["n_min"] = a.n_min;
  params["n_max"] = a.n_max;
  params["c_max"] = a.c_max;
  params["c_step"] = a.c_step;
  ordered_json out = header("contour", params, std::nullopt);
  ordered_json pts = ordered_json::array();
  for (const auto& g : grid) {
    pts.push_back({{"n", g.n},
                   {"C_bits", g.C_bits},
                   {"alpha", g.alpha},
                   {"epsilon", g.epsilon},
                   {"I_bound_bits", g.I_bound_bits},
                   {"p_identify", g.p_identify}});
  }
  ordered_json levels = ordered_json::array();
  for (double l : a.levels) levels.push_back({{"level", l}, {"attained", anonymity::contour_attained(grid, l)}});
  out["levels"] = levels;
  out["grid"] = pts;
  write_output(common, dump(out));
}

void run_percolation(const Common& common, const PercolationArgs& a) {
  const std::string format = common.format.empty() ? "json" : common.format;
  check_format(format, {"json"});
  if (a.rows.has_value() != a.cols.has_value()) throw ValidationError("give both --rows and --cols, or neither");
  const lattice::Lattice lat = a.rows ? lattice::Lattice(*a.rows, *a.cols, lattice::boundary_from_string(a.boundary))
                                      : resilience::square_wedge_lattice(a.w);
  const auto est = resilience::percolation_mc(lat, a.w, a.p_err, a.trials, common.seed);

  ordered_json params;
  params["rows"] = lat.rows();
  params["cols"] = lat.cols();
  params["boundary"] = lattice::to_string(lat.boundary());
  params["w"] = a.w;
  params["p_err"] = a.p_err;
  params["trials"] = a.trials;
  if (a.target) params["target"] = *a.target;
  ordered_json out = header("percolation", params, common.seed);
  out["estimate"] = est.estimate;
  out["std_error"] = est.std_error;
  out["failures"] = est.failures;
  out["p_fail_bound"] = a.p_err < 0.5 ? ordered_json(resilience::p_fail(a.w, a.p_err)) : ordered_json(nullptr);
  if (a.target) out["min_width"] = resilience::min_width(*a.target, a.p_err);
  write_output(common, dump(out));
}

void run_zeno(const Common& common, const ZenoArgs& a) {
  const std::string format = common.format.empty() ? "json" : common.format;
  check_format(format, {"json", "csv"});
  resilience::ZenoConfig cfg{a.g, a.delta, a.gamma_err, a.T, a.s, a.samples};
  const auto r = resilience::zeno_simulate(cfg);
  std::ostringstream os;
  if (format == "csv") {
    os << "t,excitation\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) os << num(r.times[k]) << "," << num(r.excitation[k]) << "\n";
    write_output(common, os.str());
    return;
  }
  ordered_json params;
  params["g"] = a.g;
  params["delta"] = a.delta;
  params["gamma_err"] = a.gamma_err;
  params["T"] = a.T;
  params["s"] = a.s;
  params["samples"] = a.samples;
  ordered_json out = header("zeno", params, std::nullopt);
  out["steady_state"] = r.steady_state ? ordered_json(*r.steady_state) : ordered_json(nullptr);
  out["final_excitation"] = r.excitation.back();
  out["step"] = r.step;
  out["min_uncertainty_margin"] = r.min_uncertainty_margin;
  out["times"] = r.times;
  out["excitation"] = r.excitation;
  write_output(common, dump(out));
}

void run_squeezing(const Common& common, const SqueezingArgs& a) {
  const std::string format = common.format.empty() ? "json" : common.format;
  check_format(format, {"json"});
  const auto spec = calibration::squeezing_spec(a.db, calibration::construction_from_string(a.construction));
  ordered_json params;
  params["db"] = a.db;
  params["construction"] = calibration::to_string(spec.construction);
  ordered_json out = header("squeezing", params, std::nullopt);
  out["xi"] = spec.xi;
  out["s"] = spec.s_effective;
  out["s_db"] = calibration::effective_db(spec.s_effective);
  write_output(common, dump(out));
}

}  // namespace cvab::cli
