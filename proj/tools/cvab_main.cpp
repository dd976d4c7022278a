#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "cvab/errors.hpp"
#include "cvab/version.hpp"

namespace {

using namespace cvab::cli;

void add_common(CLI::App* sub, Common& common, bool seeded) {
  if (seeded) sub->add_option("--seed", common.seed, "RNG seed");
  sub->add_option("--format", common.format, "Output format");
  sub->add_option("--out", common.out, "Output file (relative paths resolve against CVAB_OUT_DIR)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-variable anonymous broadcasting: simulation and analysis"};
  app.set_version_flag("--version", std::string(cvab::kToolVersion));
  app.require_subcommand(1);

  Common common;
  StateArgs state;
  SimulateArgs sim;
  AnalyzeArgs an;
  ContourArgs con;
  PercolationArgs perc;
  ZenoArgs zeno;
  SqueezingArgs sq;

  auto* st = app.add_subcommand("state", "Build a cluster state, optionally reduce it to the surface code");
  st->add_option("--rows", state.rows, "Vertex rows")->capture_default_str();
  st->add_option("--cols", state.cols, "Vertex columns")->capture_default_str();
  st->add_option("--boundary", state.boundary, "toroidal or open")->capture_default_str();
  st->add_option("--s", state.s, "Squeezing factor")->capture_default_str();
  st->add_flag("--reduce", state.reduce, "Measure vertex and face nodes");
  st->add_option("--outcomes", state.outcomes, "zeros or sampled")->capture_default_str();
  add_common(st, common, true);

  auto* si = app.add_subcommand("simulate", "Run broadcast rounds");
  si->add_option("--n", sim.n, "Players")->capture_default_str();
  si->add_option("--w", sim.w, "Wedge width")->capture_default_str();
  auto* s_opt = si->add_option("--s", sim.s, "Squeezing factor");
  si->add_option("--s-db", sim.s_db, "Squeezing in dB (direct)")->excludes(s_opt);
  si->add_option("--s2", sim.s2, "Second squeezing factor")->capture_default_str();
  si->add_option("--tau", sim.tau, "Message standard deviation")->capture_default_str();
  si->add_option("--sender", sim.sender, "Sender, 1-based (0: random each round)")->capture_default_str();
  si->add_option("--message", sim.message, "Fixed message r (needs --sender)");
  si->add_option("--rounds", sim.rounds, "Rounds")->capture_default_str();
  si->add_option("--boundary", sim.boundary, "toroidal or open")->capture_default_str();
  si->add_flag("--engine", sim.engine, "Use the full Gaussian engine");
  si->add_option("--engine-rows", sim.engine_rows, "Vertex rows for the engine lattice")->capture_default_str();
  add_common(si, common, true);

  auto* a = app.add_subcommand("analyze", "Anonymity report");
  a->add_option("--n", an.n, "Players")->capture_default_str();
  a->add_option("--w", an.w, "Wedge width")->capture_default_str();
  auto* as_opt = a->add_option("--s", an.s, "Squeezing factor");
  a->add_option("--s-db", an.s_db, "Squeezing in dB (direct)")->excludes(as_opt);
  a->add_option("--s2", an.s2, "Second squeezing factor")->capture_default_str();
  a->add_option("--capacity", an.capacity, "Channel capacity in bits");
  a->add_option("--tau", an.tau, "Message standard deviation");
  a->add_option("--alpha", an.alpha, "Signal-to-noise ratio");
  add_common(a, common, false);

  auto* c = app.add_subcommand("contour", "Identification probability over an (n, C) grid");
  auto* cs_opt = c->add_option("--s", con.s, "Squeezing factor");
  c->add_option("--s-db", con.s_db, "Squeezing in dB (direct)")->excludes(cs_opt);
  c->add_option("--s2", con.s2, "Second squeezing factor")->capture_default_str();
  c->add_option("--w", con.w, "Wedge width")->capture_default_str();
  c->add_option("--n-min", con.n_min, "Smallest n")->capture_default_str();
  c->add_option("--n-max", con.n_max, "Largest n")->capture_default_str();
  c->add_option("--c-max", con.c_max, "Largest capacity in bits")->capture_default_str();
  c->add_option("--c-step", con.c_step, "Capacity step in bits")->capture_default_str();
  c->add_option("--levels", con.levels, "Contour levels checked in JSON output");
  add_common(c, common, false);

  auto* p = app.add_subcommand("percolation", "Monte Carlo wedge failure probability");
  p->add_option("--rows", perc.rows, "Vertex rows (default 2w)");
  p->add_option("--cols", perc.cols, "Vertex columns (default w + 1 rounded up to even)");
  p->add_option("--boundary", perc.boundary, "toroidal or open (with --rows/--cols)")->capture_default_str();
  p->add_option("--w", perc.w, "Wedge width")->capture_default_str();
  p->add_option("--p-err", perc.p_err, "Edge loss probability")->capture_default_str();
  p->add_option("--trials", perc.trials, "Trials")->capture_default_str();
  p->add_option("--target", perc.target, "Target failure probability for the width planner");
  add_common(p, common, true);

  auto* z = app.add_subcommand("zeno", "Nullifier excitation under ancilla monitoring");
  z->add_option("--g", zeno.g, "Coupling")->capture_default_str();
  z->add_option("--delta", zeno.delta, "Ancilla decay")->capture_default_str();
  z->add_option("--gamma-err", zeno.gamma_err, "Error diffusion rate")->capture_default_str();
  z->add_option("--T", zeno.T, "Duration")->capture_default_str();
  z->add_option("--s", zeno.s, "Squeezing factor")->capture_default_str();
  z->add_option("--samples", zeno.samples, "Sample points after t = 0")->capture_default_str();
  add_common(z, common, false);

  auto* q = app.add_subcommand("squeezing", "Effective squeezing factor of a construction");
  q->add_option("--db", sq.db, "Source squeezing in dB")->capture_default_str();
  q->add_option("--construction", sq.construction, "surface, linear or direct")->capture_default_str();
  add_common(q, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (st->parsed()) run_state(common, state);
    if (si->parsed()) run_simulate(common, sim);
    if (a->parsed()) run_analyze(common, an);
    if (c->parsed()) run_contour(common, con);
    if (p->parsed()) run_percolation(common, perc);
    if (z->parsed()) run_zeno(common, zeno);
    if (q->parsed()) run_squeezing(common, sq);
  } catch (const cvab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cvab::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
