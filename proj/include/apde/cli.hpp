#pragma once

// Command-line wiring: a validated ExperimentConfig assembled from a JSON
// config file and/or flags (flags win), and a dispatcher that runs the
// named experiment and writes its reports.  Exit codes: 0 all verdicts
// pass or vacuous, 1 verdict failure, 2 runtime/config error (mapped by
// the caller from exceptions).

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apde/ap_signal.hpp"
#include "apde/diagnostics.hpp"
#include "apde/gallery.hpp"
#include "apde/io.hpp"
#include "apde/kinetic.hpp"
#include "apde/model.hpp"
#include "apde/solver.hpp"
#include "apde/version.hpp"

namespace apde::cli {

struct ExperimentConfig {
  std::string command;
  std::string model_path;
  std::string signal_path;
  std::string signal_b_path;
  std::vector<int> grid_n = {256};
  std::vector<double> grid_l = {1.0};
  double end_time = 1.0;
  double cfl_convective = 0.4;
  double cfl_diffusive = 0.25;
  double viscosity = 0.0;
  int diagnostic_stride = 1;
  int field_stride = 0;
  double delta = 2.5;
  std::vector<double> ell_schedule = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<int> refinement;
  double decay_threshold = 0.1;
  double persist_threshold = 0.9;
  int xi_nodes = 1024;        // kinetic xi grid (K)
  int omega_xi_nodes = 4096;  // quadrature nodes for the nondegeneracy integral
  int sphere_samples = 0;     // 0 = per-dimension default (720 / 4096)
  double eps_zero = 1e-6;
  std::string expect;  // optional verdict expectation
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  void validate() const {
    static const std::set<std::string> commands = {
        "spectrum",    "nondegeneracy", "simulate", "decay",
        "contraction", "kinetic-probe", "gallery"};
    if (!commands.count(command))
      throw std::invalid_argument("unknown command \"" + command + "\"");
    if (end_time < 0.0) throw std::invalid_argument("end_time must be >= 0");
    if (!(cfl_convective > 0.0) || cfl_convective > 1.0)
      throw std::invalid_argument("cfl_convective must be in (0,1]");
    if (!(cfl_diffusive > 0.0) || cfl_diffusive > 0.5)
      throw std::invalid_argument("cfl_diffusive must be in (0,0.5]");
    if (viscosity < 0.0) throw std::invalid_argument("viscosity must be >= 0");
    if (diagnostic_stride < 1)
      throw std::invalid_argument("diagnostic_stride must be >= 1");
    if (field_stride < 0) throw std::invalid_argument("field_stride must be >= 0");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    for (int n : grid_n)
      if (n < 4) throw std::invalid_argument("grid_n entries must be >= 4");
    for (double l : grid_l)
      if (!(l > 0.0)) throw std::invalid_argument("grid_l entries must be > 0");
    if (xi_nodes < 64) throw std::invalid_argument("xi_nodes must be >= 64");
    if (omega_xi_nodes < 16)
      throw std::invalid_argument("omega_xi_nodes must be >= 16");
    if (sphere_samples < 0)
      throw std::invalid_argument("sphere_samples must be >= 0");
    if (!(eps_zero > 0.0)) throw std::invalid_argument("eps_zero must be > 0");
    if (!(decay_threshold > 0.0))
      throw std::invalid_argument("decay_threshold must be > 0");
    if (!(persist_threshold > 0.0))
      throw std::invalid_argument("persist_threshold must be > 0");
  }

  io::ordered_json resolved() const {
    io::ordered_json j;
    j["command"] = command;
    j["model"] = model_path;
    j["signal"] = signal_path;
    j["signal_b"] = signal_b_path;
    j["grid_n"] = grid_n;
    j["grid_l"] = grid_l;
    j["end_time"] = end_time;
    j["cfl_convective"] = cfl_convective;
    j["cfl_diffusive"] = cfl_diffusive;
    j["viscosity"] = viscosity;
    j["diagnostic_stride"] = diagnostic_stride;
    j["field_stride"] = field_stride;
    j["delta"] = delta;
    j["ell_schedule"] = ell_schedule;
    j["refinement"] = refinement;
    j["decay_threshold"] = decay_threshold;
    j["persist_threshold"] = persist_threshold;
    j["xi_nodes"] = xi_nodes;
    j["omega_xi_nodes"] = omega_xi_nodes;
    j["sphere_samples"] = sphere_samples;
    j["eps_zero"] = eps_zero;
    j["expect"] = expect;
    j["out"] = out_dir;
    j["seed"] = seed;
    return j;
  }
};

namespace detail {

inline void apply_json_config(ExperimentConfig& cfg, const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "command",        "model",           "signal",          "signal_b",
      "grid_n",         "grid_l",          "end_time",        "cfl_convective",
      "cfl_diffusive",  "viscosity",       "diagnostic_stride", "field_stride",
      "delta",          "ell_schedule",    "refinement",      "decay_threshold",
      "persist_threshold", "xi_nodes",     "omega_xi_nodes",  "sphere_samples",
      "eps_zero",       "expect",          "out",             "seed"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw std::invalid_argument("unknown config key \"" + key + "\"");
  if (j.contains("command")) cfg.command = j.at("command").get<std::string>();
  if (j.contains("model")) cfg.model_path = j.at("model").get<std::string>();
  if (j.contains("signal")) cfg.signal_path = j.at("signal").get<std::string>();
  if (j.contains("signal_b"))
    cfg.signal_b_path = j.at("signal_b").get<std::string>();
  if (j.contains("grid_n")) cfg.grid_n = j.at("grid_n").get<std::vector<int>>();
  if (j.contains("grid_l")) cfg.grid_l = j.at("grid_l").get<std::vector<double>>();
  if (j.contains("end_time")) cfg.end_time = j.at("end_time").get<double>();
  if (j.contains("cfl_convective"))
    cfg.cfl_convective = j.at("cfl_convective").get<double>();
  if (j.contains("cfl_diffusive"))
    cfg.cfl_diffusive = j.at("cfl_diffusive").get<double>();
  if (j.contains("viscosity")) cfg.viscosity = j.at("viscosity").get<double>();
  if (j.contains("diagnostic_stride"))
    cfg.diagnostic_stride = j.at("diagnostic_stride").get<int>();
  if (j.contains("field_stride"))
    cfg.field_stride = j.at("field_stride").get<int>();
  if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
  if (j.contains("ell_schedule"))
    cfg.ell_schedule = j.at("ell_schedule").get<std::vector<double>>();
  if (j.contains("refinement"))
    cfg.refinement = j.at("refinement").get<std::vector<int>>();
  if (j.contains("decay_threshold"))
    cfg.decay_threshold = j.at("decay_threshold").get<double>();
  if (j.contains("persist_threshold"))
    cfg.persist_threshold = j.at("persist_threshold").get<double>();
  if (j.contains("xi_nodes")) cfg.xi_nodes = j.at("xi_nodes").get<int>();
  if (j.contains("omega_xi_nodes"))
    cfg.omega_xi_nodes = j.at("omega_xi_nodes").get<int>();
  if (j.contains("sphere_samples"))
    cfg.sphere_samples = j.at("sphere_samples").get<int>();
  if (j.contains("eps_zero")) cfg.eps_zero = j.at("eps_zero").get<double>();
  if (j.contains("expect")) cfg.expect = j.at("expect").get<std::string>();
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
}

inline Model load_model(const ExperimentConfig& cfg) {
  if (cfg.model_path.empty())
    throw std::invalid_argument("command \"" + cfg.command +
                                "\" requires --model");
  if (!std::filesystem::exists(cfg.model_path))
    throw std::runtime_error("model file not found: " + cfg.model_path);
  return Model::validate(io::model_spec_from_json(io::read_json(cfg.model_path)));
}

inline APSignal load_signal(const std::string& path, const char* what) {
  if (path.empty())
    throw std::invalid_argument(std::string("missing ") + what + " path");
  if (!std::filesystem::exists(path))
    throw std::runtime_error(std::string(what) + " file not found: " + path);
  return io::signal_from_json(io::read_json(path));
}

inline GridSpec make_grid(const ExperimentConfig& cfg, int dims) {
  std::vector<int> n = cfg.grid_n;
  std::vector<double> l = cfg.grid_l;
  if (static_cast<int>(n.size()) == 1 && dims == 2) n.push_back(n[0]);
  if (static_cast<int>(l.size()) == 1 && dims == 2) l.push_back(l[0]);
  return GridSpec(dims, std::move(l), std::move(n));
}

inline SolverConfig make_solver_config(const ExperimentConfig& cfg, Model model) {
  GridSpec grid = make_grid(cfg, model.dims());
  SolverConfig sc(std::move(model), std::move(grid));
  sc.cfl_convective = cfg.cfl_convective;
  sc.cfl_diffusive = cfg.cfl_diffusive;
  sc.end_time = cfg.end_time;
  sc.viscosity = cfg.viscosity;
  sc.diagnostic_stride = cfg.diagnostic_stride;
  sc.field_stride = cfg.field_stride;
  return sc;
}

inline io::ordered_json report_header(const ExperimentConfig& cfg) {
  io::ordered_json j;
  j["version"] = kVersion;
  j["command"] = cfg.command;
  j["seed"] = cfg.seed;
  j["config"] = cfg.resolved();
  return j;
}

inline int finish(const ExperimentConfig& cfg, io::ordered_json report,
                  bool pass, const std::string& verdict = "") {
  report["pass"] = pass;
  std::filesystem::create_directories(cfg.out_dir);
  io::write_json(std::filesystem::path(cfg.out_dir) / "report.json", report);
  if (!cfg.expect.empty() && !verdict.empty()) return verdict == cfg.expect ? 0 : 1;
  return pass ? 0 : 1;
}

inline int run_spectrum(const ExperimentConfig& cfg) {
  APSignal sig = load_signal(cfg.signal_path, "signal");
  auto report = report_header(cfg);
  auto mean = sig.mean_value();
  report["mean"] = {{"re", mean.real()}, {"im", mean.imag()}};
  report["n2"] = sig.n2();
  report["term_count"] = sig.term_count();
  report["is_real"] = sig.is_real();
  report["spectrum"] = io::to_json(sig.spectrum());
  std::filesystem::create_directories(cfg.out_dir);
  std::string csv;
  for (int ax = 0; ax < sig.dims(); ++ax) csv += "freq" + std::to_string(ax) + ",";
  csv += "re,im,abs\n";
  for (const auto& [key, term] : sig.terms()) {
    for (double f : term.freq) csv += io::format_double(f) + ",";
    csv += io::format_double(term.amp.real()) + "," +
           io::format_double(term.amp.imag()) + "," +
           io::format_double(std::abs(term.amp)) + "\n";
  }
  io::write_text(std::filesystem::path(cfg.out_dir) / "spectrum.csv", csv);
  report["spectrum_csv"] = "spectrum.csv";
  return finish(cfg, std::move(report), true);
}

inline int run_nondegeneracy(const ExperimentConfig& cfg) {
  Model model = load_model(cfg);
  DegeneracyReport rep = nondegeneracy_verdict(
      model, cfg.delta, cfg.ell_schedule, DegeneracyThresholds{},
      cfg.sphere_samples, cfg.omega_xi_nodes, cfg.seed, cfg.eps_zero);
  auto report = report_header(cfg);
  report["model"] = model.name();
  report["delta"] = rep.delta;
  report["ell_schedule"] = rep.ell_schedule;
  report["omega_values"] = rep.omega_values;
  io::ordered_json argsup = io::ordered_json::array();
  for (const auto& d : rep.argsup)
    argsup.push_back({{"tau", d.tau}, {"kappa", d.kappa}});
  report["argsup"] = std::move(argsup);
  report["verdict"] = to_string(rep.verdict);
  report["eps_zero"] = rep.eps_zero;
  report["max_measure"] = rep.max_measure;
  io::ordered_json nonzero = io::ordered_json::array();
  for (std::size_t i = 0; i < rep.measure_condition.size(); ++i)
    if (rep.measure_condition[i] > 0.0)
      nonzero.push_back({{"tau", rep.measure_directions[i].tau},
                         {"kappa", rep.measure_directions[i].kappa},
                         {"measure", rep.measure_condition[i]}});
  report["measure_condition_nonzero"] = std::move(nonzero);

  std::filesystem::create_directories(cfg.out_dir);
  std::string csv = "ell,omega\n";
  for (std::size_t i = 0; i < rep.ell_schedule.size(); ++i)
    csv += io::format_double(rep.ell_schedule[i]) + "," +
           io::format_double(rep.omega_values[i]) + "\n";
  io::write_text(std::filesystem::path(cfg.out_dir) / "omega.csv", csv);
  report["omega_csv"] = "omega.csv";

  bool conclusive = rep.verdict != DegeneracyReport::Verdict::inconclusive;
  return finish(cfg, std::move(report), conclusive, to_string(rep.verdict));
}

inline int run_simulate(const ExperimentConfig& cfg) {
  Model model = load_model(cfg);
  APSignal sig = load_signal(cfg.signal_path, "signal");
  SolverConfig sc = make_solver_config(cfg, std::move(model));
  Trajectory traj = run(sc, sig);
  MonotoneStatsReport stats = monotone_stats(traj);

  auto report = report_header(cfg);
  report["model"] = sc.model.name();
  report["steps"] = traj.step_count;
  report["max_principle_guaranteed"] = traj.max_principle_guaranteed;
  report["worst_second_moment_increase"] = stats.worst_second_moment_increase;
  report["worst_max_abs_excess"] = stats.worst_max_abs_excess;
  report["worst_mean_drift"] = stats.worst_mean_drift;
  std::filesystem::create_directories(cfg.out_dir);
  io::write_trajectory_csv(std::filesystem::path(cfg.out_dir) / "trajectory.csv",
                           traj);
  report["trajectory_csv"] = "trajectory.csv";
  if (!traj.snapshots.empty()) {
    io::write_field_snapshots(std::filesystem::path(cfg.out_dir) / "fields.bin",
                              std::filesystem::path(cfg.out_dir) / "fields.json",
                              traj);
    report["fields_bin"] = "fields.bin";
    report["fields_sidecar"] = "fields.json";
  }
  return finish(cfg, std::move(report), stats.pass,
                stats.pass ? "pass" : "fail");
}

inline int run_decay(const ExperimentConfig& cfg) {
  Model model = load_model(cfg);
  APSignal sig = load_signal(cfg.signal_path, "signal");
  SolverConfig sc = make_solver_config(cfg, std::move(model));
  std::vector<int> refinement = cfg.refinement;
  if (refinement.empty()) refinement = {cfg.grid_n.front()};
  DecayReport rep = decay_experiment(sc, sig, refinement, cfg.decay_threshold,
                                     cfg.persist_threshold);

  auto report = report_header(cfg);
  report["model"] = sc.model.name();
  report["verdict"] = to_string(rep.verdict);
  report["final_ratio"] = rep.final_ratio;
  report["monotone_violations"] = rep.monotone_violations;
  report["worst_violation"] = rep.worst_violation;
  io::ordered_json trend = io::ordered_json::array();
  for (const auto& [cells, ratio] : rep.refinement_trend)
    trend.push_back({{"cells", cells}, {"final_ratio", ratio}});
  report["refinement_trend"] = std::move(trend);

  std::filesystem::create_directories(cfg.out_dir);
  std::string csv = "time,distance\n";
  for (std::size_t n = 0; n < rep.times.size(); ++n)
    csv += io::format_double(rep.times[n]) + "," +
           io::format_double(rep.distances[n]) + "\n";
  io::write_text(std::filesystem::path(cfg.out_dir) / "decay.csv", csv);
  report["series_csv"] = "decay.csv";

  bool pass = rep.verdict != DecayReport::Verdict::inconclusive;
  return finish(cfg, std::move(report), pass, to_string(rep.verdict));
}

inline int run_contraction(const ExperimentConfig& cfg) {
  Model model = load_model(cfg);
  APSignal a = load_signal(cfg.signal_path, "signal");
  APSignal b = load_signal(cfg.signal_b_path, "signal_b");
  SolverConfig sc = make_solver_config(cfg, std::move(model));
  ContractionReport rep = contraction_experiment(sc, a, b);

  auto report = report_header(cfg);
  report["model"] = sc.model.name();
  report["max_step_increase"] = rep.max_step_increase;
  report["tolerance"] = rep.tolerance;
  report["verdict"] = rep.pass ? "pass" : "fail";
  std::filesystem::create_directories(cfg.out_dir);
  std::string csv = "time,distance\n";
  for (std::size_t n = 0; n < rep.times.size(); ++n)
    csv += io::format_double(rep.times[n]) + "," +
           io::format_double(rep.distances[n]) + "\n";
  io::write_text(std::filesystem::path(cfg.out_dir) / "contraction.csv", csv);
  report["series_csv"] = "contraction.csv";
  return finish(cfg, std::move(report), rep.pass, rep.pass ? "pass" : "fail");
}

inline int run_kinetic_probe(const ExperimentConfig& cfg) {
  Model model = load_model(cfg);
  int n = cfg.sphere_samples > 0 ? cfg.sphere_samples : 720;
  auto dirs = l1_sphere_directions(model.dims(), cfg.delta, n, cfg.seed);

  std::filesystem::create_directories(cfg.out_dir);
  std::string csv = "tau,";
  for (int ax = 0; ax < model.dims(); ++ax) csv += "kappa" + std::to_string(ax) + ",";
  csv += "ell,sup_m,int_m2\n";
  double worst_sup_ratio = 0.0;   // sup |m| * sqrt(ell) <= 1
  double worst_int_ratio = 0.0;   // ell * int |m|^2 <= omega at the direction
  for (double ell : cfg.ell_schedule) {
    double omega = 0.0;
    std::vector<double> inner(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      inner[i] = omega_integrand_integral(model, dirs[i], ell, cfg.omega_xi_nodes);
      omega = std::max(omega, inner[i]);
    }
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      MultiplierProbe p =
          multiplier_probe(model, dirs[i].tau, dirs[i].kappa, ell, cfg.xi_nodes);
      csv += io::format_double(dirs[i].tau) + ",";
      for (double k : dirs[i].kappa) csv += io::format_double(k) + ",";
      csv += io::format_double(ell) + "," + io::format_double(p.sup_m) + "," +
             io::format_double(p.int_m2) + "\n";
      worst_sup_ratio = std::max(worst_sup_ratio, p.sup_m * std::sqrt(ell));
      if (omega > 0.0)
        worst_int_ratio = std::max(worst_int_ratio, ell * p.int_m2 / omega);
    }
  }
  io::write_text(std::filesystem::path(cfg.out_dir) / "probe.csv", csv);

  auto report = report_header(cfg);
  report["model"] = model.name();
  report["probe_csv"] = "probe.csv";
  report["worst_sup_bound_ratio"] = worst_sup_ratio;
  report["worst_integral_bound_ratio"] = worst_int_ratio;
  bool pass = worst_sup_ratio <= 1.0 + 1e-12 && worst_int_ratio <= 1.0 + 1e-6;
  return finish(cfg, std::move(report), pass, pass ? "pass" : "fail");
}

/// Writes the gallery model and signal files into the output directory.
inline int run_gallery(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  std::filesystem::path out(cfg.out_dir);
  for (const Model& m : gallery::all_models())
    io::write_json(out / (m.name() + ".json"), io::to_json(m.spec()));
  io::write_json(out / "sine.json", io::to_json(gallery::sine_1d(0.5, 1.0)));
  auto [qp, err] = commensurate_project(gallery::quasi_periodic_1d(), {100.0});
  io::write_json(out / "quasi_periodic_L100.json", io::to_json(qp));
  auto report = report_header(cfg);
  report["projection_error"] = err;
  return finish(cfg, std::move(report), true);
}

}  // namespace detail

/// Parses flags (and an optional --config JSON file; flags override it)
/// into a validated ExperimentConfig.
inline ExperimentConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"almost-periodic entropy-solution laboratory"};
  app.set_version_flag("--version", std::string(kVersion));

  std::string command, config_path;
  app.add_option("command", command,
                 "spectrum | nondegeneracy | simulate | decay | contraction | "
                 "kinetic-probe | gallery");
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  std::string model_path, signal_path, signal_b_path, expect, out_dir;
  std::vector<int> grid_n, refinement;
  std::vector<double> grid_l, ell_schedule;
  double end_time = 0, cfl_c = 0, cfl_d = 0, viscosity = 0, delta = 0,
         decay_threshold = 0, persist_threshold = 0, eps_zero = 0;
  int stride = 0, field_stride = 0, xi_nodes = 0, omega_xi_nodes = 0,
      sphere_samples = 0;
  std::uint64_t seed = 0;
  auto* o_model = app.add_option("--model", model_path, "model JSON file");
  auto* o_signal = app.add_option("--signal", signal_path, "signal JSON file");
  auto* o_signal_b = app.add_option("--signal-b", signal_b_path,
                                    "second signal JSON file (contraction)");
  auto* o_grid_n = app.add_option("--grid-n", grid_n, "cells per axis");
  o_grid_n->delimiter(',');
  auto* o_grid_l = app.add_option("--grid-l", grid_l, "super-cell lengths");
  o_grid_l->delimiter(',');
  auto* o_end = app.add_option("--end-time", end_time, "end time T");
  auto* o_cflc = app.add_option("--cfl-c", cfl_c, "convective CFL number");
  auto* o_cfld = app.add_option("--cfl-d", cfl_d, "diffusive CFL number");
  auto* o_visc = app.add_option("--viscosity", viscosity, "uniform viscosity");
  auto* o_stride = app.add_option("--diagnostic-stride", stride,
                                  "steps between diagnostic samples");
  auto* o_fstride = app.add_option("--field-stride", field_stride,
                                   "steps between stored snapshots (0 = none)");
  auto* o_delta = app.add_option("--delta", delta, "sphere radius delta");
  auto* o_ell = app.add_option("--ell-schedule", ell_schedule,
                               "decreasing ell schedule");
  o_ell->delimiter(',');
  auto* o_refine = app.add_option("--refinement", refinement,
                                  "grid refinement schedule (decay)");
  o_refine->delimiter(',');
  auto* o_dth = app.add_option("--decay-threshold", decay_threshold,
                               "final-ratio threshold for the decay verdict");
  auto* o_pth = app.add_option("--persist-threshold", persist_threshold,
                               "final-ratio threshold for the persists verdict");
  auto* o_xi = app.add_option("--xi-nodes", xi_nodes, "kinetic xi grid nodes");
  auto* o_oxi = app.add_option("--omega-xi-nodes", omega_xi_nodes,
                               "quadrature nodes for the nondegeneracy integral");
  auto* o_sphere = app.add_option("--sphere-samples", sphere_samples,
                                  "directions on the l1 sphere");
  auto* o_epsz = app.add_option("--eps-zero", eps_zero,
                                "zero-set tolerance for the measure sampler");
  auto* o_expect = app.add_option("--expect", expect, "expected verdict");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_seed = app.add_option("--seed", seed, "sampling seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);

  ExperimentConfig cfg;
  if (!config_path.empty()) {
    if (!std::filesystem::exists(config_path))
      throw std::runtime_error("config file not found: " + config_path);
    detail::apply_json_config(cfg, io::read_json(config_path));
  }
  if (!command.empty()) cfg.command = command;
  if (*o_model) cfg.model_path = model_path;
  if (*o_signal) cfg.signal_path = signal_path;
  if (*o_signal_b) cfg.signal_b_path = signal_b_path;
  if (*o_grid_n) cfg.grid_n = grid_n;
  if (*o_grid_l) cfg.grid_l = grid_l;
  if (*o_end) cfg.end_time = end_time;
  if (*o_cflc) cfg.cfl_convective = cfl_c;
  if (*o_cfld) cfg.cfl_diffusive = cfl_d;
  if (*o_visc) cfg.viscosity = viscosity;
  if (*o_stride) cfg.diagnostic_stride = stride;
  if (*o_fstride) cfg.field_stride = field_stride;
  if (*o_delta) cfg.delta = delta;
  if (*o_ell) cfg.ell_schedule = ell_schedule;
  if (*o_refine) cfg.refinement = refinement;
  if (*o_dth) cfg.decay_threshold = decay_threshold;
  if (*o_pth) cfg.persist_threshold = persist_threshold;
  if (*o_xi) cfg.xi_nodes = xi_nodes;
  if (*o_oxi) cfg.omega_xi_nodes = omega_xi_nodes;
  if (*o_sphere) cfg.sphere_samples = sphere_samples;
  if (*o_epsz) cfg.eps_zero = eps_zero;
  if (*o_expect) cfg.expect = expect;
  if (*o_out) cfg.out_dir = out_dir;
  if (*o_seed) cfg.seed = seed;
  if (cfg.command.empty())
    throw std::invalid_argument("missing command (see --help)");
  cfg.validate();
  return cfg;
}

/// Runs the configured experiment.  Returns the CI exit code (0 pass, 1
/// verdict failure); errors propagate as exceptions for the caller to map
/// to exit code 2.
inline int dispatch(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.command == "spectrum") return detail::run_spectrum(cfg);
  if (cfg.command == "nondegeneracy") return detail::run_nondegeneracy(cfg);
  if (cfg.command == "simulate") return detail::run_simulate(cfg);
  if (cfg.command == "decay") return detail::run_decay(cfg);
  if (cfg.command == "contraction") return detail::run_contraction(cfg);
  if (cfg.command == "kinetic-probe") return detail::run_kinetic_probe(cfg);
  if (cfg.command == "gallery") return detail::run_gallery(cfg);
  throw std::invalid_argument("unknown command \"" + cfg.command + "\"");
}

}  // namespace apde::cli
