// sshwg command-line interface: single-point evaluation, parameter sweeps,
// canned figure-data commands, wave-packet dynamics, the decay-scaling fit,
// and the reflection-zero search. All outputs are CSV/JSON files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sshwg/channels.hpp"
#include "sshwg/dynamics.hpp"
#include "sshwg/errors.hpp"
#include "sshwg/figures.hpp"
#include "sshwg/scattering.hpp"
#include "sshwg/spectral.hpp"
#include "sshwg/sweep.hpp"
#include "sshwg/version.hpp"

namespace {

using namespace sshwg;

struct ParamFlags {
  SystemParams params;
  void attach(CLI::App* cmd) {
    cmd->add_option("-N,--n-atoms", params.n_atoms, "number of atoms (odd)");
    cmd->add_option("--j0", params.j0, "coupling scale J0 (units of Gamma)");
    cmd->add_option("--phi", params.phi, "dimerization angle (radians)");
    cmd->add_option("--phi-over-pi", phi_over_pi,
                    "dimerization angle as a multiple of pi (overrides --phi)");
    cmd->add_option("-d,--spacing", params.spacing,
                    "atomic spacing (units of lambda0)");
    cmd->add_option("--gamma0", params.gamma0,
                    "environment decay (units of Gamma)");
  }
  SystemParams resolve() {
    if (phi_over_pi >= 0.0) params.phi = phi_over_pi * pi;
    params.validate();
    return params;
  }
  double phi_over_pi = -1.0;
};

void ensure_dir(const std::string& path) {
  std::filesystem::create_directories(path);
}

int cmd_point(ParamFlags& flags, double detuning, bool detuning_edge,
              const std::string& out, bool dump_geometry,
              const std::string& modes_csv) {
  const SystemParams p = flags.resolve();
  const Geometry geom = clean_geometry(p);
  const EffectiveHamiltonian h = build_effective_hamiltonian(geom, p.gamma0);
  ModeSet modes = decompose(h);

  nlohmann::json j;
  j["engine_version"] = engine_version;
  j["params"] = {{"n_atoms", p.n_atoms}, {"j0", p.j0},     {"phi", p.phi},
                 {"spacing", p.spacing}, {"gamma0", p.gamma0}};

  double dw = detuning;
  try {
    modes.edge_index = identify_edge_mode(modes, p);
    if (detuning_edge) dw = modes.delta(modes.edge_index);
    j["edge_index"] = modes.edge_index;
    j["edge_delta"] = modes.delta(modes.edge_index);
    j["edge_gamma_tilde"] = modes.gamma_tilde(modes.edge_index);
    j["beta"] = beta_factor(modes);
    j["delta_R"] = nonreciprocity(p, geom, modes);
  } catch (const AmbiguousEdge& ex) {
    j["edge_error"] = ex.what();
    if (detuning_edge) dw = 0.0;
  }
  j["delta_omega"] = dw;

  for (Direction dir : {Direction::left_incident, Direction::right_incident}) {
    const ScatteringRecord rec = amplitudes_direct(h, geom, dw, dir);
    j[direction_name(dir)] = {
        {"re_t", rec.t.real()},   {"im_t", rec.t.imag()},
        {"re_r", rec.r.real()},   {"im_r", rec.r.imag()},
        {"T", rec.transmission},  {"R", rec.reflection},
        {"eta", rec.absorption}};
  }
  if (dump_geometry) {
    j["geometry"] = {
        {"positions", std::vector<double>(geom.positions.begin(), geom.positions.end())},
        {"couplings", std::vector<double>(geom.couplings.begin(), geom.couplings.end())},
        {"spacing", geom.spacing}};
  }
  if (!modes_csv.empty()) {
    std::ofstream mf(modes_csv);
    mf << mode_set_csv(modes);
    j["modes_csv"] = modes_csv;
  }

  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream f(out);
    f << j.dump(2) << '\n';
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

int cmd_dynamics(ParamFlags& flags, double gamma_packet,
                 const std::string& direction, double t_end, double dt_max,
                 const std::string& out) {
  const SystemParams p = flags.resolve();
  const Geometry geom = clean_geometry(p);
  const EffectiveHamiltonian h = build_effective_hamiltonian(geom, p.gamma0);
  ModeSet modes = decompose(h);

  PacketSpec packet;
  packet.gamma_packet = gamma_packet;
  packet.direction = direction == "left" ? Direction::left_incident
                                         : Direction::right_incident;
  packet.reference_position = packet.direction == Direction::right_incident
                                  ? geom.positions(geom.n_atoms() - 1)
                                  : geom.positions(0);
  try {
    packet.carrier_detuning = modes.delta(identify_edge_mode(modes, p));
  } catch (const AmbiguousEdge&) {
    packet.carrier_detuning = 0.0;
  }

  const Trajectory traj = evolve(geom, h, packet, t_end, dt_max);

  std::ofstream f(out);
  if (!f) throw Error("cannot open " + out);
  f << "t";
  for (int i = 1; i <= traj.n_atoms(); ++i) f << ",pop_" << i;
  f << ",L_env,W_trans,W_refl\n";
  for (int s = 0; s < traj.n_steps(); ++s) {
    f << fmt_g17(traj.times[s]);
    for (int i = 0; i < traj.n_atoms(); ++i)
      f << ',' << fmt_g17(traj.population(i, s));
    f << ',' << fmt_g17(traj.env_loss[s]) << ','
      << fmt_g17(traj.wg_transmitted[s]) << ',' << fmt_g17(traj.wg_reflected[s])
      << '\n';
  }

  nlohmann::json meta;
  meta["gamma_packet"] = packet.gamma_packet;
  meta["direction"] = direction_name(packet.direction);
  meta["carrier_detuning"] = packet.carrier_detuning;
  meta["reference_position"] = packet.reference_position;
  meta["t_end"] = t_end;
  meta["dt_max"] = dt_max;
  meta["rtol"] = 1e-9;
  meta["valid"] = traj.valid;
  meta["status"] = traj.status;
  meta["input_norm"] = traj.input_norm;
  meta["final_env_loss"] = traj.env_loss.back();
  std::ofstream mf(out + ".meta.json");
  mf << meta.dump(2) << '\n';

  std::cout << "wrote " << out << " (" << traj.n_steps() << " steps, "
            << traj.status << ")\n";
  return traj.valid ? 0 : 1;
}

int cmd_fit_scaling(ParamFlags& flags, const std::string& n_spec,
                    const std::string& out) {
  const SystemParams p = flags.resolve();
  std::vector<int> ns;
  if (n_spec.find(':') != std::string::npos) {
    std::istringstream is(n_spec);
    std::string a, b, s;
    std::getline(is, a, ':');
    std::getline(is, b, ':');
    std::getline(is, s, ':');
    const int step = s.empty() ? 2 : std::stoi(s);
    for (int n = std::stoi(a); n <= std::stoi(b); n += step) ns.push_back(n);
  } else {
    std::istringstream is(n_spec);
    std::string item;
    while (std::getline(is, item, ',')) ns.push_back(std::stoi(item));
  }

  nlohmann::json j;
  j["n_values"] = ns;
  try {
    const ScalingFit fit = decay_scaling_fit(p, ns);
    j["nu"] = fit.nu;
    j["r_squared"] = fit.r_squared;
    j["intercept"] = fit.intercept;
    j["status"] = "ok";
  } catch (const ScalingBreakdown& ex) {
    j["nu"] = ex.nu;
    j["r_squared"] = ex.r_squared;
    j["status"] = "breakdown";
  }
  if (out.empty())
    std::cout << j.dump(2) << '\n';
  else {
    std::ofstream f(out);
    f << j.dump(2) << '\n';
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

int cmd_find_gamma0m(ParamFlags& flags, const std::string& out) {
  const SystemParams p = flags.resolve();
  const Geometry geom = clean_geometry(p);

  nlohmann::json j;
  try {
    const double g0m = find_gamma0m(p, geom);
    const SystemParams pm = p.with_gamma0(g0m);
    const EffectiveHamiltonian h = build_effective_hamiltonian(geom, g0m);
    ModeSet modes = decompose(h);
    modes.edge_index = identify_edge_mode(modes, pm);
    const double dw = modes.delta(modes.edge_index);
    const ScatteringRecord rec =
        amplitudes_direct(h, geom, dw, Direction::right_incident);
    j["gamma0m"] = g0m;
    j["R_r"] = rec.reflection;
    j["eta"] = rec.absorption;
    j["beta"] = beta_factor(modes);
    j["delta_R"] = nonreciprocity(pm, geom, modes);
    j["status"] = "ok";
  } catch (const NoZeroFound& ex) {
    j["status"] = "no_zero_found";
    j["best_gamma0"] = ex.best_gamma0;
    j["residual_R_r"] = ex.residual;
  }
  if (out.empty())
    std::cout << j.dump(2) << '\n';
  else {
    std::ofstream f(out);
    f << j.dump(2) << '\n';
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-photon scattering on a waveguide-coupled dimerized atom array"};
  app.set_version_flag("--version", sshwg::engine_version);
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers,
                 "worker threads (default: SSHWG_WORKERS or hardware)");

  // point
  auto* point = app.add_subcommand("point", "evaluate one parameter point");
  ParamFlags point_flags;
  point_flags.attach(point);
  double point_dw = 0.0;
  bool point_edge = false, point_geom = false;
  std::string point_out, point_modes;
  point->add_option("--detuning", point_dw, "photon detuning (units of Gamma)");
  point->add_flag("--at-edge", point_edge, "evaluate at the edge resonance");
  point->add_flag("--dump-geometry", point_geom, "include geometry in the JSON");
  point->add_option("--dump-modes", point_modes,
                    "write the mode set (Delta, Gamma, participation) to this CSV");
  point->add_option("-o,--out", point_out, "output JSON path (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a config-driven sweep");
  std::string sweep_config, sweep_out = "sweep.csv";
  sweep->add_option("-c,--config", sweep_config, "key = value config file")
      ->required();
  sweep->add_option("-o,--out", sweep_out, "output CSV path");

  // figure
  auto* figure = app.add_subcommand("figure", "emit canned figure data");
  std::string fig_name, fig_out = ".";
  figure->add_option("name", fig_name, "figure name (or 'list')")->required();
  figure->add_option("-o,--out-dir", fig_out, "output directory");

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "wave-packet scattering dynamics");
  ParamFlags dyn_flags;
  dyn_flags.attach(dyn);
  double dyn_gamma = 0.01, dyn_tend = 1500.0, dyn_dtmax = 0.5;
  std::string dyn_dir = "right", dyn_out = "trajectory.csv";
  dyn->add_option("--gamma-packet", dyn_gamma, "packet spectral width");
  dyn->add_option("--direction", dyn_dir, "incidence: left or right");
  dyn->add_option("--t-end", dyn_tend, "evolution time (units of 1/Gamma)");
  dyn->add_option("--dt-max", dyn_dtmax, "maximum integrator step");
  dyn->add_option("-o,--out", dyn_out, "trajectory CSV path");

  // fit-scaling
  auto* fit = app.add_subcommand("fit-scaling", "edge-decay scaling exponent");
  ParamFlags fit_flags;
  fit_flags.attach(fit);
  std::string fit_ns = "7:31:2", fit_out;
  fit->add_option("--n-values", fit_ns, "sizes, e.g. 7:31:2 or 7,9,11");
  fit->add_option("-o,--out", fit_out, "output JSON path (default stdout)");

  // find-gamma0m
  auto* g0m = app.add_subcommand("find-gamma0m", "reflection-zero search");
  ParamFlags g0m_flags;
  g0m_flags.attach(g0m);
  std::string g0m_out;
  g0m->add_option("-o,--out", g0m_out, "output JSON path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*point)
      return cmd_point(point_flags, point_dw, point_edge, point_out, point_geom,
                       point_modes);
    if (*sweep) {
      const sshwg::SweepSpec spec = sshwg::parse_config_file(sweep_config);
      const sshwg::RunManifest manifest =
          sshwg::run_sweep(spec, sweep_out, sshwg::resolve_workers(workers));
      std::ofstream mf(sweep_out + ".manifest.json");
      mf << manifest.to_json();
      std::cout << "wrote " << sweep_out << " (config " << manifest.config_hash
                << ")\n";
      return 0;
    }
    if (*figure) {
      if (fig_name == "list") {
        for (const auto& name : sshwg::figure_names()) std::cout << name << '\n';
        return 0;
      }
      ensure_dir(fig_out);
      const sshwg::RunManifest manifest =
          sshwg::reproduce_figure(fig_name, fig_out, workers);
      for (const auto& path : manifest.outputs) std::cout << "wrote " << path << '\n';
      return 0;
    }
    if (*dyn) return cmd_dynamics(dyn_flags, dyn_gamma, dyn_dir, dyn_tend, dyn_dtmax, dyn_out);
    if (*fit) return cmd_fit_scaling(fit_flags, fit_ns, fit_out);
    if (*g0m) return cmd_find_gamma0m(g0m_flags, g0m_out);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
