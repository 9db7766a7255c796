#include "sshwg/figures.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sshwg/channels.hpp"
#include "sshwg/dynamics.hpp"
#include "sshwg/errors.hpp"
#include "sshwg/scattering.hpp"
#include "sshwg/spectral.hpp"
#include "sshwg/version.hpp"

namespace sshwg {

namespace {

// Parameters shared by most figures.
SystemParams mainline(int n, double gamma0) {
  SystemParams p;
  p.n_atoms = n;
  p.j0 = 8.0;
  p.phi = 0.3 * pi;
  p.spacing = 0.75;
  p.gamma0 = gamma0;
  return p;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<double> logspace(double lo_exp, double hi_exp, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = std::pow(10.0, n == 1 ? lo_exp : lo_exp + (hi_exp - lo_exp) * i / (n - 1));
  return v;
}

void write_lines(const std::string& path, const std::string& header,
                 const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  out << header << '\n';
  for (const auto& row : rows) out << row;
}

RunManifest start_manifest(const std::string& name) {
  RunManifest m;
  m.engine_version = engine_version;
  m.config_hash = fnv1a_hex("figure:" + name);
  m.started_at = iso_timestamp_now();
  return m;
}

void finish_manifest(RunManifest& m, const std::string& out_dir,
                     const std::string& name) {
  m.finished_at = iso_timestamp_now();
  std::ofstream out(out_dir + "/" + name + "_manifest.json");
  out << m.to_json();
}

// Scattering record at the edge resonance; falls back to delta_omega = 0
// when the edge cannot be identified.
struct EdgePoint {
  ModeSet modes;
  int edge = -1;
  double detuning = 0.0;
  EffectiveHamiltonian h;
};

EdgePoint solve_edge_point(const SystemParams& p, const Geometry& geom) {
  EdgePoint pt;
  pt.h = build_effective_hamiltonian(geom, p.gamma0);
  pt.modes = decompose(pt.h);
  try {
    pt.edge = identify_edge_mode(pt.modes, p);
    pt.modes.edge_index = pt.edge;
    pt.detuning = pt.modes.delta(pt.edge);
  } catch (const AmbiguousEdge&) {
    pt.edge = -1;
    pt.detuning = 0.0;
  }
  return pt;
}

// ---------------------------------------------------------------------------
// Individual figures
// ---------------------------------------------------------------------------

RunManifest fig1d(const std::string& out_dir, int workers) {
  // Real spectrum vs spacing; N=11, J0=8, phi=0.3pi, Gamma0=0.05.
  RunManifest m = start_manifest("fig1d");
  const SystemParams base = mainline(11, 0.05);
  const std::vector<double> ds = linspace(0.0025, 0.9975, 399);

  std::vector<std::string> rows(ds.size());
  parallel_for(static_cast<int>(ds.size()), workers, [&](int i) {
    SystemParams p = base;
    p.spacing = ds[i];
    const Geometry geom = clean_geometry(p);
    ModeSet modes = solve_modes(p, geom);
    int edge = -1;
    try {
      edge = identify_edge_mode(modes, p);
    } catch (const AmbiguousEdge&) {}
    std::ostringstream os;
    for (int j = 0; j < modes.size(); ++j)
      os << fmt_g17(ds[i]) << ',' << j << ',' << fmt_g17(modes.delta(j)) << ','
         << fmt_g17(modes.gamma(j)) << ',' << fmt_g17(modes.gamma_tilde(j))
         << ',' << (j == edge ? 1 : 0) << '\n';
    rows[i] = os.str();
  });
  const std::string path = out_dir + "/fig1d.csv";
  write_lines(path, "d,j,Delta,Gamma_j,Gamma_tilde,is_edge", rows);
  m.outputs.push_back(path);
  finish_manifest(m, out_dir, "fig1d");
  return m;
}

RunManifest sweep_figure(const std::string& name, const SweepSpec& spec,
                         const std::string& out_dir, int workers) {
  RunManifest m = run_sweep(spec, out_dir + "/" + name + ".csv", workers);
  finish_manifest(m, out_dir, name);
  return m;
}

RunManifest fig1e(const std::string& out_dir, int workers) {
  // Transmission spectra at the three reference spacings.
  SweepSpec spec;
  spec.base = mainline(11, 0.05);
  spec.axes.push_back({"d", {0.25, 0.5, 0.75}});
  spec.axes.push_back({"delta_omega", linspace(-24.0, 24.0, 2401)});
  return sweep_figure("fig1e", spec, out_dir, workers);
}

RunManifest fig3a(const std::string& out_dir, int workers) {
  SweepSpec spec;
  spec.base = mainline(11, 0.05);
  spec.axes.push_back({"delta_omega", linspace(-24.0, 24.0, 2401)});
  return sweep_figure("fig3a", spec, out_dir, workers);
}

RunManifest fig3b(const std::string& out_dir, int workers) {
  SweepSpec spec;
  spec.base = mainline(11, 0.05);
  spec.detuning_mode = DetuningMode::edge;
  spec.observables = {"amplitudes", "delta_R"};
  spec.axes.push_back({"j0", linspace(0.0, 10.0, 64)});
  spec.axes.push_back({"d", linspace(1.0 / 512, 1.0 - 1.0 / 512, 256)});
  return sweep_figure("fig3b", spec, out_dir, workers);
}

RunManifest fig3c(const std::string& out_dir, int workers) {
  SweepSpec spec;
  spec.base = mainline(11, 0.05);
  spec.detuning_mode = DetuningMode::edge;
  spec.axes.push_back({"d", {0.25, 0.75}});
  spec.axes.push_back({"gamma0", logspace(-4.0, 1.0, 301)});
  return sweep_figure("fig3c", spec, out_dir, workers);
}

RunManifest fig4a(const std::string& out_dir, int workers) {
  SweepSpec spec;
  spec.base = mainline(21, 0.05);
  spec.detuning_mode = DetuningMode::edge;
  spec.axes.push_back({"gamma0", logspace(-4.0, 0.0, 401)});
  return sweep_figure("fig4a", spec, out_dir, workers);
}

RunManifest fig4b(const std::string& out_dir, int workers) {
  // Gamma0m and the nonreciprocity (at Gamma0 = 0.05) vs phi for N = 11, 21.
  RunManifest m = start_manifest("fig4b");
  const std::vector<double> phis = linspace(0.02 * pi, 0.48 * pi, 47);
  const std::vector<int> ns = {11, 21};

  const int total = static_cast<int>(phis.size() * ns.size());
  std::vector<std::string> rows(total);
  parallel_for(total, workers, [&](int idx) {
    const int ni = idx / static_cast<int>(phis.size());
    const int pi_idx = idx % static_cast<int>(phis.size());
    SystemParams p = mainline(ns[ni], 0.05);
    p.phi = phis[pi_idx];
    const Geometry geom = clean_geometry(p);

    std::string g0m_text = "nan", err;
    try {
      g0m_text = fmt_g17(find_gamma0m(p, geom));
    } catch (const NoZeroFound& ex) {
      err = "no_zero_found;best=" + fmt_g17(ex.best_gamma0) +
            ";residual=" + fmt_g17(ex.residual);
    } catch (const std::exception& ex) {
      err = ex.what();
    }

    std::string dr_text = "nan";
    try {
      ModeSet modes = solve_modes(p, geom);
      dr_text = fmt_g17(nonreciprocity(p, geom, modes));
    } catch (const std::exception& ex) {
      if (err.empty()) err = ex.what();
    }

    std::ostringstream os;
    os << ns[ni] << ',' << fmt_g17(phis[pi_idx]) << ',' << g0m_text << ','
       << dr_text << ',' << err << '\n';
    rows[idx] = os.str();
  });
  const std::string path = out_dir + "/fig4b.csv";
  write_lines(path, "N,phi,gamma0m,delta_R,error", rows);
  m.outputs.push_back(path);
  finish_manifest(m, out_dir, "fig4b");
  return m;
}

RunManifest fig5a(const std::string& out_dir, int workers) {
  // Edge-channel anisotropy ratios vs spacing.
  RunManifest m = start_manifest("fig5a");
  const SystemParams base = mainline(21, 0.05);
  const std::vector<double> ds = linspace(0.005, 0.995, 199);

  std::vector<std::string> rows(ds.size());
  parallel_for(static_cast<int>(ds.size()), workers, [&](int i) {
    SystemParams p = base;
    p.spacing = ds[i];
    std::ostringstream os;
    try {
      const Geometry geom = clean_geometry(p);
      ModeSet modes = solve_modes(p, geom);
      modes.edge_index = identify_edge_mode(modes, p);
      const auto [zeta, zeta_tilde] = anisotropy_ratios(modes, geom);
      os << fmt_g17(ds[i]) << ',' << fmt_g17(zeta) << ',' << fmt_g17(zeta_tilde)
         << ",\n";
    } catch (const std::exception& ex) {
      os << fmt_g17(ds[i]) << ",nan,nan," << ex.what() << '\n';
    }
    rows[i] = os.str();
  });
  const std::string path = out_dir + "/fig5a.csv";
  write_lines(path, "d,zeta,zeta_tilde,error", rows);
  m.outputs.push_back(path);
  finish_manifest(m, out_dir, "fig5a");
  return m;
}

RunManifest fig5bc(const std::string& out_dir, int workers) {
  // Per-mode weighted channel amplitudes |xi_j| for both directions.
  (void)workers;
  RunManifest m = start_manifest("fig5bc");
  const SystemParams p = mainline(21, 0.05);
  const Geometry geom = clean_geometry(p);
  const EdgePoint pt = solve_edge_point(p, geom);

  std::vector<std::string> rows;
  for (Direction dir : {Direction::left_incident, Direction::right_incident}) {
    const ChannelSpectrum spectrum =
        interaction_spectra(pt.modes, geom, dir, pt.detuning);
    for (int j = 0; j < spectrum.size(); ++j) {
      std::ostringstream os;
      os << j << ',' << direction_name(dir) << ','
         << fmt_g17(spectrum.xi_refl(j).real()) << ','
         << fmt_g17(spectrum.xi_refl(j).imag()) << ','
         << fmt_g17(spectrum.xi_trans(j).real()) << ','
         << fmt_g17(spectrum.xi_trans(j).imag()) << ','
         << fmt_g17(spectrum.xi_weighted(j).real()) << ','
         << fmt_g17(spectrum.xi_weighted(j).imag()) << ','
         << fmt_g17(std::abs(spectrum.xi_weighted(j))) << ','
         << (j == pt.edge ? 1 : 0) << '\n';
      rows.push_back(os.str());
    }
  }
  const std::string path = out_dir + "/fig5bc.csv";
  write_lines(path,
              "j,direction,ReXi,ImXi,ReXiTilde,ImXiTilde,Rexi,Imxi,abs_xi,is_edge",
              rows);
  m.outputs.push_back(path);
  finish_manifest(m, out_dir, "fig5bc");
  return m;
}

RunManifest fig5d(const std::string& out_dir, int workers) {
  // Edge and bulk channel magnitudes vs Gamma0, right-incident.
  RunManifest m = start_manifest("fig5d");
  const std::vector<double> g0s = logspace(-4.0, 0.0, 301);
  const SystemParams base = mainline(21, 0.0);

  std::vector<std::string> rows(g0s.size());
  parallel_for(static_cast<int>(g0s.size()), workers, [&](int i) {
    SystemParams p = base;
    p.gamma0 = g0s[i];
    const Geometry geom = clean_geometry(p);
    const EdgePoint pt = solve_edge_point(p, geom);
    std::ostringstream os;
    if (pt.edge < 0) {
      os << fmt_g17(g0s[i]) << ",nan,nan,nan,ambiguous_edge\n";
    } else {
      const ChannelSpectrum spectrum = interaction_spectra(
          pt.modes, geom, Direction::right_incident, pt.detuning);
      const EdgeBulkSplit split = edge_bulk_split(spectrum, pt.edge);
      os << fmt_g17(g0s[i]) << ',' << fmt_g17(std::abs(split.xi_e)) << ','
         << fmt_g17(std::abs(split.xi_b)) << ',' << fmt_g17(split.phi0)
         << ",\n";
    }
    rows[i] = os.str();
  });
  const std::string path = out_dir + "/fig5d.csv";
  write_lines(path, "gamma0,abs_xi_e,abs_xi_b,phi0,error", rows);
  m.outputs.push_back(path);
  finish_manifest(m, out_dir, "fig5d");
  return m;
}

RunManifest fig5e(const std::string& out_dir, int workers) {
  // Edge decay vs N for several phi; slope summaries go to the manifest
  // sidecar JSON.
  RunManifest m = start_manifest("fig5e");
  const std::vector<double> phis = {0.1 * pi, 0.2 * pi, 0.3 * pi, 0.4 * pi,
                                    0.45 * pi};
  std::vector<int> ns;
  for (int n = 7; n <= 31; n += 2) ns.push_back(n);

  const int total = static_cast<int>(phis.size() * ns.size());
  std::vector<std::string> rows(total);
  parallel_for(total, workers, [&](int idx) {
    const auto pi_idx = idx / ns.size();
    const auto ni = idx % ns.size();
    SystemParams p = mainline(ns[ni], 0.05);
    p.phi = phis[pi_idx];
    const Geometry geom = clean_geometry(p);
    const EdgePoint pt = solve_edge_point(p, geom);
    std::ostringstream os;
    if (pt.edge < 0)
      os << fmt_g17(phis[pi_idx]) << ',' << ns[ni] << ",nan,ambiguous_edge\n";
    else
      os << fmt_g17(phis[pi_idx]) << ',' << ns[ni] << ','
         << fmt_g17(pt.modes.gamma_tilde(pt.edge)) << ",\n";
    rows[idx] = os.str();
  });
  const std::string path = out_dir + "/fig5e.csv";
  write_lines(path, "phi,N,gamma_tilde_edge,error", rows);
  m.outputs.push_back(path);

  // Per-phi scaling fits; breakdown is expected near phi = pi/2.
  std::ostringstream fits;
  fits << "phi,nu,r_squared,status\n";
  for (double phi : phis) {
    SystemParams p = mainline(7, 0.05);
    p.phi = phi;
    try {
      const ScalingFit fit = decay_scaling_fit(p, ns);
      fits << fmt_g17(phi) << ',' << fmt_g17(fit.nu) << ','
           << fmt_g17(fit.r_squared) << ",ok\n";
    } catch (const ScalingBreakdown& ex) {
      fits << fmt_g17(phi) << ',' << fmt_g17(ex.nu) << ','
           << fmt_g17(ex.r_squared) << ",breakdown\n";
    }
  }
  const std::string fit_path = out_dir + "/fig5e_fits.csv";
  std::ofstream out(fit_path);
  out << fits.str();
  m.outputs.push_back(fit_path);
  finish_manifest(m, out_dir, "fig5e");
  return m;
}

RunManifest fig5f(const std::string& out_dir, int workers) {
  // beta factor and absorption at Gamma0 = Gamma0m, vs phi.
  RunManifest m = start_manifest("fig5f");
  const std::vector<double> phis = linspace(0.05 * pi, 0.45 * pi, 17);

  std::vector<std::string> rows(phis.size());
  parallel_for(static_cast<int>(phis.size()), workers, [&](int i) {
    SystemParams p = mainline(21, 0.05);
    p.phi = phis[i];
    const Geometry geom = clean_geometry(p);
    std::ostringstream os;
    try {
      const double g0m = find_gamma0m(p, geom);
      SystemParams pm = p.with_gamma0(g0m);
      const EdgePoint pt = solve_edge_point(pm, geom);
      const double beta = beta_factor(pt.modes);
      const ScatteringRecord rec = amplitudes_direct(
          pt.h, geom, pt.detuning, Direction::right_incident);
      os << fmt_g17(phis[i]) << ',' << fmt_g17(g0m) << ',' << fmt_g17(beta)
         << ',' << fmt_g17(rec.absorption) << ",\n";
    } catch (const std::exception& ex) {
      os << fmt_g17(phis[i]) << ",nan,nan,nan," << ex.what() << '\n';
    }
    rows[i] = os.str();
  });
  const std::string path = out_dir + "/fig5f.csv";
  write_lines(path, "phi,gamma0m,beta,eta,error", rows);
  m.outputs.push_back(path);
  finish_manifest(m, out_dir, "fig5f");
  return m;
}

RunManifest fig6(const std::string& out_dir, int workers) {
  // Absorption vs Gamma0 for a single atom, an uncoupled array, and the
  // dimerized array (right-incident, edge resonance).
  RunManifest m = start_manifest("fig6");
  const std::vector<double> g0s = logspace(-4.0, 2.0, 301);

  std::vector<std::string> rows(g0s.size());
  parallel_for(static_cast<int>(g0s.size()), workers, [&](int i) {
    const double g0 = g0s[i];
    const double eta_single = single_qubit(0.0, g0).absorption;

    SystemParams flat = mainline(21, g0);
    flat.j0 = 0.0;
    flat.phi = 0.0;
    const Geometry geom_flat = clean_geometry(flat);
    const double eta_flat =
        amplitudes_direct(build_effective_hamiltonian(geom_flat, g0), geom_flat,
                          0.0, Direction::right_incident)
            .absorption;

    const SystemParams topo = mainline(21, g0);
    const Geometry geom_topo = clean_geometry(topo);
    const EdgePoint pt = solve_edge_point(topo, geom_topo);
    const double eta_topo =
        amplitudes_direct(pt.h, geom_topo, pt.detuning,
                          Direction::right_incident)
            .absorption;

    std::ostringstream os;
    os << fmt_g17(g0) << ',' << fmt_g17(eta_single) << ',' << fmt_g17(eta_flat)
       << ',' << fmt_g17(eta_topo) << '\n';
    rows[i] = os.str();
  });
  const std::string path = out_dir + "/fig6.csv";
  write_lines(path, "gamma0,eta_single,eta_flat_array,eta_topological", rows);
  m.outputs.push_back(path);
  finish_manifest(m, out_dir, "fig6");
  return m;
}

RunManifest fig7c(const std::string& out_dir, int workers) {
  // Population dynamics for the narrow left-propagating packet.
  (void)workers;
  RunManifest m = start_manifest("fig7c");
  const SystemParams p = mainline(21, 0.0246);
  const Geometry geom = clean_geometry(p);
  const EffectiveHamiltonian h = build_effective_hamiltonian(geom, p.gamma0);
  const EdgePoint pt = solve_edge_point(p, geom);

  PacketSpec packet;
  packet.gamma_packet = 0.01;
  packet.direction = Direction::right_incident;  // left-propagating input
  packet.reference_position = geom.positions(geom.n_atoms() - 1);
  packet.carrier_detuning = pt.detuning;

  const Trajectory traj = evolve(geom, h, packet, 1500.0, 0.5);

  std::vector<std::string> rows;
  rows.reserve(traj.n_steps());
  for (int s = 0; s < traj.n_steps(); ++s) {
    std::ostringstream os;
    os << fmt_g17(traj.times[s]);
    for (int i = 0; i < traj.n_atoms(); ++i)
      os << ',' << fmt_g17(traj.population(i, s));
    os << ',' << fmt_g17(traj.env_loss[s]) << ','
       << fmt_g17(traj.wg_transmitted[s]) << ',' << fmt_g17(traj.wg_reflected[s])
       << '\n';
    rows.push_back(os.str());
  }
  std::ostringstream header;
  header << "t";
  for (int i = 1; i <= traj.n_atoms(); ++i) header << ",pop_" << i;
  header << ",L_env,W_trans,W_refl";
  const std::string path = out_dir + "/fig7c.csv";
  write_lines(path, header.str(), rows);
  m.outputs.push_back(path);

  std::ofstream meta(out_dir + "/fig7c_packet.json");
  meta << "{\n  \"gamma_packet\": " << fmt_g17(packet.gamma_packet)
       << ",\n  \"direction\": \"" << direction_name(packet.direction)
       << "\",\n  \"carrier_detuning\": " << fmt_g17(packet.carrier_detuning)
       << ",\n  \"reference_position\": " << fmt_g17(packet.reference_position)
       << ",\n  \"t_end\": 1500.0,\n  \"dt_max\": 0.5,\n  \"rtol\": 1e-9\n}\n";
  m.outputs.push_back(out_dir + "/fig7c_packet.json");
  finish_manifest(m, out_dir, "fig7c");
  return m;
}

RunManifest fig8_disorder(const std::string& name, bool coupling_disorder,
                          const std::string& out_dir, int workers) {
  // Nonreciprocity vs spacing, clean and disordered (ensemble mean).
  RunManifest m = start_manifest(name);
  SweepSpec clean;
  clean.base = mainline(11, 0.05);
  clean.detuning_mode = DetuningMode::edge;
  clean.observables = {"amplitudes", "delta_R"};
  clean.axes.push_back({"d", linspace(0.005, 0.995, 199)});
  RunManifest mc = run_sweep(clean, out_dir + "/" + name + "_clean.csv", workers);

  SweepSpec dis = clean;
  DisorderSpec d;
  d.coupling_amplitude = coupling_disorder ? 1.0 : 0.0;
  d.position_amplitude = coupling_disorder ? 0.0 : 0.002;
  d.seed = 20210614;
  d.n_samples = 100;
  dis.disorder = d;
  RunManifest md =
      run_sweep(dis, out_dir + "/" + name + "_disordered.csv", workers);

  m.outputs = mc.outputs;
  m.outputs.insert(m.outputs.end(), md.outputs.begin(), md.outputs.end());
  m.seed = d.seed;
  finish_manifest(m, out_dir, name);
  return m;
}

RunManifest fig8c(const std::string& out_dir, int workers) {
  // Absorption vs Gamma0, clean vs coupling disorder, N = 21.
  RunManifest m = start_manifest("fig8c");
  SweepSpec clean;
  clean.base = mainline(21, 0.05);
  clean.detuning_mode = DetuningMode::edge;
  clean.axes.push_back({"gamma0", logspace(-4.0, 0.0, 201)});
  RunManifest mc = run_sweep(clean, out_dir + "/fig8c_clean.csv", workers);

  SweepSpec dis = clean;
  DisorderSpec d;
  d.coupling_amplitude = 1.0;
  d.seed = 20210614;
  d.n_samples = 100;
  dis.disorder = d;
  RunManifest md = run_sweep(dis, out_dir + "/fig8c_disordered.csv", workers);

  m.outputs = mc.outputs;
  m.outputs.insert(m.outputs.end(), md.outputs.begin(), md.outputs.end());
  m.seed = d.seed;
  finish_manifest(m, out_dir, "fig8c");
  return m;
}

}  // namespace

std::vector<std::string> figure_names() {
  return {"fig1d", "fig1e", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b",
          "fig5a", "fig5bc", "fig5d", "fig5e", "fig5f", "fig6", "fig7c",
          "fig8a", "fig8b", "fig8c"};
}

RunManifest reproduce_figure(const std::string& name,
                             const std::string& out_dir, int workers) {
  workers = resolve_workers(workers);
  if (name == "fig1d") return fig1d(out_dir, workers);
  if (name == "fig1e") return fig1e(out_dir, workers);
  if (name == "fig3a") return fig3a(out_dir, workers);
  if (name == "fig3b") return fig3b(out_dir, workers);
  if (name == "fig3c") return fig3c(out_dir, workers);
  if (name == "fig4a") return fig4a(out_dir, workers);
  if (name == "fig4b") return fig4b(out_dir, workers);
  if (name == "fig5a") return fig5a(out_dir, workers);
  if (name == "fig5bc") return fig5bc(out_dir, workers);
  if (name == "fig5d") return fig5d(out_dir, workers);
  if (name == "fig5e") return fig5e(out_dir, workers);
  if (name == "fig5f") return fig5f(out_dir, workers);
  if (name == "fig6") return fig6(out_dir, workers);
  if (name == "fig7c") return fig7c(out_dir, workers);
  if (name == "fig8a") return fig8_disorder("fig8a", true, out_dir, workers);
  if (name == "fig8b") return fig8_disorder("fig8b", false, out_dir, workers);
  if (name == "fig8c") return fig8c(out_dir, workers);
  throw UnknownFigure(name);
}

}  // namespace sshwg
