// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerances in code; measured values are printed so
// regressions are diagnosable from the log alone.

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sshwg/channels.hpp"
#include "sshwg/dynamics.hpp"
#include "sshwg/errors.hpp"
#include "sshwg/model.hpp"
#include "sshwg/rng.hpp"
#include "sshwg/scattering.hpp"
#include "sshwg/spectral.hpp"

using namespace sshwg;

namespace {

int n_failed = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  criterion %2d: %s  [%s]\n", ok ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!ok) ++n_failed;
}

SystemParams params(int n, double j0, double phi, double d, double g0) {
  SystemParams p;
  p.n_atoms = n;
  p.j0 = j0;
  p.phi = phi;
  p.spacing = d;
  p.gamma0 = g0;
  return p;
}

SystemParams random_params(CounterRng& rng, double gamma0) {
  const int n = 1 + 2 * static_cast<int>(rng.next_double() * 10);  // 1..21
  return params(n, 10.0 * rng.next_double(), 0.49 * pi * rng.next_double(),
                0.02 + 0.96 * rng.next_double(), gamma0);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// --- criterion 1 ---------------------------------------------------------
void criterion_1() {
  const double eta = single_qubit(0.0, gamma_wg).absorption;
  const double refl = single_qubit(0.0, 0.0).reflection;
  const bool ok = std::abs(eta - 0.5) < 1e-12 && std::abs(refl - 1.0) < 1e-12;
  report(1, "single-qubit limit", ok,
         "eta(0,Gamma)=" + fmt(eta) + ", R(0,0)=" + fmt(refl));
}

// --- criterion 2 ---------------------------------------------------------
void criterion_2() {
  CounterRng rng(1001, 0);
  double worst = 0.0;
  for (int set = 0; set < 50; ++set) {
    const SystemParams p = random_params(rng, 0.0);
    const Geometry geom = clean_geometry(p);
    const EffectiveHamiltonian h = build_effective_hamiltonian(geom, 0.0);
    const double span = 3.0 * std::max(p.j0, 1.0);
    for (int k = 0; k < 1000; ++k) {
      const double dw = -span + 2.0 * span * k / 999.0;
      const ScatteringRecord rec =
          amplitudes_direct(h, geom, dw, Direction::left_incident);
      worst = std::max(worst, std::abs(rec.transmission + rec.reflection - 1.0));
    }
  }
  report(2, "unitarity at Gamma0=0", worst < 1e-10,
         "max |T+R-1| = " + fmt(worst) + " over 50 sets x 1000 detunings");
}

// --- criterion 3 ---------------------------------------------------------
void criterion_3() {
  CounterRng rng(1002, 0);
  DisorderSpec disorder;
  disorder.coupling_amplitude = 1.0;
  disorder.position_amplitude = 0.002;
  disorder.seed = 31415;
  disorder.n_samples = 2;

  double worst = 0.0;
  for (int set = 0; set < 50; ++set) {
    const SystemParams p = random_params(rng, 0.4 * rng.next_double());
    for (int sample = 0; sample < 2; ++sample) {
      const Geometry geom = build_geometry(p, disorder, sample);
      const EffectiveHamiltonian h = build_effective_hamiltonian(geom, p.gamma0);
      for (int k = 0; k < 20; ++k) {
        const double dw = 40.0 * (rng.next_double() - 0.5);
        const cxd t_l = amplitudes_direct(h, geom, dw, Direction::left_incident).t;
        const cxd t_r = amplitudes_direct(h, geom, dw, Direction::right_incident).t;
        worst = std::max(worst, std::abs(t_l - t_r));
      }
    }
  }
  report(3, "transmission reciprocity", worst < 1e-10,
         "max |t_l - t_r| = " + fmt(worst) + " incl. disordered geometries");
}

// --- criterion 4 ---------------------------------------------------------
void criterion_4() {
  CounterRng rng(1003, 0);
  double worst = 0.0;
  int used = 0;
  while (used < 50) {
    const SystemParams p = random_params(rng, 0.5 * rng.next_double());
    const Geometry geom = clean_geometry(p);
    const EffectiveHamiltonian h = build_effective_hamiltonian(geom, p.gamma0);
    const ModeSet modes = decompose(h);
    if (modes.near_defective) continue;
    ++used;
    for (int k = 0; k < 10; ++k) {
      const double dw = 50.0 * (rng.next_double() - 0.5);
      for (Direction dir : {Direction::left_incident, Direction::right_incident}) {
        const ScatteringRecord a = amplitudes_direct(h, geom, dw, dir);
        const ScatteringRecord b = amplitudes_modal(modes, geom, dw, dir);
        worst = std::max({worst, std::abs(a.t - b.t), std::abs(a.r - b.r)});
      }
    }
  }
  report(4, "modal vs direct amplitudes", worst < 1e-8,
         "max deviation = " + fmt(worst) + " over 50 non-defective sets");
}

// --- criterion 5 ---------------------------------------------------------
void criterion_5() {
  double worst = 0.0;
  for (int n : {5, 11, 21})
    for (double phi : {0.1 * pi, 0.3 * pi})
      for (double d : {0.25, 0.5, 0.75}) {
        const SystemParams p = params(n, 8.0, phi, d, 0.0);
        worst = std::max(worst, std::abs(edge_lamb_shift(clean_geometry(p), p)));
      }
  report(5, "edge protection at d in {1/4, 1/2, 3/4}", worst < 1e-12,
         "max |Re<a|H'_wg|a>| = " + fmt(worst));
}

// --- criterion 6 ---------------------------------------------------------
double g0m_mainline = -1.0;  // shared with criterion 13

void criterion_6() {
  const SystemParams p = params(21, 8.0, 0.3 * pi, 0.75, 0.05);
  const Geometry geom = clean_geometry(p);
  bool ok = false;
  std::string detail;
  try {
    const double g0m = find_gamma0m(p, geom);
    g0m_mainline = g0m;
    const EffectiveHamiltonian h = build_effective_hamiltonian(geom, g0m);
    ModeSet modes = decompose(h);
    modes.edge_index = identify_edge_mode(modes, p);
    const double dw = modes.delta(modes.edge_index);
    const ScatteringRecord rec =
        amplitudes_direct(h, geom, dw, Direction::right_incident);
    const double beta = beta_factor(modes);
    ok = g0m >= 0.0241 && g0m <= 0.0251 && rec.reflection < 1e-4 &&
         std::abs(beta - 0.5) <= 0.02 && rec.absorption > 0.9;
    detail = "Gamma0m=" + fmt(g0m) + ", R_r=" + fmt(rec.reflection) +
             ", beta=" + fmt(beta) + ", eta=" + fmt(rec.absorption);
  } catch (const std::exception& ex) {
    detail = ex.what();
  }
  report(6, "reflection zero at the special spacing", ok, detail);
}

// --- criterion 7 ---------------------------------------------------------
void criterion_7() {
  const SystemParams p = params(21, 8.0, 0.3 * pi, 0.75, 0.0);
  const Geometry geom = clean_geometry(p);
  ModeSet modes = solve_modes(p, geom);
  modes.edge_index = identify_edge_mode(modes, p);
  const double dw = modes.delta(modes.edge_index);
  const ChannelSpectrum spec =
      interaction_spectra(modes, geom, Direction::right_incident, dw);
  const EdgeBulkSplit split = edge_bulk_split(spec, modes.edge_index);
  const double err_e = std::abs(split.xi_e - cxd(0.0, 2.0));
  const double err_b = std::abs(split.xi_b - cxd(0.0, -1.0));
  report(7, "edge/bulk interference split at Gamma0=0",
         err_e < 0.05 && err_b < 0.05,
         "|xi_e - 2i| = " + fmt(err_e) + ", |xi_b + i| = " + fmt(err_b) +
             ", phi0 = " + fmt(split.phi0));
}

// --- criterion 8 ---------------------------------------------------------
void criterion_8() {
  std::vector<int> ns;
  for (int n = 7; n <= 31; n += 2) ns.push_back(n);
  bool ok = false;
  std::string detail;
  try {
    const ScalingFit fit =
        decay_scaling_fit(params(7, 8.0, 0.3 * pi, 0.75, 0.05), ns);
    ok = fit.r_squared > 0.99 && fit.nu > 0.0;
    detail = "nu=" + fmt(fit.nu) + ", r^2=" + fmt(fit.r_squared);
  } catch (const ScalingBreakdown& ex) {
    detail = "breakdown: r^2=" + fmt(ex.r_squared);
  }
  report(8, "subradiant edge-decay scaling", ok, detail);
}

// --- criterion 9 ---------------------------------------------------------
void criterion_9() {
  // J0 = 0: no dimerized interaction, reflection reciprocal at resonance.
  const SystemParams p_flat = params(11, 0.0, 0.3 * pi, 0.75, 0.05);
  const Geometry g_flat = clean_geometry(p_flat);
  const EffectiveHamiltonian h_flat = build_effective_hamiltonian(g_flat, 0.05);
  const double dr_flat = std::abs(
      amplitudes_direct(h_flat, g_flat, 0.0, Direction::left_incident).reflection -
      amplitudes_direct(h_flat, g_flat, 0.0, Direction::right_incident).reflection);

  // phi -> pi/2: inversion symmetry restored (evaluated at the protected
  // spacing d = 1/4, where the residual slope in pi/2 - phi is small).
  const SystemParams p_sym = params(11, 8.0, pi / 2 - 1e-6, 0.25, 0.05);
  const Geometry g_sym = clean_geometry(p_sym);
  const double dr_sym = nonreciprocity(p_sym, g_sym, solve_modes(p_sym, g_sym));

  // Gamma0 = 0: time reversal forces reciprocity.
  const SystemParams p_tr = params(11, 8.0, 0.3 * pi, 0.75, 0.0);
  const Geometry g_tr = clean_geometry(p_tr);
  const double dr_tr = nonreciprocity(p_tr, g_tr, solve_modes(p_tr, g_tr));

  const bool ok = dr_flat < 1e-10 && dr_sym < 1e-6 && dr_tr < 1e-10;
  report(9, "symmetry-vanishing nonreciprocity", ok,
         "dR(J0=0)=" + fmt(dr_flat) + ", dR(phi->pi/2)=" + fmt(dr_sym) +
             ", dR(Gamma0=0)=" + fmt(dr_tr));
}

// --- criterion 10 --------------------------------------------------------
void criterion_10() {
  // Transmission dips near +-2 J0 somewhere in the three-spacing data set.
  const double band = 2.0 * 8.0;
  double best_plus = 1e9, best_minus = 1e9;
  for (double d : {0.25, 0.5, 0.75}) {
    const SystemParams p = params(11, 8.0, 0.3 * pi, d, 0.05);
    const Geometry geom = clean_geometry(p);
    const EffectiveHamiltonian h = build_effective_hamiltonian(geom, 0.05);
    const int count = 2401;
    std::vector<double> t(count);
    for (int k = 0; k < count; ++k) {
      const double dw = -24.0 + 48.0 * k / (count - 1);
      t[k] = amplitudes_direct(h, geom, dw, Direction::left_incident).transmission;
    }
    for (int k = 1; k + 1 < count; ++k) {
      if (t[k] < t[k - 1] && t[k] < t[k + 1]) {
        const double dw = -24.0 + 48.0 * k / (count - 1);
        best_plus = std::min(best_plus, std::abs(dw - band));
        best_minus = std::min(best_minus, std::abs(dw + band));
      }
    }
  }

  // Spectrum periodicity: one extra wavelength leaves {Delta_j} unchanged.
  const SystemParams p_base = params(11, 8.0, 0.3 * pi, 0.75, 0.05);
  const ModeSet ref = solve_modes(p_base, clean_geometry(p_base));
  Geometry stretched;  // hand-built, bypasses the mod-1 normalization
  stretched.positions.resize(11);
  for (int i = 0; i < 11; ++i) stretched.positions(i) = i * 1.75;
  stretched.couplings = clean_geometry(p_base).couplings;
  stretched.spacing = 1.75;
  const ModeSet far = decompose(build_effective_hamiltonian(stretched, 0.05));
  double worst = 0.0;
  for (int j = 0; j < 11; ++j)
    worst = std::max(worst, std::abs(ref.energies(j) - far.energies(j)));

  const bool ok = best_plus <= 0.5 && best_minus <= 0.5 && worst < 1e-10;
  report(10, "band dips near +-2J0 and lambda0 periodicity", ok,
         "dip offsets (" + fmt(best_plus) + ", " + fmt(best_minus) +
             ")Gamma, spectrum shift " + fmt(worst));
}

// --- criterion 11 --------------------------------------------------------
void criterion_11() {
  double worst = 1.0;
  for (double phi : {0.1 * pi, 0.3 * pi, 0.45 * pi}) {
    for (int n = 5; n <= 41; n += 4) {
      const SystemParams p = params(n, 8.0, phi, 0.75, 0.0);
      const BareModes bare = bare_modes(build_ssh_hamiltonian(clean_geometry(p)));
      const double ov = std::abs(
          bare.vectors.col(bare.zero_index()).dot(analytic_edge_state(n, phi)));
      worst = std::min(worst, ov);
    }
  }
  report(11, "analytic edge state vs numeric zero mode", worst > 1.0 - 1e-10,
         "min overlap = 1 - " + fmt(1.0 - worst));
}

// --- criterion 12 --------------------------------------------------------
void criterion_12() {
  const SystemParams p = params(21, 8.0, 0.3 * pi, 0.75, 0.0246);
  const Geometry geom = clean_geometry(p);
  const EffectiveHamiltonian h = build_effective_hamiltonian(geom, p.gamma0);
  ModeSet modes = decompose(h);
  modes.edge_index = identify_edge_mode(modes, p);
  const double carrier = modes.delta(modes.edge_index);

  PacketSpec packet;
  packet.gamma_packet = 0.01;
  packet.direction = Direction::right_incident;  // left-propagating input
  packet.reference_position = geom.positions(20);
  packet.carrier_detuning = carrier;
  const Trajectory traj = evolve(geom, h, packet, 1500.0, 0.5);

  bool ok = false;
  std::string detail;
  try {
    const double absorbed = integrated_absorption(traj);

    // Frequency-domain oracle: packet-weighted steady-state absorption,
    // Simpson rule across the band.
    const int panels = 16000;
    const double lo = carrier - 40.0, hi = carrier + 40.0;
    const double dx = (hi - lo) / panels;
    auto f = [&](double dw) {
      const double eta =
          amplitudes_direct(h, geom, dw, Direction::right_incident).absorption;
      const double g = packet.gamma_packet;
      return (g / pi) / ((dw - carrier) * (dw - carrier) + g * g) * eta;
    };
    double oracle = f(lo) + f(hi);
    for (int k = 1; k < panels; ++k) oracle += f(lo + k * dx) * (k % 2 ? 4.0 : 2.0);
    oracle *= dx / 3.0;

    const Eigen::VectorXd peaks = traj.peak_populations();
    bool edge_dominates = true;
    for (int i = 1; i < 21; ++i)
      if (peaks(0) <= peaks(i)) edge_dominates = false;

    const double rel = std::abs(absorbed - oracle) / oracle;
    ok = rel < 0.05 && edge_dominates;
    detail = "absorbed=" + fmt(absorbed) + ", oracle=" + fmt(oracle) +
             " (rel " + fmt(rel) + "), edge peak=" + fmt(peaks(0)) +
             ", max bulk peak=" + fmt(peaks.tail(20).maxCoeff());
  } catch (const std::exception& ex) {
    detail = ex.what();
  }
  report(12, "time-frequency consistency and edge dominance", ok, detail);
}

// --- criterion 13 --------------------------------------------------------
void criterion_13() {
  bool ok_eta = false, ok_peak = false;
  std::string detail;

  // (a) coupling disorder keeps the absorption high at the clean zero point
  const double g0m = g0m_mainline > 0 ? g0m_mainline : 0.0246;
  const SystemParams p = params(21, 8.0, 0.3 * pi, 0.75, g0m);
  DisorderSpec coupling;
  coupling.coupling_amplitude = 1.0;
  coupling.seed = 271828;
  coupling.n_samples = 100;
  double mean_eta = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Geometry geom = build_geometry(p, coupling, s);
    const EffectiveHamiltonian h = build_effective_hamiltonian(geom, g0m);
    ModeSet modes = decompose(h);
    double dw = 0.0;
    try {
      dw = modes.delta(identify_edge_mode(modes, p));
    } catch (const AmbiguousEdge&) {}
    mean_eta +=
        amplitudes_direct(h, geom, dw, Direction::right_incident).absorption;
  }
  mean_eta /= 100.0;
  ok_eta = mean_eta > 0.7;

  // (b) position disorder does not move the nonreciprocity peak
  const SystemParams pb = params(11, 8.0, 0.3 * pi, 0.75, 0.05);
  DisorderSpec position;
  position.position_amplitude = 0.002;
  position.seed = 161803;
  position.n_samples = 100;
  double best_d = -1.0, best_dr = -1.0;
  for (int k = 0; k <= 24; ++k) {
    const double d = 0.69 + 0.005 * k;
    SystemParams pd = pb;
    pd.spacing = d;
    double mean_dr = 0.0;
    for (int s = 0; s < 100; ++s) {
      const Geometry geom = build_geometry(pd, position, s);
      const EffectiveHamiltonian h = build_effective_hamiltonian(geom, pd.gamma0);
      ModeSet modes = decompose(h);
      double dw = 0.0;
      try {
        dw = modes.delta(identify_edge_mode(modes, pd));
      } catch (const AmbiguousEdge&) {}
      const double r_l =
          amplitudes_direct(h, geom, dw, Direction::left_incident).reflection;
      const double r_r =
          amplitudes_direct(h, geom, dw, Direction::right_incident).reflection;
      mean_dr += std::abs(r_l - r_r);
    }
    mean_dr /= 100.0;
    if (mean_dr > best_dr) {
      best_dr = mean_dr;
      best_d = d;
    }
  }
  ok_peak = std::abs(best_d - 0.75) <= 0.02;

  detail = "mean eta = " + fmt(mean_eta) + " (coupling disorder), dR peak at d = " +
           fmt(best_d);
  report(13, "disorder robustness", ok_eta && ok_peak, detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite (Gamma = 1, lengths in lambda0)\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  if (n_failed == 0)
    std::printf("all 13 criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", n_failed);
  return n_failed == 0 ? 0 : 1;
}
