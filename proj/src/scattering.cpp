#include "sshwg/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sshwg/brent.hpp"
#include "sshwg/errors.hpp"

namespace sshwg {

namespace {

ScatteringRecord make_record(double detuning, Direction dir, cxd t, cxd r) {
  ScatteringRecord rec;
  rec.detuning = detuning;
  rec.direction = dir;
  rec.t = t;
  rec.r = r;
  rec.transmission = std::norm(t);
  rec.reflection = std::norm(r);
  rec.absorption = 1.0 - rec.transmission - rec.reflection;
  return rec;
}

}  // namespace

Eigen::VectorXcd phase_vector(const Geometry& geom, Direction dir) {
  const double s = direction_sign(dir);
  const int n = geom.n_atoms();
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i)
    v(i) = std::polar(1.0, s * two_pi * (geom.positions(i) + geom.spacing));
  return v;
}

ScatteringRecord amplitudes_direct(const EffectiveHamiltonian& h,
                                   const Geometry& geom, double detuning,
                                   Direction dir) {
  const int n = h.n_atoms();
  const Eigen::VectorXcd v = phase_vector(geom, dir);

  Eigen::MatrixXcd a = -h.matrix;
  a.diagonal().array() += detuning;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const Eigen::VectorXcd y = lu.solve(v);  // y = G V

  // A genuinely singular resolvent leaves a large residual (or non-finite
  // entries); locate the offending real eigenvalue for the report.
  const double residual = (a * y - v).norm();
  if (!y.allFinite() || residual > 1e-6 * std::sqrt(static_cast<double>(n))) {
    const Eigen::VectorXcd ev =
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(h.matrix, false).eigenvalues();
    int worst = 0;
    for (int j = 1; j < n; ++j)
      if (std::abs(ev(j) - detuning) < std::abs(ev(worst) - detuning)) worst = j;
    throw SingularResolvent(worst, detuning);
  }

  const cxd t = 1.0 - cxd(0.0, gamma_wg) * v.dot(y);                    // V^dag y
  const cxd r = -cxd(0.0, gamma_wg) * (v.array() * y.array()).sum();    // V^T y
  return make_record(detuning, dir, t, r);
}

ScatteringRecord amplitudes_modal(const ModeSet& modes, const Geometry& geom,
                                  double detuning, Direction dir) {
  if (modes.near_defective) throw NearDefective(modes.min_biorthogonal_norm);
  const int n = modes.size();
  const Eigen::VectorXcd v = phase_vector(geom, dir);

  cxd sum_t = 0.0, sum_r = 0.0;
  for (int j = 0; j < n; ++j) {
    const cxd left_v = (modes.left.col(j).array() * v.array()).sum();  // <psi^L|V
    const cxd vdag_r = v.dot(modes.right.col(j));                      // V^dag|psi^R>
    const cxd vt_r = (v.array() * modes.right.col(j).array()).sum();   // V^T|psi^R>
    const cxd denom = detuning - modes.energies(j);  // = dw - Delta_j + i Gamma_j
    sum_t += vdag_r * left_v / denom;
    sum_r += vt_r * left_v / denom;
  }
  const cxd t = 1.0 - cxd(0.0, gamma_wg) * sum_t;
  const cxd r = -cxd(0.0, gamma_wg) * sum_r;
  return make_record(detuning, dir, t, r);
}

ScatteringRecord single_qubit(double detuning, double gamma0) {
  const cxd t = 1.0 - cxd(0.0, gamma_wg) / cxd(detuning, gamma_wg + gamma0);
  return make_record(detuning, Direction::left_incident, t, t - 1.0);
}

double nonreciprocity(const SystemParams& params, const Geometry& geom,
                      const ModeSet& modes) {
  const int edge = modes.edge_index >= 0 ? modes.edge_index
                                         : identify_edge_mode(modes, params);
  const double dw = modes.delta(edge);
  const EffectiveHamiltonian h = build_effective_hamiltonian(geom, params.gamma0);
  const double r_l =
      amplitudes_direct(h, geom, dw, Direction::left_incident).reflection;
  const double r_r =
      amplitudes_direct(h, geom, dw, Direction::right_incident).reflection;
  return std::abs(r_l - r_r);
}

namespace {

// Right-incident reflection at the Gamma0-dependent edge resonance.
double edge_resonant_rr(const Geometry& geom, const Eigen::VectorXd& edge_ref,
                        double gamma0) {
  const EffectiveHamiltonian h = build_effective_hamiltonian(geom, gamma0);
  ModeSet modes = decompose(h);
  const int edge = identify_edge_mode(modes, edge_ref);
  return amplitudes_direct(h, geom, modes.delta(edge),
                           Direction::right_incident)
      .reflection;
}

}  // namespace

double find_gamma0m(const SystemParams& params, const Geometry& geom) {
  const Eigen::VectorXd edge_ref = analytic_edge_state(params);
  const auto rr = [&](double g0) { return edge_resonant_rr(geom, edge_ref, g0); };

  // The dip width tracks the edge decay, which can be orders of magnitude
  // below Gamma, so the coarse bracketing scan is log-spaced.
  const auto scan = [&](double lo, double hi, int count, double& best_g,
                        double& best_r) {
    const double step = std::log(hi / lo) / (count - 1);
    for (int k = 0; k < count; ++k) {
      const double g0 = lo * std::exp(k * step);
      const double r = rr(g0);
      if (r < best_r) {
        best_r = r;
        best_g = g0;
      }
    }
  };

  double best_g = 1e-6 * gamma_wg, best_r = rr(best_g);
  scan(1e-6 * gamma_wg, gamma_wg, 97, best_g, best_r);
  if (best_g > 0.99 * gamma_wg)
    scan(gamma_wg, 10.0 * gamma_wg, 33, best_g, best_r);

  const double lo = best_g / 1.3, hi = std::min(best_g * 1.3, 10.0 * gamma_wg);
  auto [g0m, rmin] = brent_minimize(rr, lo, hi, 1e-10);
  if (rmin > best_r) {
    g0m = best_g;
    rmin = best_r;
  }
  if (!(rmin < 1e-8)) throw NoZeroFound(g0m, rmin);
  return g0m;
}

double beta_factor(const ModeSet& modes) {
  if (modes.edge_index < 0)
    throw std::logic_error("beta_factor: edge mode not identified");
  const double gt = modes.gamma_tilde(modes.edge_index);
  return gt / (gt + modes.gamma0);
}

ScalingFit decay_scaling_fit(const SystemParams& params_template,
                             const std::vector<int>& n_values) {
  if (n_values.size() < 3)
    throw std::invalid_argument("decay_scaling_fit: need at least 3 sizes");

  std::vector<double> xs, ys;
  for (int n : n_values) {
    SystemParams p = params_template.with_n(n);
    p.validate();
    const Geometry geom = clean_geometry(p);
    ModeSet modes = solve_modes(p, geom);
    const int edge = identify_edge_mode(modes, p);
    const double gt = modes.gamma_tilde(edge);
    if (!(gt > 0.0))
      throw Error("decay_scaling_fit: nonpositive edge decay at N = " +
                  std::to_string(n));
    xs.push_back(static_cast<double>(n));
    ys.push_back(-std::log(gt));
  }

  const auto m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  ScalingFit fit;
  fit.nu = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.nu * sx) / m;

  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / m;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fit_y = fit.nu * xs[i] + fit.intercept;
    ss_res += (ys[i] - fit_y) * (ys[i] - fit_y);
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;

  if (fit.r_squared < 0.9) throw ScalingBreakdown(fit.nu, fit.r_squared);
  return fit;
}

}  // namespace sshwg
