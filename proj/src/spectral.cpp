#include "sshwg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sshwg/errors.hpp"

namespace sshwg {

namespace {

constexpr double defective_norm_tol = 1e-10;

}  // namespace

int BareModes::zero_index() const {
  int best = 0;
  for (int j = 1; j < size(); ++j)
    if (std::abs(energies(j)) < std::abs(energies(best))) best = j;
  return best;
}

ModeSet decompose(const EffectiveHamiltonian& h) {
  const int n = h.n_atoms();
  ModeSet modes;
  modes.gamma0 = h.gamma0;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h.matrix, true);
  if (solver.info() != Eigen::Success)
    throw Error("decompose: eigensolver failed to converge");

  const Eigen::VectorXcd& ev = solver.eigenvalues();
  const Eigen::MatrixXcd& vec = solver.eigenvectors();

  // Sort by (Re E, Im E) for reproducible mode indices.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });

  modes.energies.resize(n);
  modes.right.resize(n, n);
  modes.left.resize(n, n);
  modes.min_biorthogonal_norm = 1.0;

  for (int k = 0; k < n; ++k) {
    const int j = order[k];
    modes.energies(k) = ev(j);
    Eigen::VectorXcd v = vec.col(j);
    // M symmetric: the left row equals the transposed right vector, and the
    // biorthogonal normalization is v^T v = 1 (no conjugation).
    const cxd s = (v.transpose() * v)(0);
    modes.min_biorthogonal_norm =
        std::min(modes.min_biorthogonal_norm, std::abs(s));
    if (std::abs(s) > defective_norm_tol) v /= std::sqrt(s);
    modes.right.col(k) = v;
    modes.left.col(k) = v;
  }
  modes.near_defective = modes.min_biorthogonal_norm < defective_norm_tol;
  return modes;
}

BareModes bare_modes(const Eigen::MatrixXd& h_ssh) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h_ssh);
  if (solver.info() != Eigen::Success)
    throw Error("bare_modes: eigensolver failed to converge");
  BareModes bare;
  bare.energies = solver.eigenvalues();
  bare.vectors = solver.eigenvectors();
  return bare;
}

Eigen::VectorXd analytic_edge_state(int n_atoms, double phi) {
  if (n_atoms < 1 || n_atoms % 2 == 0)
    throw std::invalid_argument("analytic_edge_state: n_atoms must be odd");
  const double t = std::tan(0.5 * phi);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n_atoms);
  double amp = 1.0;
  for (int m = 0; 2 * m < n_atoms; ++m) {
    alpha(2 * m) = (m % 2 == 0) ? amp : -amp;
    amp *= t * t;
  }
  alpha.normalize();
  return alpha;
}

Eigen::VectorXd analytic_edge_state(const SystemParams& params) {
  return analytic_edge_state(params.n_atoms, params.phi);
}

int identify_edge_mode(const ModeSet& modes, const Eigen::VectorXd& edge_reference) {
  const int n = modes.size();
  if (n < 1) throw std::invalid_argument("identify_edge_mode: empty mode set");

  // Overlap of the unit reference with the l2-normalized right vector; the
  // biorthogonal scaling must not inflate it.
  std::vector<double> overlap(n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXcd& v = modes.right.col(j);
    overlap[j] = std::abs(edge_reference.cast<cxd>().dot(v)) / v.norm();
  }

  double best_ov = -1.0;
  for (int j = 0; j < n; ++j) best_ov = std::max(best_ov, overlap[j]);

  // Near-ties resolved by the smaller energy shift.
  int best = -1;
  for (int j = 0; j < n; ++j) {
    if (overlap[j] < best_ov - 1e-9) continue;
    if (best < 0 || std::abs(modes.delta(j)) < std::abs(modes.delta(best)))
      best = j;
  }

  int second = -1;
  for (int j = 0; j < n; ++j) {
    if (j == best) continue;
    if (second < 0 || overlap[j] > overlap[second]) second = j;
  }

  if (best_ov < 0.5)
    throw AmbiguousEdge(best, overlap[best], second,
                        second >= 0 ? overlap[second] : 0.0);
  return best;
}

int identify_edge_mode(const ModeSet& modes, const SystemParams& params) {
  return identify_edge_mode(modes, analytic_edge_state(params));
}

double edge_lamb_shift(const Geometry& geom, const SystemParams& params) {
  const Eigen::VectorXd alpha = analytic_edge_state(params.n_atoms, params.phi);
  const Eigen::MatrixXcd w = waveguide_term(geom);
  const cxd shift = (alpha.cast<cxd>().transpose() * w * alpha.cast<cxd>())(0);
  return shift.real();
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> perturbative_edge_channel(
    const BareModes& bare, const Eigen::MatrixXcd& h_prime) {
  const int n = bare.size();
  const int j0 = bare.zero_index();

  double gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j)
    if (j != j0) gap = std::min(gap, std::abs(bare.energies(j0) - bare.energies(j)));
  if (gap < gamma_wg) throw GapTooSmall(gap);

  const Eigen::VectorXcd a0 = bare.vectors.col(j0).cast<cxd>();
  Eigen::VectorXcd right = a0;
  Eigen::VectorXcd left = a0;
  for (int j = 0; j < n; ++j) {
    if (j == j0) continue;
    const Eigen::VectorXcd aj = bare.vectors.col(j).cast<cxd>();
    const double denom = bare.energies(j0) - bare.energies(j);
    const cxd me_j_to_0 = (aj.transpose() * h_prime * a0)(0);  // <a_j|H'|a_0>
    const cxd me_0_to_j = (a0.transpose() * h_prime * aj)(0);  // <a_0|H'|a_j>
    right += me_j_to_0 / denom * aj;
    left += me_0_to_j / denom * aj;
  }
  return {right, left};
}

ModeSet solve_modes(const SystemParams& params, const Geometry& geom) {
  return decompose(build_effective_hamiltonian(geom, params.gamma0));
}

std::string mode_set_csv(const ModeSet& modes) {
  std::ostringstream os;
  os << "j,Delta,Gamma_j,Gamma_tilde,is_edge,participation_ratio\n";
  char buf[40];
  const auto g17 = [&buf](double v) -> const char* {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  };
  for (int j = 0; j < modes.size(); ++j) {
    const Eigen::VectorXcd v = modes.right.col(j) / modes.right.col(j).norm();
    double inv_pr = 0.0;
    for (int i = 0; i < modes.size(); ++i) inv_pr += std::norm(v(i)) * std::norm(v(i));
    os << j << ',' << g17(modes.delta(j)) << ',' << g17(modes.gamma(j)) << ','
       << g17(modes.gamma_tilde(j)) << ',' << (j == modes.edge_index ? 1 : 0)
       << ',' << g17(1.0 / inv_pr) << '\n';
  }
  return os.str();
}

}  // namespace sshwg
