// Biorthogonal eigenanalysis of the effective Hamiltonian and everything
// edge-state related.

#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>

#include "sshwg/model.hpp"
#include "sshwg/types.hpp"

namespace sshwg {

// Eigensystem of the (complex symmetric) effective Hamiltonian. Because
// M = M^T, the left eigenvector row of mode j is the plain transpose of the
// right one; both are stored after rescaling so <psi_j^L|psi_j^R> = 1
// (equivalently v^T v = 1, no conjugation). Modes are sorted by ascending
// Re E, ties by ascending Im E, so CSV output is reproducible.
struct ModeSet {
  Eigen::VectorXcd energies;  // E_j = Delta_j - i*Gamma_j
  Eigen::MatrixXcd right;     // column j: |psi_j^R>
  Eigen::MatrixXcd left;      // column j: <psi_j^L| acts as left.col(j)^T
  double gamma0 = 0.0;
  int edge_index = -1;        // set by identify_edge_mode; -1 if unknown
  bool near_defective = false;
  double min_biorthogonal_norm = 1.0;  // min_j |v_j^T v_j| before rescaling

  int size() const { return static_cast<int>(energies.size()); }
  double delta(int j) const { return energies(j).real(); }
  double gamma(int j) const { return -energies(j).imag(); }
  // Collective decay into the waveguide, with the uniform environment part
  // removed.
  double gamma_tilde(int j) const { return gamma(j) - gamma0; }
};

// Orthonormal eigensystem of the bare SSH chain.
struct BareModes {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd vectors;   // column j: |alpha_j>

  int size() const { return static_cast<int>(energies.size()); }
  // Index of the in-gap zero mode (smallest |energy|).
  int zero_index() const;
};

// Full biorthogonal eigensystem. Never throws on exceptional-point proximity:
// the ModeSet is returned with near_defective set when any biorthogonal norm
// falls below 1e-10.
ModeSet decompose(const EffectiveHamiltonian& h);

BareModes bare_modes(const Eigen::MatrixXd& h_ssh);

// Closed-form left edge state of the dimerized chain: supported on odd sites
// only, amplitude (-1)^((i-1)/2) * tan(phi/2)^(i-1) on site i (1-based),
// normalized.
Eigen::VectorXd analytic_edge_state(int n_atoms, double phi);
Eigen::VectorXd analytic_edge_state(const SystemParams& params);

// Pick the mode with maximal |<alpha_edge|psi_j^R>| / ||psi_j^R||; ties go to
// the smaller |Delta_j|. Throws AmbiguousEdge when the best overlap is below
// 0.5 (no gap, no protection). Does not mutate `modes`.
int identify_edge_mode(const ModeSet& modes, const Eigen::VectorXd& edge_reference);
int identify_edge_mode(const ModeSet& modes, const SystemParams& params);

// Re<alpha_edge|H'_wg|alpha_edge>: the waveguide-induced energy shift of the
// analytic edge state. Vanishes at d in {1/4, 1/2, 3/4} where the coherent
// part only couples odd and even sites.
double edge_lamb_shift(const Geometry& geom, const SystemParams& params);

// First-order corrected edge channel vectors
//   |psi^R> ~ |a0> + sum_j <a_j|H'|a0>/(e0 - e_j) |a_j>
//   <psi^L| ~ <a0| + sum_j <a0|H'|a_j>/(e0 - e_j) <a_j|
// for h_prime = H'_en + H'_wg. Throws GapTooSmall when the bare gap around
// the zero mode is below Gamma.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> perturbative_edge_channel(
    const BareModes& bare, const Eigen::MatrixXcd& h_prime);

// Convenience: build the effective Hamiltonian for (params, geom) and
// decompose it. Does not identify the edge.
ModeSet solve_modes(const SystemParams& params, const Geometry& geom);

// CSV dump, one row per mode:
//   j,Delta,Gamma_j,Gamma_tilde,is_edge,participation_ratio
// with the participation ratio 1 / sum_i |psi_i|^4 of the unit-normalized
// right vector (N for a uniform mode, ~1 for a single-site one).
std::string mode_set_csv(const ModeSet& modes);

}  // namespace sshwg
