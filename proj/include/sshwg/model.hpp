// Geometry realizations and Hamiltonian builders.

#pragma once

#include <Eigen/Dense>

#include "sshwg/types.hpp"

namespace sshwg {

// One concrete realization of the array: positions along the waveguide and
// nearest-neighbor couplings, disorder already applied. `spacing` keeps the
// clean lattice constant; the scattering module uses it to place the input
// port reference plane (see scattering.hpp).
struct Geometry {
  Eigen::VectorXd positions;  // strictly increasing, units of lambda0
  Eigen::VectorXd couplings;  // size N-1, units of Gamma
  double spacing = 0.0;

  int n_atoms() const { return static_cast<int>(positions.size()); }
};

// Non-Hermitian effective Hamiltonian
//   M = H_ssh - i*Gamma0*Id - i*Gamma * exp(i*2*pi*|x_i - x_j|),
// complex symmetric, diagonal imaginary part -(Gamma0 + Gamma).
struct EffectiveHamiltonian {
  Eigen::MatrixXcd matrix;
  double gamma0 = 0.0;

  int n_atoms() const { return static_cast<int>(matrix.rows()); }
};

// Materialize sample `sample_index` of the ensemble:
//   x_i = (i-1)*d + tau_i,   J_{i,i+1} = J_alt + eps_i,
// tau/eps uniform within the disorder amplitudes, deterministic in
// (seed, sample_index). Spacing is taken modulo one wavelength.
Geometry build_geometry(const SystemParams& params, const DisorderSpec& disorder,
                        int sample_index);

// Disorder-free realization.
Geometry clean_geometry(const SystemParams& params);

// Tridiagonal SSH matrix: zero diagonal (rotating frame), couplings on the
// off-diagonals.
Eigen::MatrixXd build_ssh_hamiltonian(const Geometry& geom);

// Waveguide-mediated long-range term -i*Gamma*exp(i*2*pi*|x_i - x_j|),
// including the i = j diagonal -i*Gamma.
Eigen::MatrixXcd waveguide_term(const Geometry& geom);

EffectiveHamiltonian build_effective_hamiltonian(const Geometry& geom,
                                                 double gamma0);

}  // namespace sshwg
