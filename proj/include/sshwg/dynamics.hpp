// Time-domain single-photon wave-packet scattering in the single-excitation
// sector: amplitudes c_i(t) driven by the incoming packet,
//   dc/dt = -i M c - i Omega(t),
// with Omega_i(t) = sqrt(Gamma) * E(t) * exp(i*s*2*pi*xp_i) and the
// one-sided exponential envelope E(t) = sqrt(2*gamma) * theta(t-t0)
// * exp(-(gamma + i*carrier) (t-t0)), unit norm. The drive prefactor is
// fixed so the narrow-band single-atom limit reproduces the steady-state
// absorption exactly.

#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "sshwg/model.hpp"
#include "sshwg/types.hpp"

namespace sshwg {

struct PacketSpec {
  double gamma_packet = 0.1;  // spectral half-width gamma (units of Gamma)
  Direction direction = Direction::right_incident;
  double reference_position = 0.0;  // launch reference (x_N for a left-mover)
  double t_start = 0.0;             // packet front reaches the reference here
  double carrier_detuning = 0.0;    // set to the edge resonance by callers

  bool narrow_band() const { return gamma_packet < 0.1; }
};

// Integrated trajectory. Alongside the atomic amplitudes it accumulates the
// environment loss L_env(t) = 2*Gamma0 int sum_i |c_i|^2 dt and the
// transmitted/reflected waveguide output fluxes from the input-output
// fields, so the norm ledger
//   sum|c|^2 + L_env + W_trans + W_refl = int |E|^2 dt
// closes to integrator tolerance.
struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXcd amplitudes;        // n_atoms x n_steps
  std::vector<double> env_loss;       // L_env(t)
  std::vector<double> wg_transmitted; // cumulative |E_T|^2 flux
  std::vector<double> wg_reflected;   // cumulative |E_R|^2 flux
  double input_norm = 0.0;            // int_0^t_end |E|^2 dt (analytic)
  bool valid = true;
  std::string status;

  int n_atoms() const { return static_cast<int>(amplitudes.rows()); }
  int n_steps() const { return static_cast<int>(times.size()); }
  double population(int atom, int step) const {
    return std::norm(amplitudes(atom, step));
  }
  // Peak population of each atom over the whole trajectory.
  Eigen::VectorXd peak_populations() const;
};

// Drive the array with `packet` from the ground state. Adaptive embedded
// Runge-Kutta (Dormand-Prince 5(4)), relative tolerance 1e-9; a failed step
// size search marks the partial trajectory invalid instead of throwing.
Trajectory evolve(const Geometry& geom, const EffectiveHamiltonian& h,
                  const PacketSpec& packet, double t_end, double dt_max);

// Undriven decay of an initial single-excitation amplitude vector.
Trajectory evolve_free(const Geometry& geom, const EffectiveHamiltonian& h,
                       const Eigen::VectorXcd& c0, double t_end, double dt_max);

// L_env(t_end): the fraction of the photon emitted into the environment.
// Requires a valid trajectory with residual excitation below 1e-6
// (TruncatedEvolution otherwise).
double integrated_absorption(const Trajectory& traj);

}  // namespace sshwg
