// Core domain types shared by every module.
//
// Units: the single-atom decay to the waveguide, Gamma, is the energy unit
// (Gamma = 1); lengths are in units of the resonant wavelength lambda0, so a
// propagation phase over a distance x is simply 2*pi*x. The rotating frame
// puts the atomic transition at zero, and detunings delta_omega are measured
// from it.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace sshwg {

using cxd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Waveguide decay rate; fixed to one, it is the energy unit everywhere.
inline constexpr double gamma_wg = 1.0;

// Propagation direction of the incident photon. The sign enters every phase
// factor: s = +1 for a left-incident (right-moving) photon, s = -1 for a
// right-incident one.
enum class Direction { left_incident, right_incident };

inline double direction_sign(Direction dir) {
  return dir == Direction::left_incident ? 1.0 : -1.0;
}

inline const char* direction_name(Direction dir) {
  return dir == Direction::left_incident ? "left" : "right";
}

inline Direction reverse(Direction dir) {
  return dir == Direction::left_incident ? Direction::right_incident
                                         : Direction::left_incident;
}

// Physical parameters of the dimerized atom array coupled to the waveguide.
// Couplings alternate J- , J+, J-, ... along the chain with
// J_-+ = j0 * (1 -+ cos(phi)); phi in [0, pi/2) keeps J- <= J+ and a single
// left-localized edge state for odd n_atoms.
struct SystemParams {
  int n_atoms = 1;        // N, odd
  double j0 = 0.0;        // coupling scale (units of Gamma)
  double phi = 0.0;       // dimerization angle, radians, [0, pi/2)
  double spacing = 0.25;  // atomic spacing d (units of lambda0), mod 1
  double gamma0 = 0.0;    // environment decay Gamma0 (units of Gamma)

  double j_minus() const { return j0 * (1.0 - std::cos(phi)); }
  double j_plus() const { return j0 * (1.0 + std::cos(phi)); }

  // Spacing is physically periodic in one wavelength.
  double spacing_mod() const { return spacing - std::floor(spacing); }

  void validate() const {
    if (n_atoms < 1 || n_atoms % 2 == 0)
      throw std::invalid_argument("SystemParams: n_atoms must be a positive odd integer");
    if (!(phi >= 0.0) || !(phi < pi / 2.0))
      throw std::invalid_argument("SystemParams: phi must lie in [0, pi/2)");
    if (j0 < 0.0)
      throw std::invalid_argument("SystemParams: j0 must be >= 0");
    if (gamma0 < 0.0)
      throw std::invalid_argument("SystemParams: gamma0 must be >= 0");
    if (!std::isfinite(spacing))
      throw std::invalid_argument("SystemParams: spacing must be finite");
  }

  SystemParams with_n(int n) const {
    SystemParams p = *this;
    p.n_atoms = n;
    return p;
  }
  SystemParams with_gamma0(double g0) const {
    SystemParams p = *this;
    p.gamma0 = g0;
    return p;
  }
};

// One disorder ensemble description. Amplitudes are half-widths of uniform
// distributions; zero amplitudes reproduce the clean system bit-exactly.
struct DisorderSpec {
  double coupling_amplitude = 0.0;  // on J_{i,i+1}, units of Gamma
  double position_amplitude = 0.0;  // on x_i, units of lambda0
  std::uint64_t seed = 0;
  int n_samples = 1;

  void validate() const {
    if (coupling_amplitude < 0.0 || position_amplitude < 0.0)
      throw std::invalid_argument("DisorderSpec: amplitudes must be >= 0");
    if (n_samples < 1)
      throw std::invalid_argument("DisorderSpec: n_samples must be >= 1");
  }
};

}  // namespace sshwg
