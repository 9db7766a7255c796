// Per-mode interaction spectra: how much each eigenmode contributes to the
// reflection (Xi_j = V^T |psi_j^R><psi_j^L| V) and transmission
// (Xi~_j = V^dag |psi_j^R><psi_j^L| V) of a photon, and the detuning/decay
// weighted channel amplitudes xi_j that sum to i*r.

#pragma once

#include <Eigen/Dense>

#include <utility>

#include "sshwg/model.hpp"
#include "sshwg/spectral.hpp"
#include "sshwg/types.hpp"

namespace sshwg {

struct ChannelSpectrum {
  Eigen::VectorXcd xi_refl;     // Xi_j
  Eigen::VectorXcd xi_trans;    // Xi~_j
  Eigen::VectorXcd xi_weighted; // xi_j = Gamma*Xi_j/(dw - Delta_j + i*Gamma_j)
  Direction direction = Direction::left_incident;
  double detuning = 0.0;        // dw used in the weights

  int size() const { return static_cast<int>(xi_refl.size()); }
};

// Edge channel vs summed bulk channels; xi_e + xi_b equals the full weighted
// sum, and the reflection amplitude is r = -i*(xi_e + xi_b).
struct EdgeBulkSplit {
  cxd xi_e{0.0, 0.0};
  cxd xi_b{0.0, 0.0};
  double phi0 = 0.0;  // arg(xi_e), the common interference phase
};

// All three spectra for one incidence direction, weighted at `detuning`
// (callers normally pass the edge resonance Delta_edge).
ChannelSpectrum interaction_spectra(const ModeSet& modes, const Geometry& geom,
                                    Direction dir, double detuning);

// zeta = |Xi_edge^left / Xi_edge^right| and the transmission analogue.
// Requires modes.edge_index; throws DegenerateRatio on a vanishing
// denominator.
std::pair<double, double> anisotropy_ratios(const ModeSet& modes,
                                            const Geometry& geom);

EdgeBulkSplit edge_bulk_split(const ChannelSpectrum& spectrum, int edge_index);

// First-order edge-channel spectra from the bare modes:
//   Xi_edge  ~ X00 - sum_j (a_j X_{j0} + b_j X_{0j}),  X_lk = <a_l|VV^T|a_k>
//   Xi~_edge ~ Y00 - sum_j (a_j Y_{j0} + b_j Y_{0j}),  Y_lk = <a_l|VV^dag|a_k>
// with a_j = <a_0|H'|a_j>/e_j and b_j = <a_j|H'|a_0>/e_j. Returns
// (Xi_edge, Xi~_edge); throws GapTooSmall like perturbative_edge_channel.
std::pair<cxd, cxd> perturbative_spectra(const BareModes& bare,
                                         const Eigen::MatrixXcd& h_prime,
                                         const Geometry& geom, Direction dir);

}  // namespace sshwg
