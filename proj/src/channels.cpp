#include "sshwg/channels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sshwg/errors.hpp"
#include "sshwg/scattering.hpp"

namespace sshwg {

ChannelSpectrum interaction_spectra(const ModeSet& modes, const Geometry& geom,
                                    Direction dir, double detuning) {
  const int n = modes.size();
  const Eigen::VectorXcd v = phase_vector(geom, dir);

  ChannelSpectrum spectrum;
  spectrum.direction = dir;
  spectrum.detuning = detuning;
  spectrum.xi_refl.resize(n);
  spectrum.xi_trans.resize(n);
  spectrum.xi_weighted.resize(n);

  for (int j = 0; j < n; ++j) {
    const cxd left_v = (modes.left.col(j).array() * v.array()).sum();
    const cxd vt_r = (v.array() * modes.right.col(j).array()).sum();
    const cxd vdag_r = v.dot(modes.right.col(j));
    spectrum.xi_refl(j) = vt_r * left_v;
    spectrum.xi_trans(j) = vdag_r * left_v;
    spectrum.xi_weighted(j) =
        gamma_wg * spectrum.xi_refl(j) / (detuning - modes.energies(j));
  }
  return spectrum;
}

std::pair<double, double> anisotropy_ratios(const ModeSet& modes,
                                            const Geometry& geom) {
  if (modes.edge_index < 0)
    throw std::logic_error("anisotropy_ratios: edge mode not identified");
  const int j0 = modes.edge_index;
  const double dw = modes.delta(j0);

  const ChannelSpectrum left =
      interaction_spectra(modes, geom, Direction::left_incident, dw);
  const ChannelSpectrum right =
      interaction_spectra(modes, geom, Direction::right_incident, dw);

  const double denom_refl = std::abs(right.xi_refl(j0));
  const double denom_trans = std::abs(right.xi_trans(j0));
  if (denom_refl < 1e-14 || denom_trans < 1e-14)
    throw DegenerateRatio("anisotropy_ratios: vanishing edge interaction");

  return {std::abs(left.xi_refl(j0)) / denom_refl,
          std::abs(left.xi_trans(j0)) / denom_trans};
}

EdgeBulkSplit edge_bulk_split(const ChannelSpectrum& spectrum, int edge_index) {
  if (edge_index < 0 || edge_index >= spectrum.size())
    throw std::invalid_argument("edge_bulk_split: edge index out of range");
  EdgeBulkSplit split;
  split.xi_e = spectrum.xi_weighted(edge_index);
  split.xi_b = spectrum.xi_weighted.sum() - split.xi_e;
  split.phi0 = std::arg(split.xi_e);
  return split;
}

std::pair<cxd, cxd> perturbative_spectra(const BareModes& bare,
                                         const Eigen::MatrixXcd& h_prime,
                                         const Geometry& geom, Direction dir) {
  const int n = bare.size();
  const int j0 = bare.zero_index();

  double gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j)
    if (j != j0) gap = std::min(gap, std::abs(bare.energies(j0) - bare.energies(j)));
  if (gap < gamma_wg) throw GapTooSmall(gap);

  const Eigen::VectorXcd v = phase_vector(geom, dir);
  // av_l = <a_l|V; X_lk = av_l av_k, Y_lk = av_l conj(av_k) for real a_l.
  Eigen::VectorXcd av(n);
  for (int l = 0; l < n; ++l)
    av(l) = (bare.vectors.col(l).cast<cxd>().array() * v.array()).sum();

  const Eigen::VectorXcd a0 = bare.vectors.col(j0).cast<cxd>();
  cxd xi = av(j0) * av(j0);
  cxd xi_t = av(j0) * std::conj(av(j0));
  for (int j = 0; j < n; ++j) {
    if (j == j0) continue;
    const Eigen::VectorXcd aj = bare.vectors.col(j).cast<cxd>();
    const cxd a_j = (a0.transpose() * h_prime * aj)(0) / bare.energies(j);
    const cxd b_j = (aj.transpose() * h_prime * a0)(0) / bare.energies(j);
    xi -= a_j * (av(j) * av(j0)) + b_j * (av(j0) * av(j));
    xi_t -= a_j * (av(j) * std::conj(av(j0))) + b_j * (av(j0) * std::conj(av(j)));
  }
  return {xi, xi_t};
}

}  // namespace sshwg
