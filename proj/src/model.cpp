#include "sshwg/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sshwg/rng.hpp"

namespace sshwg {

Geometry build_geometry(const SystemParams& params, const DisorderSpec& disorder,
                        int sample_index) {
  params.validate();
  disorder.validate();
  if (sample_index < 0 || sample_index >= disorder.n_samples)
    throw std::invalid_argument("build_geometry: sample_index out of range");

  const int n = params.n_atoms;
  const double d = params.spacing_mod();
  CounterRng rng(disorder.seed, static_cast<std::uint64_t>(sample_index));

  Geometry geom;
  geom.spacing = d;
  geom.positions.resize(n);
  for (int i = 0; i < n; ++i)
    geom.positions(i) = i * d + rng.uniform_pm(disorder.position_amplitude);

  geom.couplings.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double j_clean = (i % 2 == 0) ? params.j_minus() : params.j_plus();
    geom.couplings(i) = j_clean + rng.uniform_pm(disorder.coupling_amplitude);
  }

  for (int i = 0; i + 1 < n; ++i) {
    if (!(geom.positions(i) < geom.positions(i + 1)))
      throw std::invalid_argument(
          "build_geometry: positions not strictly increasing (spacing " +
          std::to_string(d) + " too small for the position disorder)");
  }
  return geom;
}

Geometry clean_geometry(const SystemParams& params) {
  return build_geometry(params, DisorderSpec{}, 0);
}

Eigen::MatrixXd build_ssh_hamiltonian(const Geometry& geom) {
  const int n = geom.n_atoms();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = geom.couplings(i);
    h(i + 1, i) = geom.couplings(i);
  }
  return h;
}

Eigen::MatrixXcd waveguide_term(const Geometry& geom) {
  const int n = geom.n_atoms();
  Eigen::MatrixXcd w(n, n);
  for (int i = 0; i < n; ++i) {
    w(i, i) = cxd(0.0, -gamma_wg);
    for (int j = i + 1; j < n; ++j) {
      const double phase = two_pi * (geom.positions(j) - geom.positions(i));
      const cxd v = cxd(0.0, -gamma_wg) * std::polar(1.0, phase);
      w(i, j) = v;
      w(j, i) = v;  // symmetric by |x_i - x_j|
    }
  }
  return w;
}

EffectiveHamiltonian build_effective_hamiltonian(const Geometry& geom,
                                                 double gamma0) {
  if (gamma0 < 0.0)
    throw std::invalid_argument("build_effective_hamiltonian: gamma0 < 0");
  EffectiveHamiltonian h;
  h.gamma0 = gamma0;
  h.matrix = build_ssh_hamiltonian(geom).cast<cxd>() + waveguide_term(geom);
  h.matrix.diagonal().array() += cxd(0.0, -gamma0);
  return h;
}

}  // namespace sshwg
