#pragma once

#include <stdexcept>
#include <string>

namespace sshwg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Edge-mode identification failed: best analytic-state overlap below 0.5.
// Carries the two best candidates so callers can inspect the ambiguity.
struct AmbiguousEdge : Error {
  int best_index;
  int second_index;
  double best_overlap;
  double second_overlap;
  AmbiguousEdge(int b, double bo, int s, double so)
      : Error("ambiguous edge mode: best overlap " + std::to_string(bo) +
              " (mode " + std::to_string(b) + "), runner-up " +
              std::to_string(so) + " (mode " + std::to_string(s) + ")"),
        best_index(b), second_index(s), best_overlap(bo), second_overlap(so) {}
};

// Bare spectrum gap around the zero mode too small for first-order
// perturbation theory.
struct GapTooSmall : Error {
  double gap;
  explicit GapTooSmall(double g)
      : Error("bare spectral gap " + std::to_string(g) +
              " below Gamma; perturbative edge channel unreliable"),
        gap(g) {}
};

// The biorthogonal norm of some mode nearly vanished (exceptional-point
// proximity); modal sums are unreliable.
struct NearDefective : Error {
  double min_norm;
  explicit NearDefective(double m)
      : Error("mode set flagged near-defective (min biorthogonal norm " +
              std::to_string(m) + ")"),
        min_norm(m) {}
};

// delta_omega - H_eff was numerically singular. Only reachable with a purely
// real eigenvalue (Gamma0 = collective decay = 0).
struct SingularResolvent : Error {
  int mode_index;
  double detuning;
  SingularResolvent(int j, double dw)
      : Error("resolvent singular at delta_omega = " + std::to_string(dw) +
              " (mode " + std::to_string(j) + ")"),
        mode_index(j), detuning(dw) {}
};

// R_r(Gamma0) has no zero in the search bracket; payload holds the best
// minimizer found and its residual reflection.
struct NoZeroFound : Error {
  double best_gamma0;
  double residual;
  NoZeroFound(double g0, double r)
      : Error("no reflection zero found; minimum R_r = " + std::to_string(r) +
              " at Gamma0 = " + std::to_string(g0)),
        best_gamma0(g0), residual(r) {}
};

struct DegenerateRatio : Error {
  using Error::Error;
};

// The ln(decay) vs N fit is not linear enough to quote a scaling exponent.
struct ScalingBreakdown : Error {
  double nu;
  double r_squared;
  ScalingBreakdown(double nu_, double r2)
      : Error("decay scaling fit degraded: r^2 = " + std::to_string(r2)),
        nu(nu_), r_squared(r2) {}
};

// Trajectory ended with too much excitation left in the array.
struct TruncatedEvolution : Error {
  double residual;
  explicit TruncatedEvolution(double r)
      : Error("evolution truncated: residual excitation " + std::to_string(r)),
        residual(r) {}
};

struct UnknownFigure : Error {
  explicit UnknownFigure(const std::string& name)
      : Error("unknown figure name: " + name) {}
};

}  // namespace sshwg
