// Von Neumann weak measurement with a Gaussian pointer, evaluated in closed
// form.
//
// The pointer starts in a real Gaussian with position standard deviation
// `width`; the coupling exp(-i g A (x) p) (hbar = 1) shifts the branch
// belonging to eigenvalue a_i by g a_i. After post-selection on |phi> the
// pointer is sum_i c_i G(x - g a_i) with c_i = <phi|a_i><a_i|psi>. Every
// moment needed reduces to overlaps of shifted Gaussians:
//
//   <G_i|G_j>        = exp(-(s_i - s_j)^2 / (8 width^2))
//   <G_i|x|G_j>      = <G_i|G_j> (s_i + s_j) / 2
//   <G_i|p|G_j>      = <G_i|G_j> i (s_i - s_j) / (4 width^2)
//
// so there is no grid and no discretization error.

#pragma once

#include <vector>

#include "weakval/core.hpp"

namespace weakval {

struct PointerConfig {
  double coupling = 1e-3;
  double width = 1.0;
  /// Strictly decreasing positive couplings used by extrapolate().
  std::vector<double> couplings_series{1e-2, 5e-3, 2.5e-3, 1.25e-3};

  void check() const;
};

struct PointerOutcome {
  double mean_position = 0.0;
  double mean_momentum = 0.0;
  double postselect_prob = 0.0;
};

struct PointerEstimate {
  Complex value;
  /// Difference between the full and the next-lower-order extrapolant.
  double error_re = 0.0;
  double error_im = 0.0;
  /// Per-coupling readouts mean_position/g and 2 width^2 mean_momentum/g.
  std::vector<double> couplings;
  std::vector<double> readout_re;
  std::vector<double> readout_im;
};

PointerOutcome simulate(const Observable& a, const StateVector& psi, const StateVector& phi, double coupling,
                        double width);
inline PointerOutcome simulate(const Observable& a, const StateVector& psi, const StateVector& phi,
                               const PointerConfig& cfg) {
  return simulate(a, psi, phi, cfg.coupling, cfg.width);
}

/// Polynomial extrapolation in g^2 to g = 0 over the coupling series.
PointerEstimate extrapolate(const Observable& a, const StateVector& psi, const StateVector& phi,
                            const PointerConfig& cfg = {});

}  // namespace weakval
