// Weak values, the quasi-probability distribution behind them, and the
// anomaly classification.
//
// Conventions: rho_psi is the pre-selected state, rho_phi the post-selected
// state. The weight attached to eigenvector |a_i> is
//
//   g_i = Tr(rho_phi |a_i><a_i| rho_psi) / Tr(rho_phi rho_psi),
//
// and the weak value is A_w = sum_i a_i g_i.

#pragma once

#include <string>
#include <vector>

#include "weakval/core.hpp"

namespace weakval {

/// Default lower bound on Tr(rho_phi rho_psi) below which post-selection is
/// treated as orthogonal.
inline constexpr double kDefaultPostselectThreshold = 1e-12;

enum class Classification { Normal, AnomalousReal, AnomalousImaginary };

const char* to_string(Classification c);

struct WeakValueResult {
  Complex value;
  /// Tr(rho_phi rho_psi), or |<phi|psi>|^2 in the pure form.
  double denominator = 0.0;
  double spectrum_lo = 0.0;
  double spectrum_hi = 0.0;
  Classification classification = Classification::Normal;
};

struct QuasiProbDist {
  std::vector<Complex> weights;
  /// Eigenvalue a_i attached to weights[i].
  std::vector<double> labels;

  std::size_t size() const { return weights.size(); }
  Complex sum() const;
};

Classification classify(Complex value, double lo, double hi, double tau_anom);

/// True when the verdict would flip within 10 tau_anom of the value, i.e. the
/// value sits close to a classification boundary.
bool is_marginal(Complex value, double lo, double hi, double tau_anom);

QuasiProbDist quasi_prob(const DensityOperator& rho_phi, const DensityOperator& rho_psi, const Observable& a,
                         double threshold = kDefaultPostselectThreshold, const Tolerances& tol = {});

/// Ratio of raw Bargmann invariants on arbitrary matrices, with a complex
/// denominator. Used to probe the formula off the state manifold.
std::vector<Complex> quasi_prob_raw(const Matrix& post, const Matrix& pre, const Observable& a);

WeakValueResult weak_value(const Observable& a, const DensityOperator& rho_psi, const DensityOperator& rho_phi,
                           double threshold = kDefaultPostselectThreshold, const Tolerances& tol = {});

/// <phi|A|psi> / <phi|psi>
WeakValueResult weak_value_pure(const Observable& a, const StateVector& psi, const StateVector& phi,
                                double threshold = kDefaultPostselectThreshold, const Tolerances& tol = {});

std::vector<std::size_t> anomalous_indices(const QuasiProbDist& g, double tau_anom);

}  // namespace weakval
