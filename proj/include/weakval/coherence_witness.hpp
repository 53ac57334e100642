// Executable form of "anomaly requires coherence of both selection states in
// the observable's eigenbasis", plus the factorized distribution that holds
// for incoherent states and the eigenprojector weak values behind anomalous
// quasi-probabilities.

#pragma once

#include <vector>

#include "weakval/weak_values.hpp"

namespace weakval {

/// l1 coherence at or above this counts as coherent.
inline constexpr double kCoherenceThreshold = 1e-8;

struct CoherenceValue {
  double l1 = 0.0;
  bool coherent = false;
};

enum class Verdict { ConsistentWithTheorem, TheoremViolated };

const char* to_string(Verdict v);

struct WitnessOptions {
  double threshold = kDefaultPostselectThreshold;
  double coherence_tol = kCoherenceThreshold;
  Tolerances tol{};
};

struct WitnessReport {
  CoherenceValue pre;
  CoherenceValue post;
  QuasiProbDist g;
  std::vector<std::size_t> g_anomalous;
  WeakValueResult weak;
  Classification aw_classification = Classification::Normal;
  Verdict verdict = Verdict::ConsistentWithTheorem;
};

/// g_i = Tr(a_i rho_phi) Tr(a_i rho_psi) / Tr(rho_phi rho_psi); both states must
/// be incoherent in A's eigenbasis.
std::vector<double> incoherent_quasi_prob(const DensityOperator& rho_phi, const DensityOperator& rho_psi,
                                          const Observable& a, const WitnessOptions& opts = {});

WitnessReport check_theorem1(const DensityOperator& rho_phi, const DensityOperator& rho_psi, const Observable& a,
                             const WitnessOptions& opts = {});

/// Weight g_i read as the weak value of the eigenprojector |a_i><a_i|, whose
/// spectrum is {0, 1}.
WeakValueResult corollary1_projector(const QuasiProbDist& g, std::size_t i, double tau_anom = Tolerances{}.anom);

/// Tr(rho_phi P rho_psi) / Tr(rho_phi rho_psi) for P = |a_i><a_i|, evaluated
/// directly from the matrices.
WeakValueResult projector_weak_value(const Observable& a, std::size_t i, const DensityOperator& rho_psi,
                                     const DensityOperator& rho_phi,
                                     double threshold = kDefaultPostselectThreshold, const Tolerances& tol = {});

}  // namespace weakval
