// 3-cycle noncontextuality inequalities over overlap graphs and the qubit
// prepare-and-measure fragment built from pre/post states, the observable's
// eigenbasis and the antipodes of the selection states.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "weakval/invariants.hpp"
#include "weakval/weak_values.hpp"

namespace weakval {

/// h3 = e(u,w) + e(v,w) - e(u,v) for the triangle {u, v, w} with the minus
/// sign on the edge (negative[0], negative[1]).
struct CycleInequality {
  std::array<std::size_t, 3> triple{};
  std::array<std::size_t, 2> negative{};
  double value = 0.0;
  bool violated = false;
};

/// Every vertex triple (ascending) with each of its three sign placements,
/// in canonical order: by triple, then minus on (j,k), (i,k), (i,j).
std::vector<CycleInequality> all_three_cycles(const FrameGraph& graph, double tau_anom = Tolerances{}.anom);

std::vector<CycleInequality> violations(const std::vector<CycleInequality>& cycles);

/// max(h3) - 1 over all cycles; positive values witness contextuality.
double max_violation(const FrameGraph& graph);

struct Fragment {
  std::vector<std::string> labels;
  std::vector<StateVector> states;
  std::vector<StateVector> effects;
  /// Pairs of states that coincide up to phase.
  std::vector<std::array<std::size_t, 2>> duplicates;
};

/// S = {phi, psi, a0, a1, phi_perp, psi_perp}, E = S.
Fragment build_fragment(const StateVector& phi, const StateVector& psi, const Observable& a,
                        const Tolerances& tol = {});

FrameGraph fragment_graph(const Fragment& fragment, const Tolerances& tol = {});

/// Mixed-state fragment graph: antipodes are I - rho (Bloch vector negated).
FrameGraph fragment_graph(const DensityOperator& rho_phi, const DensityOperator& rho_psi, const Observable& a,
                          const Tolerances& tol = {});

struct AnomalyViolation {
  QuasiProbDist g;
  FrameGraph graph;
  std::vector<CycleInequality> violations;
  /// Some Re(g_i) > 1 + tau_anom.
  bool exceeds_one = false;
};

/// Requires d = 2 and real-amplitude selection states and eigenbasis. The
/// violation list is computed over the fragment graph.
AnomalyViolation anomaly_implies_violation(const DensityOperator& rho_phi, const DensityOperator& rho_psi,
                                           const Observable& a, double threshold = kDefaultPostselectThreshold,
                                           const Tolerances& tol = {});

}  // namespace weakval
