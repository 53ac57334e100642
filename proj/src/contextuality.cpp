#include "weakval/contextuality.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

namespace weakval {

namespace {

bool real_amplitudes(const Matrix& m, double tol) {
  return m.imag().cwiseAbs().maxCoeff() < tol;
}

}  // namespace

std::vector<CycleInequality> all_three_cycles(const FrameGraph& graph, double tau_anom) {
  const std::size_t n = graph.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "3-cycle inequalities need at least 3 vertices");
  std::vector<CycleInequality> out;
  out.reserve(n * (n - 1) * (n - 2) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double eij = graph.edge(i, j);
        const double eik = graph.edge(i, k);
        const double ejk = graph.edge(j, k);
        const std::array<std::pair<std::array<std::size_t, 2>, double>, 3> placements{{
            {{j, k}, eij + eik - ejk},
            {{i, k}, eij + ejk - eik},
            {{i, j}, eik + ejk - eij},
        }};
        for (const auto& [neg, h] : placements) {
          out.push_back(CycleInequality{{i, j, k}, neg, h, h > 1.0 + tau_anom});
        }
      }
    }
  }
  return out;
}

std::vector<CycleInequality> violations(const std::vector<CycleInequality>& cycles) {
  std::vector<CycleInequality> out;
  std::copy_if(cycles.begin(), cycles.end(), std::back_inserter(out), [](const auto& c) { return c.violated; });
  return out;
}

double max_violation(const FrameGraph& graph) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : all_three_cycles(graph)) best = std::max(best, c.value);
  return best - 1.0;
}

Fragment build_fragment(const StateVector& phi, const StateVector& psi, const Observable& a, const Tolerances& tol) {
  if (phi.dim() != 2 || psi.dim() != 2 || a.dim() != 2) {
    throw Error(ErrorKind::NotQubit, "the prepare-and-measure fragment is defined for d = 2");
  }
  Fragment f;
  f.labels = {"phi", "psi", "a0", "a1", "phi_perp", "psi_perp"};
  f.states = {phi, psi, a.eigenvector(0), a.eigenvector(1), antipodal(phi), antipodal(psi)};
  f.effects = f.states;
  for (std::size_t i = 0; i < f.states.size(); ++i)
    for (std::size_t j = i + 1; j < f.states.size(); ++j)
      if (std::norm(f.states[i].inner(f.states[j])) > 1.0 - tol.orth) f.duplicates.push_back({i, j});
  return f;
}

FrameGraph fragment_graph(const Fragment& fragment, const Tolerances& tol) {
  std::vector<DensityOperator> rhos;
  rhos.reserve(fragment.states.size());
  for (const auto& s : fragment.states) rhos.push_back(pure_to_density(s));
  return FrameGraph::from_states(fragment.labels, std::move(rhos), tol);
}

FrameGraph fragment_graph(const DensityOperator& rho_phi, const DensityOperator& rho_psi, const Observable& a,
                          const Tolerances& tol) {
  if (rho_phi.dim() != 2 || rho_psi.dim() != 2 || a.dim() != 2) {
    throw Error(ErrorKind::NotQubit, "the prepare-and-measure fragment is defined for d = 2");
  }
  const Matrix id = Matrix::Identity(2, 2);
  std::vector<DensityOperator> rhos{rho_phi,
                                    rho_psi,
                                    pure_to_density(a.eigenvector(0)),
                                    pure_to_density(a.eigenvector(1)),
                                    DensityOperator::trusted(id - rho_phi.matrix()),
                                    DensityOperator::trusted(id - rho_psi.matrix())};
  return FrameGraph::from_states({"phi", "psi", "a0", "a1", "phi_perp", "psi_perp"}, std::move(rhos), tol);
}

AnomalyViolation anomaly_implies_violation(const DensityOperator& rho_phi, const DensityOperator& rho_psi,
                                           const Observable& a, double threshold, const Tolerances& tol) {
  if (rho_phi.dim() != 2 || rho_psi.dim() != 2 || a.dim() != 2) {
    throw Error(ErrorKind::NotQubit, "anomaly/violation link is established for qubits only");
  }
  if (!real_amplitudes(rho_phi.matrix(), tol.eig) || !real_amplitudes(rho_psi.matrix(), tol.eig) ||
      !real_amplitudes(a.basis_matrix(), tol.eig)) {
    throw Error(ErrorKind::NotRealAmplitude, "states and eigenbasis must have real amplitudes");
  }
  AnomalyViolation out;
  out.g = quasi_prob(rho_phi, rho_psi, a, threshold, tol);
  out.exceeds_one = std::any_of(out.g.weights.begin(), out.g.weights.end(),
                                [&](const Complex& w) { return w.real() > 1.0 + tol.anom; });
  out.graph = fragment_graph(rho_phi, rho_psi, a, tol);
  out.violations = violations(all_three_cycles(out.graph, tol.anom));
  return out;
}

}  // namespace weakval
