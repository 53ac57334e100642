// Bargmann invariants (traces of ordered state products) and the overlap
// frame graph over pre/post-selected states and an observable's eigenbasis.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "weakval/core.hpp"

namespace weakval {

struct Invariant {
  std::size_t order = 0;
  Complex value;
  /// Indices into the caller's state tuple, in product order.
  std::vector<std::size_t> operands;
};

/// Tr(rho_1 rho_2 ... rho_n), multiplied strictly left to right.
Complex bargmann(std::span<const DensityOperator> states);
Complex bargmann(std::initializer_list<const DensityOperator*> states);

/// Same product on arbitrary square matrices; no state validation.
Complex bargmann_raw(std::span<const Matrix> factors);

Invariant make_invariant(std::span<const DensityOperator> states, std::vector<std::size_t> operands);

/// Tr(rho1 rho2) as a real number. Throws ImaginaryOverlap if the imaginary
/// residue reaches tol.eig.
double overlap(const DensityOperator& rho1, const DensityOperator& rho2, const Tolerances& tol = {});

/// Complete graph over labelled states with Tr(rho_i rho_j) edge weights.
class FrameGraph {
 public:
  FrameGraph() = default;
  static FrameGraph from_states(std::vector<std::string> labels, std::vector<DensityOperator> states,
                                const Tolerances& tol = {});
  /// Graph read back from the adjacency-list text form; carries no states.
  static FrameGraph from_edges(std::vector<std::string> labels, Eigen::MatrixXd edges);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  /// Index of a label; throws InvalidArgument when absent.
  std::size_t index_of(const std::string& label) const;
  double edge(std::size_t i, std::size_t j) const {
    return edges_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double edge(const std::string& a, const std::string& b) const { return edge(index_of(a), index_of(b)); }
  const Eigen::MatrixXd& edges() const { return edges_; }
  const std::vector<DensityOperator>& states() const { return states_; }

 private:
  std::vector<std::string> labels_;
  std::vector<DensityOperator> states_;
  Eigen::MatrixXd edges_;
};

/// Vertices "phi", "psi", then "a0".."a{d-1}" for the eigenvectors of A.
FrameGraph build_frame_graph(const DensityOperator& rho_phi, const DensityOperator& rho_psi, const Observable& a,
                             const Tolerances& tol = {});

/// Plain-text adjacency list:
///
///   frame-graph 1
///   vertices N
///   <index> <label>          (N lines)
///   edges M
///   <i> <j> <weight>         (M = N(N-1)/2 lines, i < j, weight as %.17g)
void write_adjacency(std::ostream& os, const FrameGraph& graph);
std::string to_adjacency_text(const FrameGraph& graph);
FrameGraph read_adjacency(std::istream& is);

}  // namespace weakval
