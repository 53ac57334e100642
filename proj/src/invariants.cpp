#include "weakval/invariants.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace weakval {

Complex bargmann_raw(std::span<const Matrix> factors) {
  if (factors.size() < 2) throw Error(ErrorKind::InvalidArgument, "Bargmann invariant needs n >= 2 states");
  for (const auto& f : factors) {
    if (f.rows() != f.cols()) throw Error(ErrorKind::DimensionMismatch, "factor is not square");
    require_same_dim(static_cast<std::size_t>(f.rows()), static_cast<std::size_t>(factors[0].rows()),
                     "Bargmann operand");
  }
  Matrix prod = factors[0];
  for (std::size_t k = 1; k + 1 < factors.size(); ++k) prod = prod * factors[k];
  // Only the diagonal of the last product is needed.
  const Matrix& last = factors.back();
  Complex tr = 0.0;
  for (Eigen::Index i = 0; i < prod.rows(); ++i) tr += prod.row(i).transpose().cwiseProduct(last.col(i)).sum();
  return tr;
}

Complex bargmann(std::span<const DensityOperator> states) {
  std::vector<Matrix> factors;
  factors.reserve(states.size());
  for (const auto& s : states) factors.push_back(s.matrix());
  return bargmann_raw(factors);
}

Complex bargmann(std::initializer_list<const DensityOperator*> states) {
  std::vector<Matrix> factors;
  factors.reserve(states.size());
  for (const auto* s : states) factors.push_back(s->matrix());
  return bargmann_raw(factors);
}

Invariant make_invariant(std::span<const DensityOperator> states, std::vector<std::size_t> operands) {
  std::vector<Matrix> factors;
  for (std::size_t idx : operands) {
    if (idx >= states.size()) throw Error(ErrorKind::InvalidArgument, "operand index out of range");
    factors.push_back(states[idx].matrix());
  }
  Invariant inv;
  inv.order = operands.size();
  inv.value = bargmann_raw(factors);
  inv.operands = std::move(operands);
  return inv;
}

double overlap(const DensityOperator& rho1, const DensityOperator& rho2, const Tolerances& tol) {
  require_same_dim(rho1.dim(), rho2.dim(), "overlap");
  const Matrix& a = rho1.matrix();
  const Matrix& b = rho2.matrix();
  // Tr(AB) = sum_ij A_ij B_ji, accumulated in extended precision.
  std::complex<long double> acc = 0.0L;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      acc += std::complex<long double>(a(i, j).real(), a(i, j).imag()) *
             std::complex<long double>(b(j, i).real(), b(j, i).imag());
    }
  }
  const Complex tr(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  if (std::abs(tr.imag()) >= tol.eig) {
    std::ostringstream os;
    os << "Tr(rho1 rho2) has imaginary part " << tr.imag();
    throw Error(ErrorKind::ImaginaryOverlap, os.str());
  }
  return tr.real();
}

FrameGraph FrameGraph::from_states(std::vector<std::string> labels, std::vector<DensityOperator> states,
                                   const Tolerances& tol) {
  require_same_dim(labels.size(), states.size(), "frame graph labels vs states");
  FrameGraph g;
  const auto n = static_cast<Eigen::Index>(states.size());
  g.edges_ = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double w = overlap(states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(j)], tol);
      g.edges_(i, j) = w;
      g.edges_(j, i) = w;
    }
  }
  g.labels_ = std::move(labels);
  g.states_ = std::move(states);
  return g;
}

FrameGraph FrameGraph::from_edges(std::vector<std::string> labels, Eigen::MatrixXd edges) {
  require_same_dim(labels.size(), static_cast<std::size_t>(edges.rows()), "frame graph labels vs edges");
  require_same_dim(static_cast<std::size_t>(edges.rows()), static_cast<std::size_t>(edges.cols()),
                   "frame graph edge matrix");
  FrameGraph g;
  g.labels_ = std::move(labels);
  g.edges_ = std::move(edges);
  return g;
}

std::size_t FrameGraph::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  throw Error(ErrorKind::InvalidArgument, "no vertex labelled '" + label + "'");
}

FrameGraph build_frame_graph(const DensityOperator& rho_phi, const DensityOperator& rho_psi, const Observable& a,
                             const Tolerances& tol) {
  require_same_dim(rho_phi.dim(), rho_psi.dim(), "frame graph pre/post states");
  require_same_dim(rho_phi.dim(), a.dim(), "frame graph observable");
  std::vector<std::string> labels{"phi", "psi"};
  std::vector<DensityOperator> states{rho_phi, rho_psi};
  for (std::size_t k = 0; k < a.dim(); ++k) {
    labels.push_back("a" + std::to_string(k));
    states.push_back(pure_to_density(a.eigenvector(k)));
  }
  return FrameGraph::from_states(std::move(labels), std::move(states), tol);
}

void write_adjacency(std::ostream& os, const FrameGraph& graph) {
  char buf[64];
  const std::size_t n = graph.size();
  os << "frame-graph 1\n";
  os << "vertices " << n << "\n";
  for (std::size_t i = 0; i < n; ++i) os << i << " " << graph.label(i) << "\n";
  os << "edges " << n * (n - (n > 0 ? 1 : 0)) / 2 << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", graph.edge(i, j));
      os << i << " " << j << " " << buf << "\n";
    }
  }
}

std::string to_adjacency_text(const FrameGraph& graph) {
  std::ostringstream os;
  write_adjacency(os, graph);
  return os.str();
}

FrameGraph read_adjacency(std::istream& is) {
  auto fail = [](const std::string& why) -> FrameGraph {
    throw Error(ErrorKind::InvalidArgument, "adjacency list: " + why);
  };
  std::string word;
  int version = 0;
  if (!(is >> word >> version) || word != "frame-graph" || version != 1) return fail("bad header");
  std::size_t n = 0;
  if (!(is >> word >> n) || word != "vertices") return fail("expected 'vertices N'");
  std::vector<std::string> labels(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t idx = 0;
    if (!(is >> idx >> labels[k]) || idx != k) return fail("bad vertex line " + std::to_string(k));
  }
  std::size_t m = 0;
  if (!(is >> word >> m) || word != "edges") return fail("expected 'edges M'");
  Eigen::MatrixXd edges = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n),
                                                    std::nan(""));
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t i = 0, j = 0;
    std::string w;
    if (!(is >> i >> j >> w) || i >= n || j >= n) return fail("bad edge line " + std::to_string(k));
    const double v = std::strtod(w.c_str(), nullptr);
    edges(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    edges(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  }
  for (Eigen::Index i = 0; i < edges.rows(); ++i) {
    for (Eigen::Index j = 0; j < edges.cols(); ++j) {
      if (i != j && std::isnan(edges(i, j))) return fail("graph is not complete");
    }
    if (std::isnan(edges(i, i))) edges(i, i) = 0.0;
  }
  return FrameGraph::from_edges(std::move(labels), std::move(edges));
}

}  // namespace weakval
