#include "weakval/coherence_witness.hpp"

#include <sstream>

#include "weakval/invariants.hpp"

namespace weakval {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ConsistentWithTheorem: return "ConsistentWithTheorem";
    case Verdict::TheoremViolated: return "TheoremViolated";
  }
  return "Unknown";
}

std::vector<double> incoherent_quasi_prob(const DensityOperator& rho_phi, const DensityOperator& rho_psi,
                                          const Observable& a, const WitnessOptions& opts) {
  require_same_dim(rho_phi.dim(), rho_psi.dim(), "incoherent_quasi_prob states");
  require_same_dim(rho_phi.dim(), a.dim(), "incoherent_quasi_prob observable");
  for (const auto* rho : {&rho_phi, &rho_psi}) {
    const double l1 = coherence_l1(*rho, a);
    if (l1 >= opts.coherence_tol) {
      std::ostringstream os;
      os << (rho == &rho_phi ? "post" : "pre") << "-selected state has l1 coherence " << l1;
      throw Error(ErrorKind::NotIncoherent, os.str());
    }
  }
  const double denom = overlap(rho_phi, rho_psi, opts.tol);
  if (!(denom > opts.threshold)) {
    std::ostringstream os;
    os << "post-selection overlap " << denom << " is not above threshold " << opts.threshold;
    throw Error(ErrorKind::OrthogonalSelection, os.str());
  }
  std::vector<double> g;
  g.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Vector& v = a.eigenvector(i).amps();
    const double p_phi = v.dot(rho_phi.matrix() * v).real();
    const double p_psi = v.dot(rho_psi.matrix() * v).real();
    g.push_back(p_phi * p_psi / denom);
  }
  return g;
}

WitnessReport check_theorem1(const DensityOperator& rho_phi, const DensityOperator& rho_psi, const Observable& a,
                             const WitnessOptions& opts) {
  WitnessReport r;
  r.pre.l1 = coherence_l1(rho_psi, a);
  r.pre.coherent = r.pre.l1 >= opts.coherence_tol;
  r.post.l1 = coherence_l1(rho_phi, a);
  r.post.coherent = r.post.l1 >= opts.coherence_tol;
  r.g = quasi_prob(rho_phi, rho_psi, a, opts.threshold, opts.tol);
  r.g_anomalous = anomalous_indices(r.g, opts.tol.anom);
  r.weak = weak_value(a, rho_psi, rho_phi, opts.threshold, opts.tol);
  r.aw_classification = r.weak.classification;
  const bool anomaly = !r.g_anomalous.empty() || r.aw_classification != Classification::Normal;
  r.verdict = (anomaly && (!r.pre.coherent || !r.post.coherent)) ? Verdict::TheoremViolated
                                                                  : Verdict::ConsistentWithTheorem;
  return r;
}

WeakValueResult corollary1_projector(const QuasiProbDist& g, std::size_t i, double tau_anom) {
  if (i >= g.size()) throw Error(ErrorKind::InvalidArgument, "projector index out of range");
  WeakValueResult r;
  r.value = g.weights[i];
  r.spectrum_lo = 0.0;
  r.spectrum_hi = 1.0;
  r.classification = classify(r.value, 0.0, 1.0, tau_anom);
  return r;
}

WeakValueResult projector_weak_value(const Observable& a, std::size_t i, const DensityOperator& rho_psi,
                                     const DensityOperator& rho_phi, double threshold, const Tolerances& tol) {
  require_same_dim(rho_phi.dim(), rho_psi.dim(), "projector_weak_value states");
  require_same_dim(rho_phi.dim(), a.dim(), "projector_weak_value observable");
  if (i >= a.dim()) throw Error(ErrorKind::InvalidArgument, "projector index out of range");
  const double denom = overlap(rho_phi, rho_psi, tol);
  if (!(denom > threshold)) {
    std::ostringstream os;
    os << "post-selection overlap " << denom << " is not above threshold " << threshold;
    throw Error(ErrorKind::OrthogonalSelection, os.str());
  }
  const Vector& v = a.eigenvector(i).amps();
  const Matrix proj = v * v.adjoint();
  WeakValueResult r;
  r.value = (rho_phi.matrix() * proj * rho_psi.matrix()).trace() / denom;
  r.denominator = denom;
  r.spectrum_lo = 0.0;
  r.spectrum_hi = 1.0;
  r.classification = classify(r.value, 0.0, 1.0, tol.anom);
  return r;
}

}  // namespace weakval
