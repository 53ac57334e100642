#include "weakval/weak_values.hpp"

#include <cmath>
#include <sstream>

#include "weakval/invariants.hpp"

namespace weakval {

namespace {

void require_postselection(double denominator, double threshold) {
  if (!(denominator > threshold)) {
    std::ostringstream os;
    os << "post-selection overlap " << denominator << " is not above threshold " << threshold;
    throw Error(ErrorKind::OrthogonalSelection, os.str());
  }
}

using WideComplex = std::complex<long double>;

WideComplex wide(Complex z) { return {z.real(), z.imag()}; }

// Tr(A B) accumulated in extended precision.
WideComplex wide_trace(const Matrix& a, const Matrix& b) {
  WideComplex tr = 0.0L;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) tr += wide(a(i, j)) * wide(b(j, i));
  return tr;
}

std::vector<WideComplex> wide_apply(const Matrix& m, const Vector& v) {
  std::vector<WideComplex> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    WideComplex acc = 0.0L;
    for (Eigen::Index c = 0; c < m.cols(); ++c) acc += wide(m(r, c)) * wide(v(c));
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Normal: return "Normal";
    case Classification::AnomalousReal: return "AnomalousReal";
    case Classification::AnomalousImaginary: return "AnomalousImaginary";
  }
  return "Unknown";
}

Complex QuasiProbDist::sum() const {
  Complex s = 0.0;
  for (const auto& w : weights) s += w;
  return s;
}

Classification classify(Complex value, double lo, double hi, double tau_anom) {
  if (std::abs(value.imag()) >= tau_anom) return Classification::AnomalousImaginary;
  if (value.real() < lo - tau_anom || value.real() > hi + tau_anom) return Classification::AnomalousReal;
  return Classification::Normal;
}

bool is_marginal(Complex value, double lo, double hi, double tau_anom) {
  const double band = 10.0 * tau_anom;
  const double im = std::abs(value.imag());
  const double re = value.real();
  return (im > 0.1 * tau_anom && im < tau_anom + band) || std::abs(re - (lo - tau_anom)) < band ||
         std::abs(re - (hi + tau_anom)) < band;
}

QuasiProbDist quasi_prob(const DensityOperator& rho_phi, const DensityOperator& rho_psi, const Observable& a,
                         double threshold, const Tolerances& tol) {
  require_same_dim(rho_phi.dim(), rho_psi.dim(), "quasi_prob pre/post states");
  require_same_dim(rho_phi.dim(), a.dim(), "quasi_prob observable");
  const double denom = overlap(rho_phi, rho_psi, tol);
  require_postselection(denom, threshold);

  // Tr(rho_phi |a><a| rho_psi) = <a| rho_psi rho_phi |a> = (rho_psi a)^dagger (rho_phi a).
  // Near-orthogonal selections divide by a small overlap, so the sums run in
  // extended precision.
  const WideComplex wide_denom = wide_trace(rho_phi.matrix(), rho_psi.matrix());
  QuasiProbDist g;
  g.weights.reserve(a.dim());
  g.labels.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Vector& v = a.eigenvector(i).amps();
    const auto u = wide_apply(rho_psi.matrix(), v);
    const auto w = wide_apply(rho_phi.matrix(), v);
    WideComplex num = 0.0L;
    for (std::size_t k = 0; k < u.size(); ++k) num += std::conj(u[k]) * w[k];
    const WideComplex gi = num / wide_denom.real();
    g.weights.emplace_back(static_cast<double>(gi.real()), static_cast<double>(gi.imag()));
    g.labels.push_back(a.eigenvalue(i));
  }
  return g;
}

std::vector<Complex> quasi_prob_raw(const Matrix& post, const Matrix& pre, const Observable& a) {
  std::vector<Complex> out;
  const Complex denom = bargmann_raw(std::vector<Matrix>{post, pre});
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Vector& v = a.eigenvector(i).amps();
    const Matrix proj = v * v.adjoint();
    out.push_back(bargmann_raw(std::vector<Matrix>{post, proj, pre}) / denom);
  }
  return out;
}

WeakValueResult weak_value(const Observable& a, const DensityOperator& rho_psi, const DensityOperator& rho_phi,
                           double threshold, const Tolerances& tol) {
  const QuasiProbDist g = quasi_prob(rho_phi, rho_psi, a, threshold, tol);
  WeakValueResult r;
  WideComplex sum = 0.0L;
  for (std::size_t i = 0; i < g.size(); ++i) sum += static_cast<long double>(g.labels[i]) * wide(g.weights[i]);
  r.value = Complex(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  r.denominator = overlap(rho_phi, rho_psi, tol);
  r.spectrum_lo = a.spectrum_lo();
  r.spectrum_hi = a.spectrum_hi();
  r.classification = classify(r.value, r.spectrum_lo, r.spectrum_hi, tol.anom);
  return r;
}

WeakValueResult weak_value_pure(const Observable& a, const StateVector& psi, const StateVector& phi,
                                double threshold, const Tolerances& tol) {
  require_same_dim(psi.dim(), phi.dim(), "weak_value_pure states");
  require_same_dim(psi.dim(), a.dim(), "weak_value_pure observable");
  const Complex amp = phi.inner(psi);
  const double denom = std::norm(amp);
  require_postselection(denom, threshold);
  WeakValueResult r;
  r.value = phi.amps().dot(a.matrix() * psi.amps()) / amp;
  r.denominator = denom;
  r.spectrum_lo = a.spectrum_lo();
  r.spectrum_hi = a.spectrum_hi();
  r.classification = classify(r.value, r.spectrum_lo, r.spectrum_hi, tol.anom);
  return r;
}

std::vector<std::size_t> anomalous_indices(const QuasiProbDist& g, double tau_anom) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (classify(g.weights[i], 0.0, 1.0, tau_anom) != Classification::Normal) out.push_back(i);
  return out;
}

}  // namespace weakval
