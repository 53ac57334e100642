#include "weakval/pointer_lab.hpp"

#include <cmath>
#include <span>

namespace weakval {

namespace {

struct Readout {
  double norm = 0.0;
  double position_per_g = 0.0;  // <x> / g
  double momentum_per_g = 0.0;  // <p> / g
};

// Moments divided by the coupling, so the weak limit stays well conditioned.
Readout pointer_moments(const Observable& a, const StateVector& psi, const StateVector& phi, double coupling,
                        double width) {
  const std::size_t d = a.dim();
  std::vector<Complex> c(d);
  for (std::size_t i = 0; i < d; ++i) {
    const StateVector& ai = a.eigenvector(i);
    c[i] = phi.inner(ai) * ai.inner(psi);
  }
  const double w2 = width * width;
  Complex norm = 0.0, x = 0.0, p = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double da = a.eigenvalue(i) - a.eigenvalue(j);
      const double shift = coupling * da;
      const double ov = std::exp(-shift * shift / (8.0 * w2));
      const Complex w = std::conj(c[i]) * c[j] * ov;
      norm += w;
      x += w * (0.5 * (a.eigenvalue(i) + a.eigenvalue(j)));
      p += w * Complex(0.0, da / (4.0 * w2));
    }
  }
  if (!(norm.real() >= 1e-300)) {
    throw Error(ErrorKind::ZeroPostselection, "post-selected pointer norm vanishes");
  }
  return {norm.real(), x.real() / norm.real(), p.real() / norm.real()};
}

// Neville evaluation at h = 0 of the interpolant through (h_k, f_k).
double neville_at_zero(std::span<const double> h, std::span<const double> f) {
  std::vector<double> t(f.begin(), f.end());
  const std::size_t n = t.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t k = 0; k + m < n; ++k) {
      t[k] = (h[k + m] * t[k] - h[k] * t[k + 1]) / (h[k + m] - h[k]);
    }
  }
  return t[0];
}

}  // namespace

void PointerConfig::check() const {
  if (!(coupling > 0.0) || !std::isfinite(coupling)) throw Error(ErrorKind::InvalidArgument, "coupling must be > 0");
  if (!(width > 0.0) || !std::isfinite(width)) throw Error(ErrorKind::InvalidArgument, "pointer width must be > 0");
  for (std::size_t k = 0; k < couplings_series.size(); ++k) {
    if (!(couplings_series[k] > 0.0) || !std::isfinite(couplings_series[k]))
      throw Error(ErrorKind::InvalidArgument, "couplings must be strictly positive");
    if (k > 0 && !(couplings_series[k] < couplings_series[k - 1]))
      throw Error(ErrorKind::InvalidArgument, "couplings must be strictly decreasing");
  }
}

PointerOutcome simulate(const Observable& a, const StateVector& psi, const StateVector& phi, double coupling,
                        double width) {
  require_same_dim(psi.dim(), phi.dim(), "pointer states");
  require_same_dim(psi.dim(), a.dim(), "pointer observable");
  PointerConfig{coupling, width, {}}.check();
  const Readout r = pointer_moments(a, psi, phi, coupling, width);
  return {coupling * r.position_per_g, coupling * r.momentum_per_g, r.norm};
}

PointerEstimate extrapolate(const Observable& a, const StateVector& psi, const StateVector& phi,
                            const PointerConfig& cfg) {
  require_same_dim(psi.dim(), phi.dim(), "pointer states");
  require_same_dim(psi.dim(), a.dim(), "pointer observable");
  cfg.check();
  if (cfg.couplings_series.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "extrapolation needs at least 3 couplings");
  }
  PointerEstimate est;
  std::vector<double> h;
  for (double g : cfg.couplings_series) {
    const Readout r = pointer_moments(a, psi, phi, g, cfg.width);
    est.couplings.push_back(g);
    est.readout_re.push_back(r.position_per_g);
    est.readout_im.push_back(2.0 * cfg.width * cfg.width * r.momentum_per_g);
    h.push_back(g * g);
  }
  const double re = neville_at_zero(h, est.readout_re);
  const double im = neville_at_zero(h, est.readout_im);
  const std::span<const double> hs(h);
  const double re_lower = neville_at_zero(hs.subspan(1), std::span<const double>(est.readout_re).subspan(1));
  const double im_lower = neville_at_zero(hs.subspan(1), std::span<const double>(est.readout_im).subspan(1));
  est.value = Complex(re, im);
  est.error_re = std::abs(re - re_lower);
  est.error_im = std::abs(im - im_lower);
  return est;
}

}  // namespace weakval
