#include "weakval/core.hpp"

#include <cmath>
#include <sstream>

namespace weakval {

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NotQubit: return "NotQubit";
    case ErrorKind::NotRealAmplitude: return "NotRealAmplitude";
    case ErrorKind::ImaginaryOverlap: return "ImaginaryOverlap";
    case ErrorKind::OrthogonalSelection: return "OrthogonalSelection";
    case ErrorKind::NotIncoherent: return "NotIncoherent";
    case ErrorKind::ZeroPostselection: return "ZeroPostselection";
    case ErrorKind::InvalidRank: return "InvalidRank";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  return kind == ErrorKind::ImaginaryOverlap || kind == ErrorKind::OrthogonalSelection ||
         kind == ErrorKind::ZeroPostselection;
}

void Tolerances::check() const {
  for (double t : {norm, herm, psd, eig, orth, degen, anom}) {
    if (!(std::isfinite(t) && t > 0.0))
      throw Error(ErrorKind::InvalidArgument, "tolerances must be finite and strictly positive");
  }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

// ---------------------------------------------------------------------------
// StateVector

StateVector StateVector::from_amplitudes(const Vector& amps, const Tolerances& tol) {
  if (amps.size() == 0) throw Error(ErrorKind::InvalidArgument, "state vector must be non-empty");
  if (!all_finite(amps)) throw Error(ErrorKind::NotFinite, "state vector has non-finite amplitude");
  const double n2 = amps.squaredNorm();
  if (std::abs(n2 - 1.0) > tol.norm) {
    throw Error(ErrorKind::NotNormalized, "squared norm is " + fmt_double(n2) + ", off by " +
                                              fmt_double(std::abs(n2 - 1.0)));
  }
  return StateVector(amps);
}

StateVector StateVector::normalized(const Vector& amps) {
  if (amps.size() == 0) throw Error(ErrorKind::InvalidArgument, "state vector must be non-empty");
  if (!all_finite(amps)) throw Error(ErrorKind::NotFinite, "state vector has non-finite amplitude");
  const double n = amps.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "cannot normalize the zero vector");
  return StateVector(amps / n);
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorKind::InvalidArgument, "basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

// ---------------------------------------------------------------------------
// Observable

Observable::Observable(Matrix matrix, RealVector eigenvalues, std::vector<StateVector> eigenvectors)
    : matrix_(std::move(matrix)),
      eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)) {
  const auto d = static_cast<Eigen::Index>(eigenvectors_.size());
  basis_.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) basis_.col(k) = eigenvectors_[static_cast<std::size_t>(k)].amps();
}

Observable Observable::from_spectral(const RealVector& eigenvalues, std::span<const StateVector> basis,
                                     const Tolerances& tol) {
  const std::size_t d = basis.size();
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "observable needs at least one basis vector");
  require_same_dim(static_cast<std::size_t>(eigenvalues.size()), d, "eigenvalue count vs basis size");
  for (const auto& v : basis) require_same_dim(v.dim(), d, "basis vector dimension");
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    if (!std::isfinite(eigenvalues(k))) throw Error(ErrorKind::NotFinite, "non-finite eigenvalue");
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double ov = std::norm(basis[i].inner(basis[j]));
      if (ov >= tol.orth) {
        throw Error(ErrorKind::InvalidArgument, "basis vectors " + std::to_string(i) + " and " +
                                                    std::to_string(j) + " overlap by " + fmt_double(ov));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(d);
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < d; ++k) {
    const Vector& a = basis[k].amps();
    m += eigenvalues(static_cast<Eigen::Index>(k)) * (a * a.adjoint());
  }
  return Observable(std::move(m), eigenvalues, std::vector<StateVector>(basis.begin(), basis.end()));
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Observable basis_projector(std::size_t dim, std::size_t k) {
  if (k >= dim) throw Error(ErrorKind::InvalidArgument, "projector index out of range");
  std::vector<StateVector> basis;
  RealVector ev = RealVector::Zero(static_cast<Eigen::Index>(dim));
  ev(static_cast<Eigen::Index>(k)) = 1.0;
  for (std::size_t i = 0; i < dim; ++i) basis.push_back(StateVector::basis(dim, i));
  return Observable::from_spectral(ev, basis);
}

Observable identity_observable(std::size_t dim) {
  std::vector<StateVector> basis;
  for (std::size_t i = 0; i < dim; ++i) basis.push_back(StateVector::basis(dim, i));
  return Observable::from_spectral(RealVector::Ones(static_cast<Eigen::Index>(dim)), basis);
}

// ---------------------------------------------------------------------------
// Operations

DensityOperator pure_to_density(const StateVector& psi) {
  const Vector& a = psi.amps();
  return DensityOperator::trusted(a * a.adjoint());
}

DensityOperator validate_density(const Matrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix is " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() == 0) throw Error(ErrorKind::InvalidArgument, "matrix must be non-empty");
  if (!all_finite(m)) throw Error(ErrorKind::NotFinite, "matrix has non-finite entry");

  const double herm_err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > tol.herm) {
    throw Error(ErrorKind::NotHermitian, "max |M - M^dagger| entry is " + fmt_double(herm_err));
  }
  Matrix h = (m + m.adjoint()) * 0.5;

  const Complex tr = h.trace();
  if (std::abs(tr - 1.0) > tol.norm) {
    throw Error(ErrorKind::TraceNotOne, "trace is " + fmt_double(tr.real()) + ", off by " +
                                            fmt_double(std::abs(tr - 1.0)));
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -tol.psd) {
    throw Error(ErrorKind::NotPSD, "smallest eigenvalue is " + fmt_double(lo));
  }
  return DensityOperator::trusted(std::move(h));
}

void fix_phase(Vector& v) {
  // Strict ">" with a small slack picks the first index among near-ties.
  Eigen::Index best = 0;
  double best_abs = std::abs(v(0));
  for (Eigen::Index k = 1; k < v.size(); ++k) {
    const double a = std::abs(v(k));
    if (a > best_abs + 1e-12) {
      best = k;
      best_abs = a;
    }
  }
  if (best_abs == 0.0) return;
  const Complex phase = std::conj(v(best)) / best_abs;
  v *= phase;
  v(best) = Complex(std::abs(v(best)), 0.0);
}

Observable eigensystem(const Matrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "observable matrix must be square and non-empty");
  }
  if (!all_finite(m)) throw Error(ErrorKind::NotFinite, "observable has non-finite entry");
  const double herm_err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > tol.herm) {
    throw Error(ErrorKind::NotHermitian, "max |M - M^dagger| entry is " + fmt_double(herm_err));
  }
  Matrix h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const RealVector& ev = es.eigenvalues();
  for (Eigen::Index k = 1; k < ev.size(); ++k) {
    const double gap = ev(k) - ev(k - 1);
    if (gap < tol.degen) {
      throw Error(ErrorKind::Degenerate, "eigenvalues " + std::to_string(k - 1) + " and " +
                                             std::to_string(k) + " differ by " + fmt_double(gap));
    }
  }
  std::vector<StateVector> vecs;
  vecs.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    Vector v = es.eigenvectors().col(k);
    v.normalize();
    fix_phase(v);
    vecs.push_back(StateVector::normalized(v));
  }
  return Observable(std::move(h), ev, std::move(vecs));
}

DensityOperator dephase(const DensityOperator& rho, const Observable& basis) {
  require_same_dim(rho.dim(), basis.dim(), "dephase");
  const Matrix& u = basis.basis_matrix();
  const Matrix in_basis = u.adjoint() * rho.matrix() * u;
  const auto n = in_basis.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out += in_basis(k, k).real() * (u.col(k) * u.col(k).adjoint());
  }
  return DensityOperator::trusted(std::move(out));
}

double coherence_l1(const DensityOperator& rho, const Observable& basis) {
  require_same_dim(rho.dim(), basis.dim(), "coherence_l1");
  const Matrix& u = basis.basis_matrix();
  const Matrix in_basis = u.adjoint() * rho.matrix() * u;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < in_basis.rows(); ++i)
    for (Eigen::Index j = 0; j < in_basis.cols(); ++j)
      if (i != j) sum += std::abs(in_basis(i, j));
  return sum;
}

DensityOperator real_part_state(const DensityOperator& rho) {
  const Matrix& m = rho.matrix();
  const auto n = m.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = 0.5 * (m(i, j).real() + m(j, i).real());
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return DensityOperator::trusted(std::move(out));
}

StateVector antipodal(const StateVector& psi) {
  if (psi.dim() != 2) throw Error(ErrorKind::NotQubit, "antipodal state needs d = 2, got " + std::to_string(psi.dim()));
  Vector v(2);
  v << -std::conj(psi[1]), std::conj(psi[0]);
  fix_phase(v);
  return StateVector::normalized(v);
}

double commutator_norm(const DensityOperator& rho1, const DensityOperator& rho2) {
  require_same_dim(rho1.dim(), rho2.dim(), "commutator_norm");
  const Matrix& a = rho1.matrix();
  const Matrix& b = rho2.matrix();
  return (a * b - b * a).norm();
}

}  // namespace weakval
