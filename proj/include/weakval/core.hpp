// Validated quantum-state and observable types plus the small set of
// dense linear-algebra operations every other module builds on.
//
// Construction is the only place invariants are checked: a DensityOperator,
// StateVector or Observable that exists is valid, and the operations below
// never re-validate their inputs.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace weakval {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NotFinite,
  NotNormalized,
  NotHermitian,
  NotPSD,
  TraceNotOne,
  Degenerate,
  NotQubit,
  NotRealAmplitude,
  ImaginaryOverlap,
  OrthogonalSelection,
  NotIncoherent,
  ZeroPostselection,
  InvalidRank,
};

const char* to_string(ErrorKind kind);

/// True for failures caused by conditioning of otherwise valid inputs
/// (near-orthogonal post-selection and the like), false for bad input.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Tolerances {
  double norm = 1e-10;
  double herm = 1e-10;
  double psd = 1e-10;
  double eig = 1e-9;
  double orth = 1e-9;
  double degen = 1e-8;
  double anom = 1e-9;

  /// Throws InvalidArgument unless every field is finite and strictly positive.
  void check() const;

  bool operator==(const Tolerances&) const = default;
};

class StateVector {
 public:
  /// Rejects non-finite entries and vectors whose squared norm is off by more than tol.norm.
  static StateVector from_amplitudes(const Vector& amps, const Tolerances& tol = {});
  /// Scales a nonzero finite vector to unit norm.
  static StateVector normalized(const Vector& amps);
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Vector& amps() const { return amps_; }
  Complex operator[](std::size_t k) const { return amps_(static_cast<Eigen::Index>(k)); }

  /// <this|other>
  Complex inner(const StateVector& other) const { return amps_.dot(other.amps_); }

 private:
  explicit StateVector(Vector amps) : amps_(std::move(amps)) {}
  Vector amps_;
};

class DensityOperator {
 public:
  /// Wraps a matrix already known to satisfy the density-operator invariants.
  /// Only producers that guarantee validity by construction may use this.
  static DensityOperator trusted(Matrix m) { return DensityOperator(std::move(m)); }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  explicit DensityOperator(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Hermitian operator together with a fixed orthonormal eigenbasis.
///
/// Built from a matrix through eigensystem(), which insists on a
/// non-degenerate spectrum so the basis is determined by the operator. The
/// from_spectral() route takes the basis explicitly and therefore accepts
/// repeated eigenvalues (identity, eigenprojectors in d > 2).
class Observable {
 public:
  static Observable from_spectral(const RealVector& eigenvalues, std::span<const StateVector> basis,
                                  const Tolerances& tol = {});

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(std::size_t i) const { return eigenvalues_(static_cast<Eigen::Index>(i)); }
  const std::vector<StateVector>& eigenvectors() const { return eigenvectors_; }
  const StateVector& eigenvector(std::size_t i) const { return eigenvectors_[i]; }
  /// Unitary whose columns are the eigenvectors.
  const Matrix& basis_matrix() const { return basis_; }
  double spectrum_lo() const { return eigenvalues_.minCoeff(); }
  double spectrum_hi() const { return eigenvalues_.maxCoeff(); }

 private:
  friend Observable eigensystem(const Matrix& m, const Tolerances& tol);
  Observable(Matrix matrix, RealVector eigenvalues, std::vector<StateVector> eigenvectors);

  Matrix matrix_;
  RealVector eigenvalues_;
  std::vector<StateVector> eigenvectors_;
  Matrix basis_;
};

// Convenience constructors for the qubit observables used throughout.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
/// |k><k| in dimension d, as an Observable over the computational basis.
Observable basis_projector(std::size_t dim, std::size_t k);
/// Identity with the computational basis as its eigenbasis.
Observable identity_observable(std::size_t dim);

DensityOperator pure_to_density(const StateVector& psi);

DensityOperator validate_density(const Matrix& m, const Tolerances& tol = {});

/// Ascending eigenvalues; each eigenvector's first component of largest
/// modulus is made real and positive.
Observable eigensystem(const Matrix& m, const Tolerances& tol = {});

DensityOperator dephase(const DensityOperator& rho, const Observable& basis);

/// Sum of moduli of off-diagonal elements in the observable's eigenbasis.
double coherence_l1(const DensityOperator& rho, const Observable& basis);

/// (rho + rho^T) / 2, returned entrywise real and exactly symmetric.
DensityOperator real_part_state(const DensityOperator& rho);

/// Qubit state orthogonal to psi (antipode on the Bloch sphere).
StateVector antipodal(const StateVector& psi);

/// Frobenius norm of rho1 rho2 - rho2 rho1.
double commutator_norm(const DensityOperator& rho1, const DensityOperator& rho2);

/// Applies the eigenvector phase convention in place.
void fix_phase(Vector& v);

void require_same_dim(std::size_t a, std::size_t b, const char* what);

}  // namespace weakval
