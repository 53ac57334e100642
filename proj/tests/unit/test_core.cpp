#include <doctest.h>

#include <cmath>
#include <random>

#include "common.hpp"

using namespace weakval;

using testutil::kind_of;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("state vectors validate their norm") {
  Vector v(2);
  v << 0.6, Complex(0.0, 0.8);
  const StateVector s = StateVector::from_amplitudes(v);
  CHECK(s.dim() == 2);
  CHECK(std::abs(s.inner(s) - 1.0) < 1e-15);

  Vector bad(2);
  bad << 1.0, 1.0;
  CHECK(kind_of([&] { StateVector::from_amplitudes(bad); }) == ErrorKind::NotNormalized);
  bad << std::nan(""), 0.0;
  CHECK(kind_of([&] { StateVector::from_amplitudes(bad); }) == ErrorKind::NotFinite);
  CHECK(kind_of([&] { StateVector::normalized(Vector::Zero(3)); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { StateVector::basis(2, 2); }) == ErrorKind::InvalidArgument);

  Vector loose(2);
  loose << 1.0 + 1e-12, 0.0;
  CHECK_NOTHROW(StateVector::from_amplitudes(loose));
}

TEST_CASE("validate_density enforces hermiticity, trace and positivity in that order") {
  CHECK_NOTHROW(validate_density(mat2(0.5, 0.5, 0.5, 0.5)));
  CHECK(kind_of([] { validate_density(Matrix::Zero(2, 3)); }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { validate_density(mat2(0.5, 0.1, 0.0, 0.5)); }) == ErrorKind::NotHermitian);
  CHECK(kind_of([] { validate_density(mat2(0.6, 0.0, 0.0, 0.6)); }) == ErrorKind::TraceNotOne);
  CHECK(kind_of([] { validate_density(mat2(1.2, 0.0, 0.0, -0.2)); }) == ErrorKind::NotPSD);
  CHECK(kind_of([] { validate_density(mat2(std::nan(""), 0.0, 0.0, 0.5)); }) == ErrorKind::NotFinite);

  // Non-hermitian and wrong trace at once: hermiticity is reported.
  CHECK(kind_of([] { validate_density(mat2(0.9, 0.3, 0.0, 0.9)); }) == ErrorKind::NotHermitian);

  // Tiny anti-hermitian noise is symmetrized away.
  const DensityOperator r = validate_density(mat2(0.5, Complex(0.5, 1e-12), Complex(0.5, 0.0), 0.5));
  CHECK((r.matrix() - r.matrix().adjoint()).norm() == 0.0);
}

TEST_CASE("eigensystem returns ascending eigenvalues and phase-fixed eigenvectors") {
  const Observable z = eigensystem(pauli_z());
  CHECK(z.eigenvalue(0) == doctest::Approx(-1.0));
  CHECK(z.eigenvalue(1) == doctest::Approx(1.0));
  CHECK(std::abs(z.eigenvector(1)[0] - 1.0) < 1e-15);
  CHECK(std::abs(z.eigenvector(0)[1] - 1.0) < 1e-15);

  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 4;
    const oracle::Mat u = oracle::random_unitary(gen, d);
    Eigen::VectorXd ev(d);
    for (int k = 0; k < d; ++k) ev(k) = 0.7 * k - 1.0;
    const oracle::Mat m = u * ev.cast<Complex>().asDiagonal() * u.adjoint();
    const Observable a = eigensystem(m);
    for (int k = 0; k < d; ++k) {
      CHECK(a.eigenvalue(k) == doctest::Approx(ev(k)).epsilon(1e-12));
      const Vector& v = a.eigenvector(k).amps();
      CHECK((m * v - ev(k) * v).norm() < 1e-10);
      Eigen::Index big = 0;
      v.cwiseAbs().maxCoeff(&big);
      CHECK(std::abs(v(big).imag()) < 1e-14);
      CHECK(v(big).real() > 0.0);
    }
  }
}

TEST_CASE("eigensystem rejects degenerate and non-hermitian matrices") {
  CHECK(kind_of([] { eigensystem(Matrix::Identity(2, 2)); }) == ErrorKind::Degenerate);
  CHECK(kind_of([] { eigensystem(mat2(1.0, 1.0, 0.0, 0.0)); }) == ErrorKind::NotHermitian);
  CHECK(kind_of([] { eigensystem(Matrix(2, 3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("named spectral observables keep the computational basis order") {
  const Observable p0 = basis_projector(3, 0);
  CHECK(p0.eigenvalue(0) == 1.0);
  CHECK(p0.eigenvalue(1) == 0.0);
  CHECK(std::abs(p0.eigenvector(0)[0] - 1.0) == 0.0);
  CHECK(p0.spectrum_lo() == 0.0);
  CHECK(p0.spectrum_hi() == 1.0);
  const Observable id = identity_observable(4);
  CHECK((id.matrix() - Matrix::Identity(4, 4)).norm() == 0.0);

  std::vector<StateVector> skew{StateVector::basis(2, 0), StateVector::basis(2, 0)};
  CHECK(kind_of([&] { Observable::from_spectral(RealVector::Ones(2), skew); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("dephasing removes coherence and preserves the diagonal") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 3;
    const DensityOperator rho = validate_density(oracle::random_density(gen, d));
    const Observable a = eigensystem(oracle::random_observable(gen, d));
    const DensityOperator deph = dephase(rho, a);
    CHECK(coherence_l1(deph, a) < 1e-12);
    CHECK(std::abs(deph.matrix().trace() - 1.0) < 1e-12);
    for (std::size_t k = 0; k < a.dim(); ++k) {
      const Vector& v = a.eigenvector(k).amps();
      CHECK(std::abs(v.dot(deph.matrix() * v) - v.dot(rho.matrix() * v)) < 1e-12);
    }
    CHECK(commutator_norm(deph, DensityOperator::trusted(a.matrix())) < 1e-12);
  }
}

TEST_CASE("coherence_l1 of a qubit state in the Z basis") {
  const Observable z = eigensystem(pauli_z());
  const DensityOperator rho = validate_density(mat2(0.75, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.25));
  CHECK(coherence_l1(rho, z) == doctest::Approx(2.0 * std::hypot(0.2, 0.1)).epsilon(1e-14));
}

TEST_CASE("real_part_state is a real symmetric density operator") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityOperator rho = validate_density(oracle::random_density(gen, 3));
    const DensityOperator re = real_part_state(rho);
    CHECK(re.matrix().imag().norm() == 0.0);
    CHECK((re.matrix() - re.matrix().transpose()).norm() == 0.0);
    CHECK_NOTHROW(validate_density(re.matrix()));
  }
}

TEST_CASE("antipodal state is orthogonal and qubit-only") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector s = StateVector::normalized(oracle::random_vector(gen, 2));
    CHECK(std::abs(s.inner(antipodal(s))) < 1e-15);
  }
  CHECK(kind_of([] { antipodal(StateVector::basis(3, 0)); }) == ErrorKind::NotQubit);
}

TEST_CASE("commutator norm vanishes for commuting states") {
  const DensityOperator a = validate_density(mat2(0.3, 0.0, 0.0, 0.7));
  const DensityOperator b = validate_density(mat2(0.9, 0.0, 0.0, 0.1));
  CHECK(commutator_norm(a, b) == 0.0);
  const DensityOperator c = validate_density(mat2(0.5, 0.5, 0.5, 0.5));
  CHECK(commutator_norm(a, c) > 0.1);
  CHECK(kind_of([&] { commutator_norm(a, validate_density(Matrix::Identity(3, 3) / 3.0)); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("tolerances must be positive") {
  Tolerances t;
  CHECK_NOTHROW(t.check());
  t.anom = 0.0;
  CHECK(kind_of([&] { t.check(); }) == ErrorKind::InvalidArgument);
  CHECK(is_numerical(ErrorKind::OrthogonalSelection));
  CHECK_FALSE(is_numerical(ErrorKind::NotPSD));
}
