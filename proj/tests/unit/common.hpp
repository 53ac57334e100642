#pragma once

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "oracle.hpp"
#include "weakval/core.hpp"

namespace testutil {

using namespace weakval;

inline ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected weakval::Error");
  return ErrorKind::InvalidArgument;
}

inline Vector qubit(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// 120-degree configuration: |0>, psi and phi on one great circle.
inline StateVector trine_psi() { return StateVector::normalized(qubit(0.5, std::sqrt(3.0) / 2.0)); }
inline StateVector trine_phi() { return StateVector::normalized(qubit(0.5, -std::sqrt(3.0) / 2.0)); }

inline Matrix mixed_pair_pre() {
  Matrix m(2, 2);
  const double c = std::sqrt(3.0 / 32.0);
  m << 0.75, c, c, 0.25;
  return m;
}

inline Matrix mixed_pair_post() {
  Matrix m(2, 2);
  const double c = std::sqrt(3.0) / 8.0;
  m << 0.75, c, c, 0.25;
  return m;
}

inline DensityOperator random_rho(std::mt19937_64& gen, int d, bool real = false) {
  return validate_density(oracle::random_density(gen, d, real));
}

inline DensityOperator random_pure(std::mt19937_64& gen, int d, bool real = false) {
  return pure_to_density(StateVector::normalized(oracle::random_vector(gen, d, real)));
}

inline DensityOperator random_diagonal(std::mt19937_64& gen, int d) {
  const auto p = oracle::random_probabilities(gen, d);
  Matrix m = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) m(k, k) = p[k];
  return validate_density(m);
}

inline Observable random_observable(std::mt19937_64& gen, int d, bool real = false) {
  return eigensystem(oracle::random_observable(gen, d, real));
}

}  // namespace testutil
