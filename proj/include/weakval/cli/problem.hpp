// Problem files: JSON documents describing an observable and a pre/post
// selection pair. Complex numbers are always two-element [re, im] arrays.
//
//   {
//     "dimension": 2,
//     "observable": "proj0" | [[[re, im], ...], ...],
//     "pre":  [[re, im], ...]            (state vector)
//           | [[[re, im], ...], ...],    (density matrix)
//     "post": ...,
//     "threshold": 1e-12,                          optional
//     "tolerances": {"norm": ..., "anom": ...},    optional, partial allowed
//     "pointer": {"width": 1, "couplings": [...]}, optional
//     "seed": 7                                    optional
//   }

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "weakval/cli/report.hpp"
#include "weakval/core.hpp"
#include "weakval/pointer_lab.hpp"

namespace weakval::cli {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RawState {
  /// Present when the file gave a state vector.
  std::optional<Vector> vector;
  Matrix matrix;

  bool operator==(const RawState& o) const;
};

struct Problem {
  std::size_t dimension = 0;
  /// Named observable ("pauli-z", "proj0", "identity", ...) or empty when
  /// given as a matrix.
  std::string observable_name;
  Matrix observable_matrix;
  RawState pre;
  RawState post;
  double threshold = 1e-12;
  Tolerances tol{};
  std::optional<PointerConfig> pointer;
  std::optional<std::uint64_t> seed;

  bool operator==(const Problem& o) const;
};

/// Problem lifted to validated library types.
struct Resolved {
  Observable observable;
  DensityOperator rho_pre;
  DensityOperator rho_post;
  std::optional<StateVector> psi;
  std::optional<StateVector> phi;
};

Problem parse_problem(const std::string& text);
Problem load_problem(const std::string& path);

/// Observable by name for dimension d: pauli-x, pauli-y, pauli-z (d = 2),
/// proj<k>, identity.
Observable named_observable(const std::string& name, std::size_t dim, const Tolerances& tol = {});

Resolved resolve(const Problem& p);

/// Canonical form: tolerances filled in, observable as name or matrix, states
/// in the form they were given.
Json canonical_json(const Problem& p);

/// Canonical JSON text of the problem; parse_problem() of it yields an equal Problem.
std::string canonical_text(const Problem& p);

}  // namespace weakval::cli
