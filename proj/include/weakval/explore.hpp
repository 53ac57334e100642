// Random state generation, search for maximally negative weak values, and
// anomaly-rate scans over sampled selection pairs.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weakval/core.hpp"
#include "weakval/rng.hpp"
#include "weakval/weak_values.hpp"

namespace weakval {

enum class SamplerKind {
  HaarPure,
  MixedFullRank,
  MixedFixedRank,
  RealAmplitudePure,
  RealAmplitudeMixed,
  /// Random probabilities on the diagonal of the computational basis.
  Diagonal,
};

const char* to_string(SamplerKind k);

struct SamplerSpec {
  std::size_t dim = 2;
  SamplerKind kind = SamplerKind::HaarPure;
  /// Used by MixedFixedRank only; 1 <= rank <= dim.
  std::size_t rank = 1;
  std::uint64_t seed = 0;

  void check() const;
};

struct Sample {
  DensityOperator rho;
  /// Set for the pure kinds.
  std::optional<StateVector> pure;
};

Sample sample(const SamplerSpec& spec);
Sample sample(const SamplerSpec& spec, Rng& rng);

StateVector haar_state(std::size_t dim, Rng& rng);
/// Induced measure: partial trace of a Haar pure state on d x rank.
DensityOperator induced_mixed_state(std::size_t dim, std::size_t rank, Rng& rng);

// ---------------------------------------------------------------------------
// Search

struct SearchOptions {
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  std::size_t restarts = 20;
  /// Search space is restricted to pairs with |<phi|psi>|^2 >= min_postselect;
  /// without a floor -Re(A_w) is unbounded as the pair approaches orthogonality.
  double min_postselect = 0.25;
  std::size_t workers = 1;
  double initial_step = 0.5;
  double min_step = 1e-10;
};

struct SearchResult {
  StateVector psi = StateVector::basis(1, 0);
  StateVector phi = StateVector::basis(1, 0);
  DensityOperator rho_psi = DensityOperator::trusted(Matrix::Identity(1, 1));
  DensityOperator rho_phi = DensityOperator::trusted(Matrix::Identity(1, 1));
  /// -Re(A_w) re-evaluated by weak_value() on the reported states.
  double best_value = 0.0;
  std::size_t evaluations = 0;
  std::size_t best_restart = 0;
  /// (cumulative evaluation count, best objective so far), restarts in order.
  std::vector<std::pair<std::size_t, double>> trace;
};

/// Maximizes -Re(A_w) over pure selection pairs by compass search with random
/// restarts. Qubits use Bloch angles; larger d uses normalized complex vectors.
/// Every restart spends at least its initial evaluation, so budget 0 still
/// evaluates (and reports) one starting configuration.
SearchResult search_max_negativity(const Observable& a, const SearchOptions& opts);

// ---------------------------------------------------------------------------
// Scan

struct ScanOptions {
  std::size_t n = 1000;
  double threshold = kDefaultPostselectThreshold;
  double coherence_tol = 1e-8;
  Tolerances tol{};
  std::size_t workers = 1;
};

struct ScanSummary {
  std::size_t n = 0;
  /// Pairs rejected because post-selection was (numerically) orthogonal.
  std::size_t skipped = 0;
  std::size_t anomalous_g = 0;
  std::size_t anomalous_aw = 0;
  std::size_t anomalous_aw_real = 0;
  std::size_t anomalous_aw_imag = 0;
  std::size_t both_coherent = 0;
  /// Both states coherent yet every g_i in [0, 1].
  std::size_t coherent_non_anomalous = 0;
  /// Anomaly with an incoherent selection state; stays 0 for valid input.
  std::size_t theorem_violations = 0;

  double fraction(std::size_t count) const {
    const std::size_t used = n - skipped;
    return used == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(used);
  }
};

/// Pair k uses derive_seed(pre.seed, k, 0) for the pre-selected state and
/// derive_seed(post.seed, k, 1) for the post-selected state.
ScanSummary scan_anomaly_rate(const SamplerSpec& pre, const SamplerSpec& post, const Observable& a,
                              const ScanOptions& opts);

}  // namespace weakval
