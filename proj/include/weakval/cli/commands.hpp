// Subcommand implementations. Each returns the rendered report plus the
// process exit code, so tests can drive them without spawning processes.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "weakval/cli/problem.hpp"
#include "weakval/cli/report.hpp"
#include "weakval/explore.hpp"

namespace weakval::cli {

inline constexpr const char* kToolName = "weakval";
#ifdef WEAKVAL_VERSION
inline constexpr const char* kToolVersion = WEAKVAL_VERSION;
#else
inline constexpr const char* kToolVersion = "0.0.0";
#endif

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitNumericalError = 2,
  kExitAnomaly = 3,
  kExitReproductionFailed = 4,
};

struct RunOptions {
  Format format = Format::Json;
  std::optional<double> tol_anom;
  std::optional<std::uint64_t> seed;
  // search / scan
  std::string observable;  // empty: per-command default
  std::size_t dim = 2;
  std::size_t budget = 10000;
  std::size_t restarts = 20;
  double min_postselect = 0.25;
  std::size_t n = 1000;
  SamplerKind kind = SamplerKind::HaarPure;
  std::optional<SamplerKind> kind_post;
  std::size_t rank = 0;  // 0: full rank for the mixed kind
  std::size_t workers = 1;
  // reproduce-paper: offset added to the built-in constants (mutation testing)
  double perturb = 0.0;
};

struct CommandResult {
  std::string output;
  std::string diagnostics;
  int exit_code = kExitOk;
};

CommandResult cmd_compute(const Problem& p, const RunOptions& opts = {});
CommandResult cmd_gvals(const Problem& p, const RunOptions& opts = {});
CommandResult cmd_witness(const Problem& p, const RunOptions& opts = {});
CommandResult cmd_contextuality(const Problem& p, const RunOptions& opts = {});
CommandResult cmd_pointer(const Problem& p, const RunOptions& opts = {});
CommandResult cmd_search(const RunOptions& opts = {});
CommandResult cmd_scan(const RunOptions& opts = {});
CommandResult cmd_reproduce_paper(const RunOptions& opts = {});

/// Loads the file and dispatches to the named file-based command; parse and
/// validation failures become exit code 1.
CommandResult run_file_command(const std::string& command, const std::string& path, const RunOptions& opts = {});

/// Parses --kind values: haar, mixed, real-pure, real-mixed, diagonal.
SamplerKind parse_kind(const std::string& s);

// Built-in reference configurations.

/// Qubit pair with |0>, |psi>, |phi> 120 degrees apart on a Bloch great circle.
Problem trine_problem(double perturb = 0.0);
/// Real-amplitude mixed qubit pair that is coherent yet non-anomalous in the Z basis.
Problem mixed_pair_problem(double perturb = 0.0);

}  // namespace weakval::cli
