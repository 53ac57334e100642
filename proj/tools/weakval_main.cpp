#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>

#include "weakval/cli/commands.hpp"

using namespace weakval;
using namespace weakval::cli;

int main(int argc, char** argv) {
  CLI::App app{"Weak values, quasiprobabilities and their coherence / contextuality witnesses"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  RunOptions opts;
  std::string input;
  std::string format = "json";
  std::string kind = "haar";
  std::string kind_post;

  const std::map<std::string, Format> formats{{"json", Format::Json}, {"csv", Format::Csv}};

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol-anom", opts.tol_anom, "Anomaly tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "Random seed");
  };

  const char* file_commands[][2] = {
      {"compute", "Weak value, quasiprobabilities, coherence and contextuality report"},
      {"gvals", "Quasiprobability distribution over the observable eigenbasis"},
      {"witness", "Coherence witness check for anomalous values"},
      {"contextuality", "Frame-graph three-cycle inequalities"},
      {"pointer", "Gaussian pointer simulation and weak-coupling extrapolation"},
  };
  for (const auto& [name, help] : file_commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--input,-i", input, "Problem file (JSON)")->required();
    common(sub);
  }

  CLI::App* search = app.add_subcommand("search", "Maximize negativity of the weak value over state pairs");
  common(search);
  search->add_option("--observable", opts.observable, "Named observable (default proj0)");
  search->add_option("--dim", opts.dim, "Hilbert space dimension")->check(CLI::Range(2, 64));
  search->add_option("--budget", opts.budget, "Objective evaluations");
  search->add_option("--restarts", opts.restarts, "Independent restarts")->check(CLI::Range(1, 100000));
  search->add_option("--min-postselect", opts.min_postselect, "Lower bound on |<phi|psi>|^2")
      ->check(CLI::Range(1e-6, 1.0));
  search->add_option("--workers", opts.workers, "Worker threads")->check(CLI::Range(1, 256));

  CLI::App* scan = app.add_subcommand("scan", "Anomaly rate over randomly sampled state pairs");
  common(scan);
  scan->add_option("--observable", opts.observable, "Named observable (default pauli-z, or proj0 for d > 2)");
  scan->add_option("--dim", opts.dim, "Hilbert space dimension")->check(CLI::Range(2, 64));
  scan->add_option("--n", opts.n, "Number of sampled pairs");
  scan->add_option("--kind", kind, "Sampler: haar, mixed, real-pure, real-mixed, diagonal");
  scan->add_option("--kind-post", kind_post, "Sampler for the post-selection (default: --kind)");
  scan->add_option("--rank", opts.rank, "Rank for the mixed sampler (0: full)");
  scan->add_option("--workers", opts.workers, "Worker threads")->check(CLI::Range(1, 256));

  CLI::App* repro = app.add_subcommand("reproduce-paper", "Check the built-in reference values");
  repro->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  repro->add_option("--perturb", opts.perturb)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  opts.format = formats.at(format);
  CLI::App* sub = app.get_subcommands().front();

  CommandResult r;
  try {
    opts.kind = parse_kind(kind);
    if (!kind_post.empty()) opts.kind_post = parse_kind(kind_post);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const std::string name = sub->get_name();
  if (name == "search") {
    r = cmd_search(opts);
  } else if (name == "scan") {
    r = cmd_scan(opts);
  } else if (name == "reproduce-paper") {
    r = cmd_reproduce_paper(opts);
  } else {
    r = run_file_command(name, input, opts);
  }
  std::fwrite(r.output.data(), 1, r.output.size(), stdout);
  if (!r.diagnostics.empty()) std::cerr << r.diagnostics;
  return r.exit_code;
}
