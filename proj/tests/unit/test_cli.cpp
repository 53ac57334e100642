#include <fstream>

#include "common.hpp"
#include "weakval/cli/commands.hpp"

using namespace weakval;
using namespace weakval::cli;
using namespace testutil;

namespace {

std::string parse_error_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const char* kTrine = R"({
  "dimension": 2,
  "observable": "proj0",
  "pre": [[0.5, 0.0], [0.8660254037844386, 0.0]],
  "post": [[0.5, 0.0], [-0.8660254037844386, 0.0]]
})";

}  // namespace

TEST_CASE("problem files parse into validated inputs") {
  const Problem p = parse_problem(kTrine);
  CHECK(p.dimension == 2);
  CHECK(p.observable_name == "proj0");
  CHECK(p.pre.vector.has_value());
  CHECK(p.threshold == 1e-12);
  CHECK(p.tol == Tolerances{});
  const Resolved r = resolve(p);
  CHECK(r.psi.has_value());
  CHECK(std::abs(weak_value(r.observable, r.rho_pre, r.rho_post).value - (-0.5)) < 1e-12);

  const Problem q = parse_problem(R"({"dimension": 2, "observable": [[[1,0],[0,0]],[[0,0],[-1,0]]],
      "pre": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]], "post": [[1,0],[0,0]],
      "threshold": 1e-9, "tolerances": {"anom": 1e-6}, "pointer": {"width": 2, "couplings": [0.1, 0.05, 0.02]},
      "seed": 42})");
  CHECK(q.observable_name.empty());
  CHECK_FALSE(q.pre.vector.has_value());
  CHECK(q.tol.anom == 1e-6);
  CHECK(q.tol.norm == Tolerances{}.norm);
  CHECK(q.pointer->width == 2.0);
  CHECK(q.seed == 42u);
  const Resolved rq = resolve(q);
  CHECK_FALSE(rq.psi.has_value());
  CHECK(rq.phi.has_value());
}

TEST_CASE("parse errors name the offending location") {
  CHECK(parse_error_of("{\n  \"dimension\": 2,\n  oops\n}").find("line 3") != std::string::npos);
  CHECK(parse_error_of(R"({"dimension": 2, "observable": "proj0", "pre": [[1,0],[0]], "post": [[1,0],[0,0]]})")
            .find("/pre/1") != std::string::npos);
  CHECK(parse_error_of(R"({"dimension": 2, "observable": "proj0", "pre": [[1,0],[0,0]], "post": [[1,0],[0,0]], "color": 1})")
            .find("/color") != std::string::npos);
  CHECK(parse_error_of(R"({"dimension": 2, "observable": "sigma", "pre": [[1,0],[0,0]], "post": [[1,0],[0,0]]})")
            .find("/observable") != std::string::npos);
  CHECK(parse_error_of(R"({"observable": "proj0", "pre": [[1,0],[0,0]], "post": [[1,0],[0,0]]})")
            .find("/dimension") != std::string::npos);
  CHECK(parse_error_of(R"({"dimension": 2, "observable": "proj0", "pre": [[1,0],[0,0]], "post": [[1,0],[0,0]],
      "tolerances": {"anom": -1}})")
            .find("/tolerances/anom") != std::string::npos);
  CHECK(parse_error_of(R"({"dimension": 2, "observable": "proj0", "pre": [[1,0],[0,0]], "post": [[1,0],[0,0]],
      "pointer": {"couplings": [0.1, 0.2, 0.05]}})")
            .find("/pointer") != std::string::npos);
  CHECK(parse_error_of("[1, 2]").find("JSON object") != std::string::npos);
}

TEST_CASE("canonical text round-trips") {
  for (const Problem& p : {parse_problem(kTrine), trine_problem(), mixed_pair_problem()}) {
    const std::string text = canonical_text(p);
    const Problem back = parse_problem(text);
    CHECK(back == p);
    CHECK(canonical_text(back) == text);
  }
  std::mt19937_64 gen(71);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 3;
    Problem p;
    p.dimension = d;
    p.observable_matrix = oracle::random_observable(gen, d);
    p.pre.vector = oracle::random_vector(gen, d);
    p.pre.matrix = *p.pre.vector * p.pre.vector->adjoint();
    p.post.matrix = oracle::random_density(gen, d);
    p.tol.anom = 1e-7;
    const Problem back = parse_problem(canonical_text(p));
    CHECK(back == p);
  }
}

TEST_CASE("named observables") {
  CHECK(named_observable("pauli-x", 2).eigenvalue(0) == doctest::Approx(-1.0));
  CHECK(named_observable("proj2", 3).eigenvalue(2) == 1.0);
  CHECK(named_observable("identity", 3).spectrum_lo() == 1.0);
  CHECK(kind_of([] { named_observable("pauli-z", 3); }) == ErrorKind::NotQubit);
  CHECK(kind_of([] { named_observable("proj3", 3); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { named_observable("projx", 3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("command exit codes") {
  CHECK(cmd_compute(trine_problem()).exit_code == kExitAnomaly);
  CHECK(cmd_gvals(mixed_pair_problem()).exit_code == kExitOk);
  CHECK(cmd_witness(mixed_pair_problem()).exit_code == kExitOk);
  CHECK(cmd_contextuality(trine_problem()).exit_code == kExitAnomaly);
  CHECK(cmd_pointer(trine_problem()).exit_code == kExitOk);
  CHECK(cmd_pointer(mixed_pair_problem()).exit_code == kExitInputError);

  Problem orth = trine_problem();
  orth.post = orth.pre;
  Vector perp(2);
  perp << -(*orth.pre.vector)(1), (*orth.pre.vector)(0);
  orth.post.vector = perp;
  orth.post.matrix = perp * perp.adjoint();
  const CommandResult r = cmd_compute(orth);
  CHECK(r.exit_code == kExitNumericalError);
  CHECK(r.diagnostics.find("OrthogonalSelection") != std::string::npos);
  CHECK(r.output.empty());

  Problem bad = mixed_pair_problem();
  bad.pre.matrix(0, 1) = 0.9;
  bad.pre.matrix(1, 0) = 0.9;
  CHECK(cmd_gvals(bad).exit_code == kExitInputError);

  CHECK(run_file_command("gvals", "/nonexistent/problem.json").exit_code == kExitInputError);
}

TEST_CASE("reports carry the reference values") {
  const Json j = Json::parse(cmd_compute(trine_problem()).output);
  CHECK(j["tool"] == "weakval");
  CHECK(j["weak_value"]["re"].get<double>() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(j["weak_value"]["classification"] == "AnomalousReal");
  CHECK(j["witness"]["verdict"] == "ConsistentWithTheorem");
  CHECK(j["contextuality"]["fragment"]["max_h3"].get<double>() == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(j["pointer"]["estimate"][0].get<double>() == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(j["coherence"]["pre"]["coherent"] == true);

  const Json g = Json::parse(cmd_gvals(mixed_pair_problem()).output);
  CHECK(g["quasi_probabilities"][0]["re"].get<double>() == doctest::Approx(0.829997).epsilon(1e-5));
  CHECK(g["anomalous_indices"].empty());

  const Json w = Json::parse(cmd_witness(mixed_pair_problem()).output);
  CHECK(w["commutator_norm"].get<double>() > 0.0);
  CHECK(w["coherence"]["pre"]["coherent"] == true);
  CHECK(w["witness"]["anomaly"] == false);

  RunOptions qutrit;
  Problem p3 = trine_problem();
  p3.dimension = 3;
  p3.observable_name = "proj0";
  Vector a(3), b(3);
  a << 0.6, 0.8, 0.0;
  b << 0.6, 0.0, 0.8;
  p3.pre.vector = a;
  p3.pre.matrix = a * a.adjoint();
  p3.post.vector = b;
  p3.post.matrix = b * b.adjoint();
  p3.observable_matrix = named_observable("proj0", 3).matrix();
  const Json c = Json::parse(cmd_contextuality(p3, qutrit).output);
  CHECK(c["contextuality"]["fragment"].is_null());
  CHECK(c["contextuality"].contains("notice"));
}

TEST_CASE("reproduce-paper passes and detects perturbations") {
  const CommandResult ok = cmd_reproduce_paper();
  CHECK(ok.exit_code == kExitOk);
  RunOptions opts;
  opts.perturb = 1e-3;
  const CommandResult bad = cmd_reproduce_paper(opts);
  CHECK(bad.exit_code == kExitReproductionFailed);
  CHECK(Json::parse(bad.output)["all_pass"] == false);
}

TEST_CASE("search and scan reports are byte-identical across runs and worker counts") {
  RunOptions opts;
  opts.seed = 5;
  opts.budget = 2000;
  const std::string s1 = cmd_search(opts).output;
  opts.workers = 4;
  CHECK(cmd_search(opts).output == s1);
  CHECK(cmd_search(opts).output == s1);

  RunOptions scan;
  scan.seed = 6;
  scan.n = 500;
  scan.kind = SamplerKind::MixedFullRank;
  const std::string c1 = cmd_scan(scan).output;
  scan.workers = 3;
  CHECK(cmd_scan(scan).output == c1);
}

TEST_CASE("csv rendering flattens the report") {
  RunOptions opts;
  opts.format = Format::Csv;
  const std::string csv = cmd_gvals(mixed_pair_problem(), opts).output;
  CHECK(csv.rfind("key,value\n", 0) == 0);
  CHECK(csv.find("/quasi_probabilities/0/re,0.8299970") != std::string::npos);
}

TEST_CASE("number formatting keeps full precision") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(-0.5) == "-0.5");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(std::stod(format_double(0.829997053672894)) == 0.829997053672894);
  CHECK(dump_json(Json{{"x", std::nan("")}}) == "{\n  \"x\": null\n}\n");
}
