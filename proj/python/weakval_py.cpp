#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weakval/cli/commands.hpp"
#include "weakval/cli/problem.hpp"
#include "weakval/coherence_witness.hpp"
#include "weakval/contextuality.hpp"
#include "weakval/explore.hpp"
#include "weakval/invariants.hpp"
#include "weakval/pointer_lab.hpp"
#include "weakval/weak_values.hpp"

namespace py = pybind11;
using namespace weakval;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

Tolerances tolerances(double tol_anom) {
  Tolerances t;
  t.anom = tol_anom;
  t.check();
  return t;
}

// 1-d input is a state vector, 2-d a density matrix.
struct State {
  DensityOperator rho;
  std::optional<StateVector> pure;
};

State to_state(const CArray& a, const Tolerances& tol) {
  if (a.ndim() == 1) {
    Vector v(a.shape(0));
    for (py::ssize_t k = 0; k < a.shape(0); ++k) v(k) = a.at(k);
    StateVector s = StateVector::from_amplitudes(v, tol);
    return {pure_to_density(s), s};
  }
  if (a.ndim() == 2) {
    Matrix m(a.shape(0), a.shape(1));
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
      for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = a.at(i, j);
    return {validate_density(m, tol), std::nullopt};
  }
  throw Error(ErrorKind::InvalidArgument, "state must be a 1-d vector or a 2-d density matrix");
}

Observable to_observable(const py::object& obj, std::size_t dim, const Tolerances& tol) {
  if (py::isinstance<py::str>(obj)) return cli::named_observable(obj.cast<std::string>(), dim, tol);
  return eigensystem(obj.cast<Matrix>(), tol);
}

struct Inputs {
  Observable a;
  State pre;
  State post;
};

Inputs inputs(const py::object& observable, const CArray& pre, const CArray& post, const Tolerances& tol) {
  State s_pre = to_state(pre, tol);
  State s_post = to_state(post, tol);
  Observable a = to_observable(observable, s_pre.rho.dim(), tol);
  return {std::move(a), std::move(s_pre), std::move(s_post)};
}

py::dict weak_value_dict(const WeakValueResult& w, double tau) {
  py::dict d;
  d["value"] = w.value;
  d["denominator"] = w.denominator;
  d["spectrum"] = py::make_tuple(w.spectrum_lo, w.spectrum_hi);
  d["classification"] = to_string(w.classification);
  d["marginal"] = is_marginal(w.value, w.spectrum_lo, w.spectrum_hi, tau);
  return d;
}

py::array_t<Complex> complex_array(const std::vector<Complex>& v) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::list cycles_list(const FrameGraph& g, const std::vector<CycleInequality>& cycles) {
  py::list out;
  for (const auto& c : cycles) {
    py::dict d;
    d["triple"] = py::make_tuple(g.label(c.triple[0]), g.label(c.triple[1]), g.label(c.triple[2]));
    d["value"] = c.value;
    d["violated"] = c.violated;
    out.append(d);
  }
  return out;
}

py::tuple command_result(const cli::CommandResult& r) { return py::make_tuple(r.exit_code, r.output); }

}  // namespace

PYBIND11_MODULE(_weakval, m) {
  m.doc() = "Weak values, Kirkwood-Dirac quasiprobabilities and their witnesses";
  m.attr("__version__") = cli::kToolVersion;

  py::register_exception<Error>(m, "WeakvalError", PyExc_ValueError);
  py::register_exception<cli::ParseError>(m, "ProblemError", PyExc_ValueError);

  m.def("observable", [](const std::string& name, std::size_t dim) { return cli::named_observable(name, dim).matrix(); },
        py::arg("name"), py::arg("dim") = 2, "Matrix of a named observable (pauli-x/y/z, proj<k>, identity).");

  m.def(
      "weak_value",
      [](const py::object& observable, const CArray& pre, const CArray& post, double threshold, double tol_anom) {
        const Tolerances tol = tolerances(tol_anom);
        const Inputs in = inputs(observable, pre, post, tol);
        return weak_value_dict(weak_value(in.a, in.pre.rho, in.post.rho, threshold, tol), tol.anom);
      },
      py::arg("observable"), py::arg("pre"), py::arg("post"), py::arg("threshold") = kDefaultPostselectThreshold,
      py::arg("tol_anom") = Tolerances{}.anom,
      "Weak value of an observable between a pre-selection and a post-selection.\n\n"
      "States are 1-d amplitude vectors or 2-d density matrices; the observable is\n"
      "a Hermitian matrix or a name such as 'pauli-z' or 'proj0'.");

  m.def(
      "quasi_probabilities",
      [](const py::object& observable, const CArray& pre, const CArray& post, double threshold) {
        const Tolerances tol;
        const Inputs in = inputs(observable, pre, post, tol);
        const QuasiProbDist g = quasi_prob(in.post.rho, in.pre.rho, in.a, threshold, tol);
        return py::make_tuple(complex_array(g.weights), in.a.eigenvalues());
      },
      py::arg("observable"), py::arg("pre"), py::arg("post"), py::arg("threshold") = kDefaultPostselectThreshold,
      "Quasiprobabilities over the observable eigenbasis, returned with the matching eigenvalues.");

  m.def(
      "check_coherence",
      [](const py::object& observable, const CArray& pre, const CArray& post, double tol_anom) {
        WitnessOptions opts;
        opts.tol = tolerances(tol_anom);
        const Inputs in = inputs(observable, pre, post, opts.tol);
        const WitnessReport r = check_theorem1(in.post.rho, in.pre.rho, in.a, opts);
        py::dict d;
        d["pre_l1"] = r.pre.l1;
        d["post_l1"] = r.post.l1;
        d["pre_coherent"] = r.pre.coherent;
        d["post_coherent"] = r.post.coherent;
        d["quasi_probabilities"] = complex_array(r.g.weights);
        d["anomalous_indices"] = r.g_anomalous;
        d["weak_value"] = weak_value_dict(r.weak, opts.tol.anom);
        d["verdict"] = to_string(r.verdict);
        return d;
      },
      py::arg("observable"), py::arg("pre"), py::arg("post"), py::arg("tol_anom") = Tolerances{}.anom,
      "Check that anomalous values only occur when both states are coherent in the eigenbasis.");

  m.def(
      "bargmann",
      [](const std::vector<Matrix>& states) {
        std::vector<DensityOperator> rhos;
        for (const auto& s : states) rhos.push_back(validate_density(s));
        return bargmann(std::span<const DensityOperator>(rhos));
      },
      py::arg("states"), "Tr(rho_1 rho_2 ... rho_n) for a list of density matrices.");

  m.def(
      "frame_graph",
      [](const py::object& observable, const CArray& pre, const CArray& post) {
        const Tolerances tol;
        const Inputs in = inputs(observable, pre, post, tol);
        const FrameGraph g = build_frame_graph(in.post.rho, in.pre.rho, in.a, tol);
        const auto cycles = all_three_cycles(g, tol.anom);
        py::dict d;
        d["labels"] = g.labels();
        d["edges"] = g.edges();
        d["max_h3"] = max_violation(g) + 1.0;
        d["cycles"] = cycles_list(g, cycles);
        d["violations"] = violations(cycles).size();
        return d;
      },
      py::arg("observable"), py::arg("pre"), py::arg("post"),
      "Overlap graph of the selections and eigenprojectors, with its three-cycle inequalities.");

  m.def(
      "fragment",
      [](const py::object& observable, const CArray& pre, const CArray& post) {
        const Tolerances tol;
        const Inputs in = inputs(observable, pre, post, tol);
        if (!in.pre.pure || !in.post.pure)
          throw Error(ErrorKind::InvalidArgument, "the qubit fragment needs pure states");
        const Fragment f = build_fragment(*in.post.pure, *in.pre.pure, in.a, tol);
        const FrameGraph g = fragment_graph(f, tol);
        const auto cycles = all_three_cycles(g, tol.anom);
        py::dict d;
        d["labels"] = g.labels();
        d["edges"] = g.edges();
        d["max_h3"] = max_violation(g) + 1.0;
        d["cycles"] = cycles_list(g, cycles);
        d["violations"] = violations(cycles).size();
        return d;
      },
      py::arg("observable"), py::arg("pre"), py::arg("post"),
      "Six-state qubit fragment (states and their antipodes) with its three-cycle inequalities.");

  m.def(
      "pointer",
      [](const py::object& observable, const CArray& pre, const CArray& post, double width,
         std::optional<std::vector<double>> couplings) {
        const Tolerances tol;
        const Inputs in = inputs(observable, pre, post, tol);
        if (!in.pre.pure || !in.post.pure)
          throw Error(ErrorKind::InvalidArgument, "the pointer simulation needs pure states");
        PointerConfig cfg;
        cfg.width = width;
        if (couplings) cfg.couplings_series = *couplings;
        cfg.check();
        const PointerEstimate e = extrapolate(in.a, *in.pre.pure, *in.post.pure, cfg);
        py::dict d;
        d["estimate"] = e.value;
        d["error"] = py::make_tuple(e.error_re, e.error_im);
        d["couplings"] = e.couplings;
        d["readout_re"] = e.readout_re;
        d["readout_im"] = e.readout_im;
        return d;
      },
      py::arg("observable"), py::arg("pre"), py::arg("post"), py::arg("width") = 1.0,
      py::arg("couplings") = py::none(), "Gaussian pointer readouts extrapolated to zero coupling.");

  m.def(
      "search",
      [](const std::string& observable, std::size_t dim, std::size_t budget, std::uint64_t seed, std::size_t restarts,
         double min_postselect, std::size_t workers) {
        const Observable a = cli::named_observable(observable, dim);
        SearchOptions opts;
        opts.budget = budget;
        opts.seed = seed;
        opts.restarts = restarts;
        opts.min_postselect = min_postselect;
        opts.workers = workers;
        SearchResult r = [&] {
          py::gil_scoped_release release;
          return search_max_negativity(a, opts);
        }();
        py::dict d;
        d["best_value"] = r.best_value;
        d["psi"] = r.psi.amps();
        d["phi"] = r.phi.amps();
        d["evaluations"] = r.evaluations;
        d["weak_value"] = weak_value_pure(a, r.psi, r.phi).value;
        return d;
      },
      py::arg("observable") = "proj0", py::arg("dim") = 2, py::arg("budget") = 10000, py::arg("seed") = 0,
      py::arg("restarts") = 20, py::arg("min_postselect") = 0.25, py::arg("workers") = 1,
      "Search pure pre/post pairs for the most negative weak value.");

  m.def(
      "scan",
      [](const std::string& observable, std::size_t dim, std::size_t n, std::uint64_t seed, const std::string& kind,
         std::size_t rank, std::size_t workers) {
        const Observable a = cli::named_observable(observable, dim);
        SamplerSpec pre{dim, cli::parse_kind(kind), rank == 0 ? 1 : rank, seed};
        if (pre.kind == SamplerKind::MixedFullRank && rank > 0) pre.kind = SamplerKind::MixedFixedRank;
        const SamplerSpec post = pre;
        ScanOptions opts;
        opts.n = n;
        opts.workers = workers;
        const ScanSummary s = [&] {
          py::gil_scoped_release release;
          return scan_anomaly_rate(pre, post, a, opts);
        }();
        py::dict d;
        d["n"] = s.n;
        d["skipped"] = s.skipped;
        d["anomalous_g"] = s.anomalous_g;
        d["anomalous_aw"] = s.anomalous_aw;
        d["both_coherent"] = s.both_coherent;
        d["theorem_violations"] = s.theorem_violations;
        d["anomalous_fraction"] = s.fraction(s.anomalous_g);
        return d;
      },
      py::arg("observable") = "pauli-z", py::arg("dim") = 2, py::arg("n") = 1000, py::arg("seed") = 0,
      py::arg("kind") = "haar", py::arg("rank") = 0, py::arg("workers") = 1,
      "Sample random pre/post pairs and count anomalous quasiprobabilities.");

  m.def(
      "run",
      [](const std::string& command, const std::string& path, const std::string& format,
         std::optional<double> tol_anom) {
        cli::RunOptions opts;
        opts.format = format == "csv" ? cli::Format::Csv : cli::Format::Json;
        opts.tol_anom = tol_anom;
        return command_result(cli::run_file_command(command, path, opts));
      },
      py::arg("command"), py::arg("path"), py::arg("format") = "json", py::arg("tol_anom") = py::none(),
      "Run a file command (compute, gvals, witness, contextuality, pointer); returns (exit_code, output).");

  m.def(
      "reproduce",
      [](const std::string& format) {
        cli::RunOptions opts;
        opts.format = format == "csv" ? cli::Format::Csv : cli::Format::Json;
        return command_result(cli::cmd_reproduce_paper(opts));
      },
      py::arg("format") = "json", "Check the built-in reference values; returns (exit_code, output).");
}
