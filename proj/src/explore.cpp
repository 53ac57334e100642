#include "weakval/explore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "weakval/coherence_witness.hpp"

namespace weakval {

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

namespace {

// Runs fn(task) for task in [0, n); task t goes to worker t % workers.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t t = 0; t < n; ++t) fn(t);
    return;
  }
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < n; t += workers) fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Vector complex_gaussian(std::size_t n, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(k) = Complex(re, im);
  }
  return v;
}

}  // namespace

const char* to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::HaarPure: return "haar";
    case SamplerKind::MixedFullRank: return "mixed";
    case SamplerKind::MixedFixedRank: return "mixed-rank";
    case SamplerKind::RealAmplitudePure: return "real-pure";
    case SamplerKind::RealAmplitudeMixed: return "real-mixed";
    case SamplerKind::Diagonal: return "diagonal";
  }
  return "unknown";
}

void SamplerSpec::check() const {
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "sampler dimension must be positive");
  if (kind == SamplerKind::MixedFixedRank && (rank < 1 || rank > dim)) {
    throw Error(ErrorKind::InvalidRank,
                "rank " + std::to_string(rank) + " outside [1, " + std::to_string(dim) + "]");
  }
}

StateVector haar_state(std::size_t dim, Rng& rng) {
  return StateVector::normalized(complex_gaussian(dim, rng));
}

DensityOperator induced_mixed_state(std::size_t dim, std::size_t rank, Rng& rng) {
  // Columns of G are the ancilla components of a Gaussian vector on d x rank.
  const auto d = static_cast<Eigen::Index>(dim);
  const auto r = static_cast<Eigen::Index>(rank);
  Matrix g(d, r);
  for (Eigen::Index j = 0; j < r; ++j) g.col(j) = complex_gaussian(dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()) * 0.5;
  return DensityOperator::trusted(std::move(rho));
}

Sample sample(const SamplerSpec& spec, Rng& rng) {
  spec.check();
  switch (spec.kind) {
    case SamplerKind::HaarPure: {
      StateVector s = haar_state(spec.dim, rng);
      return {pure_to_density(s), s};
    }
    case SamplerKind::MixedFullRank:
      return {induced_mixed_state(spec.dim, spec.dim, rng), std::nullopt};
    case SamplerKind::MixedFixedRank:
      return {induced_mixed_state(spec.dim, spec.rank, rng), std::nullopt};
    case SamplerKind::RealAmplitudePure: {
      Vector v(static_cast<Eigen::Index>(spec.dim));
      for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = rng.normal();
      StateVector s = StateVector::normalized(v);
      return {pure_to_density(s), s};
    }
    case SamplerKind::RealAmplitudeMixed:
      return {real_part_state(induced_mixed_state(spec.dim, spec.dim, rng)), std::nullopt};
    case SamplerKind::Diagonal: {
      std::vector<double> p(spec.dim);
      double total = 0.0;
      for (auto& x : p) total += (x = -std::log(rng.uniform_pos()));
      const auto d = static_cast<Eigen::Index>(spec.dim);
      Matrix rho = Matrix::Zero(d, d);
      for (Eigen::Index k = 0; k < d; ++k) rho(k, k) = p[static_cast<std::size_t>(k)] / total;
      return {DensityOperator::trusted(std::move(rho)), std::nullopt};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown sampler kind");
}

Sample sample(const SamplerSpec& spec) {
  Rng rng(spec.seed);
  return sample(spec, rng);
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Pair {
  StateVector psi;
  StateVector phi;
};

// phi = cos(t) psi + e^{i chi} sin(t) perp with t = t_max sin^2(u) keeps the
// pair inside the post-selection floor for every parameter value.
class PairParameterization {
 public:
  PairParameterization(std::size_t dim, double min_postselect)
      : dim_(dim), t_max_(std::acos(std::sqrt(min_postselect))) {}

  std::size_t size() const { return dim_ == 2 ? 4 : 4 * dim_ + 2; }

  std::vector<double> random(Rng& rng) const {
    std::vector<double> x(size());
    if (dim_ == 2) {
      x[0] = std::acos(1.0 - 2.0 * rng.uniform());
      x[1] = 2.0 * std::numbers::pi * rng.uniform();
    } else {
      for (std::size_t k = 0; k < 4 * dim_; ++k) x[k] = rng.normal();
    }
    x[size() - 2] = std::numbers::pi * rng.uniform();
    x[size() - 1] = 2.0 * std::numbers::pi * rng.uniform();
    return x;
  }

  std::optional<Pair> decode(const std::vector<double>& x) const {
    const auto d = static_cast<Eigen::Index>(dim_);
    Vector psi(d), perp(d);
    if (dim_ == 2) {
      const double c = std::cos(0.5 * x[0]);
      const double s = std::sin(0.5 * x[0]);
      const Complex e = std::polar(1.0, x[1]);
      psi << c, e * s;
      perp << -std::conj(e) * s, c;
    } else {
      Vector y(d);
      for (Eigen::Index k = 0; k < d; ++k) {
        psi(k) = Complex(x[2 * k], x[2 * k + 1]);
        y(k) = Complex(x[2 * dim_ + 2 * k], x[2 * dim_ + 2 * k + 1]);
      }
      const double n = psi.norm();
      if (!(n > 1e-12)) return std::nullopt;
      psi /= n;
      perp = y - psi * psi.dot(y);
      const double np = perp.norm();
      if (!(np > 1e-12)) return std::nullopt;
      perp /= np;
    }
    const double su = std::sin(x[size() - 2]);
    const double t = t_max_ * su * su;
    const Vector phi = std::cos(t) * psi + std::polar(std::sin(t), x[size() - 1]) * perp;
    return Pair{StateVector::normalized(psi), StateVector::normalized(phi)};
  }

 private:
  std::size_t dim_;
  double t_max_;
};

struct RestartResult {
  std::vector<double> best_x;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::vector<double> history;  // best-so-far after each evaluation
};

RestartResult run_restart(const Observable& a, const PairParameterization& param, const SearchOptions& opts,
                          std::size_t restart, std::size_t budget) {
  Rng rng(derive_seed(opts.seed, restart));
  RestartResult res;
  auto objective = [&](const std::vector<double>& x) {
    ++res.evaluations;
    double f = -std::numeric_limits<double>::infinity();
    if (auto pair = param.decode(x)) {
      try {
        f = -weak_value_pure(a, pair->psi, pair->phi).value.real();
      } catch (const Error&) {
      }
    }
    if (f > res.best) res.best = f;
    res.history.push_back(res.best);
    return f;
  };

  std::vector<double> x = param.random(rng);
  double fx = objective(x);
  res.best_x = x;
  double step = opts.initial_step;
  while (res.evaluations < budget && step >= opts.min_step) {
    bool improved = false;
    for (std::size_t k = 0; k < x.size() && !improved; ++k) {
      for (double dir : {1.0, -1.0}) {
        if (res.evaluations >= budget) break;
        std::vector<double> y = x;
        y[k] += dir * step;
        const double fy = objective(y);
        if (fy > fx) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  res.best_x = x;
  res.best = fx;
  return res;
}

}  // namespace

SearchResult search_max_negativity(const Observable& a, const SearchOptions& opts) {
  if (!(opts.min_postselect > 0.0 && opts.min_postselect < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "min_postselect must lie in (0, 1)");
  }
  if (opts.restarts == 0) throw Error(ErrorKind::InvalidArgument, "need at least one restart");
  if (!(opts.initial_step > 0.0) || !(opts.min_step > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "search steps must be positive");
  }
  const PairParameterization param(a.dim(), opts.min_postselect);

  const std::size_t restarts = opts.budget == 0 ? 1 : std::min(opts.restarts, opts.budget);
  std::vector<std::size_t> budgets(restarts, opts.budget / restarts);
  for (std::size_t r = 0; r < opts.budget % restarts; ++r) ++budgets[r];
  if (opts.budget == 0) budgets[0] = 1;

  std::vector<RestartResult> results(restarts);
  parallel_for(restarts, opts.workers,
               [&](std::size_t r) { results[r] = run_restart(a, param, opts, r, budgets[r]); });

  SearchResult out;
  std::size_t best_r = 0;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    if (results[r].best > results[best_r].best) best_r = r;
    for (double h : results[r].history) {
      ++out.evaluations;
      if (h > running) {
        running = h;
        out.trace.emplace_back(out.evaluations, running);
      }
    }
  }
  const auto pair = param.decode(results[best_r].best_x);
  if (!pair) throw Error(ErrorKind::InvalidArgument, "search found no valid configuration");
  Vector psi = pair->psi.amps();
  Vector phi = pair->phi.amps();
  fix_phase(psi);
  fix_phase(phi);
  out.psi = StateVector::normalized(psi);
  out.phi = StateVector::normalized(phi);
  out.rho_psi = pure_to_density(out.psi);
  out.rho_phi = pure_to_density(out.phi);
  out.best_value = -weak_value(a, out.rho_psi, out.rho_phi).value.real();
  out.best_restart = best_r;
  return out;
}

// ---------------------------------------------------------------------------
// Scan

namespace {

struct PairOutcome {
  bool skipped = false;
  bool anomalous_g = false;
  Classification aw = Classification::Normal;
  bool both_coherent = false;
  bool violation = false;
};

}  // namespace

ScanSummary scan_anomaly_rate(const SamplerSpec& pre, const SamplerSpec& post, const Observable& a,
                              const ScanOptions& opts) {
  pre.check();
  post.check();
  require_same_dim(pre.dim, post.dim, "scan sampler dimensions");
  require_same_dim(pre.dim, a.dim(), "scan observable");
  if (opts.n == 0) throw Error(ErrorKind::InvalidArgument, "scan needs n >= 1");

  std::vector<PairOutcome> outcomes(opts.n);
  parallel_for(opts.n, opts.workers, [&](std::size_t k) {
    Rng rng_pre(derive_seed(pre.seed, k, 0));
    Rng rng_post(derive_seed(post.seed, k, 1));
    const Sample s_pre = sample(pre, rng_pre);
    const Sample s_post = sample(post, rng_post);
    PairOutcome& o = outcomes[k];
    try {
      const WitnessReport w = check_theorem1(s_post.rho, s_pre.rho, a,
                                             WitnessOptions{opts.threshold, opts.coherence_tol, opts.tol});
      o.anomalous_g = !w.g_anomalous.empty();
      o.aw = w.aw_classification;
      o.both_coherent = w.pre.coherent && w.post.coherent;
      o.violation = w.verdict == Verdict::TheoremViolated;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OrthogonalSelection) throw;
      o.skipped = true;
    }
  });

  ScanSummary s;
  s.n = opts.n;
  for (const auto& o : outcomes) {
    if (o.skipped) {
      ++s.skipped;
      continue;
    }
    s.anomalous_g += o.anomalous_g;
    s.anomalous_aw += o.aw != Classification::Normal;
    s.anomalous_aw_real += o.aw == Classification::AnomalousReal;
    s.anomalous_aw_imag += o.aw == Classification::AnomalousImaginary;
    s.both_coherent += o.both_coherent;
    s.coherent_non_anomalous += o.both_coherent && !o.anomalous_g;
    s.theorem_violations += o.violation;
  }
  return s;
}

}  // namespace weakval
