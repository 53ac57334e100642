#include "common.hpp"
#include "weakval/coherence_witness.hpp"
#include "weakval/invariants.hpp"

using namespace weakval;
using namespace testutil;

namespace {

DensityOperator diag2(double p) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = 1.0 - p;
  return validate_density(m);
}

}  // namespace

TEST_CASE("factorized quasiprobabilities of incoherent states") {
  const Observable z = basis_projector(2, 0);
  auto near = [](const std::vector<double>& g, double a, double b) {
    return std::abs(g[0] - a) < 1e-15 && std::abs(g[1] - b) < 1e-15;
  };
  CHECK(near(incoherent_quasi_prob(diag2(0.75), diag2(0.75), z), 0.9, 0.1));
  CHECK(near(incoherent_quasi_prob(diag2(0.5), diag2(0.5), z), 0.5, 0.5));
  CHECK(near(incoherent_quasi_prob(diag2(1.0), diag2(0.5), z), 1.0, 0.0));

  const DensityOperator plus = pure_to_density(StateVector::normalized(qubit(1.0, 1.0)));
  CHECK(kind_of([&] { incoherent_quasi_prob(plus, diag2(0.5), z); }) == ErrorKind::NotIncoherent);
  CHECK(kind_of([&] { incoherent_quasi_prob(diag2(1.0), diag2(0.0), z); }) == ErrorKind::OrthogonalSelection);
}

TEST_CASE("factorized and general quasiprobabilities agree for incoherent pairs") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 4;
    const Observable a = random_observable(gen, d);
    const DensityOperator post = dephase(random_rho(gen, d), a);
    const DensityOperator pre = dephase(random_rho(gen, d), a);
    const auto fact = incoherent_quasi_prob(post, pre, a);
    const QuasiProbDist g = quasi_prob(post, pre, a);
    for (int i = 0; i < d; ++i) CHECK(std::abs(g.weights[i] - fact[i]) < 1e-11);
  }
}

TEST_CASE("witness report for the 120-degree configuration") {
  const WitnessReport r =
      check_theorem1(pure_to_density(trine_phi()), pure_to_density(trine_psi()), basis_projector(2, 0));
  CHECK(r.g_anomalous == std::vector<std::size_t>{0, 1});
  CHECK(r.pre.coherent);
  CHECK(r.post.coherent);
  CHECK(r.aw_classification == Classification::AnomalousReal);
  CHECK(r.verdict == Verdict::ConsistentWithTheorem);
}

TEST_CASE("no anomaly once either state is dephased") {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + trial % 4;
    const Observable a = random_observable(gen, d);
    DensityOperator post = trial % 2 ? random_pure(gen, d) : random_rho(gen, d);
    DensityOperator pre = trial % 3 ? random_pure(gen, d) : random_rho(gen, d);
    switch (trial % 3) {
      case 0: post = dephase(post, a); break;
      case 1: pre = dephase(pre, a); break;
      default:
        post = dephase(post, a);
        pre = dephase(pre, a);
    }
    const WitnessReport r = check_theorem1(post, pre, a);
    CHECK(r.g_anomalous.empty());
    for (const Complex& g : r.g.weights) {
      CHECK(std::abs(g.imag()) < 1e-10);
      CHECK(g.real() >= -1e-10);
      CHECK(g.real() <= 1.0 + 1e-10);
    }
    CHECK(r.aw_classification == Classification::Normal);
    CHECK(r.verdict == Verdict::ConsistentWithTheorem);
  }
}

TEST_CASE("third-order invariants with a diagonal post-selection are non-negative") {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 4;
    const DensityOperator post = random_diagonal(gen, d);
    const DensityOperator pre = random_rho(gen, d);
    for (int i = 0; i < d; ++i) {
      const DensityOperator ai = pure_to_density(StateVector::basis(d, i));
      const Complex delta = bargmann({&post, &ai, &pre});
      CHECK(std::abs(delta.imag()) < 1e-12);
      CHECK(delta.real() >= -1e-12);
    }
  }
}

TEST_CASE("projector weak values equal the corresponding quasiprobabilities") {
  const DensityOperator psi = pure_to_density(trine_psi());
  const DensityOperator phi = pure_to_density(trine_phi());
  const Observable a = basis_projector(2, 0);
  const QuasiProbDist g = quasi_prob(phi, psi, a);
  const WeakValueResult p0 = corollary1_projector(g, 0);
  CHECK(std::abs(p0.value - (-0.5)) < 1e-12);
  CHECK(p0.classification == Classification::AnomalousReal);
  const WeakValueResult p1 = corollary1_projector(g, 1);
  CHECK(std::abs(p1.value - 1.5) < 1e-12);
  CHECK(p1.classification == Classification::AnomalousReal);
  CHECK(kind_of([&] { corollary1_projector(g, 2); }) == ErrorKind::InvalidArgument);

  const QuasiProbDist g2 = quasi_prob(validate_density(mixed_pair_post()), validate_density(mixed_pair_pre()), a);
  CHECK(corollary1_projector(g2, 0).classification == Classification::Normal);
  CHECK(corollary1_projector(g2, 1).classification == Classification::Normal);

  std::mt19937_64 gen(44);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 3;
    const Observable obs = random_observable(gen, d);
    const DensityOperator pre = random_pure(gen, d);
    const DensityOperator post = random_pure(gen, d);
    const QuasiProbDist q = quasi_prob(post, pre, obs);
    for (int i = 0; i < d; ++i) {
      const WeakValueResult direct = projector_weak_value(obs, i, pre, post);
      CHECK(std::abs(direct.value - q.weights[i]) < 1e-12 * std::max(1.0, std::abs(q.weights[i])));
      CHECK(direct.classification == corollary1_projector(q, i).classification);
    }
  }
}
