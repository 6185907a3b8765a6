#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "vanhove/model.hpp"
#include "vanhove/propagator.hpp"
#include "vanhove/types.hpp"

using namespace vanhove;

namespace {

CMat sample_hamiltonian(int n_levels, double coupling, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.n_levels = n_levels;
  cfg.coupling = coupling;
  const auto v = sample_interaction(cfg, seed);
  return assemble_hamiltonian(build_h0(cfg), v, coupling);
}

}  // namespace

TEST_CASE("two-level exact solution: H = [[1,1],[1,1]]") {
  // Eigenvalues 0 and 2; exp(-iHt)(1,0) = e^{-it}(cos t, -i sin t).
  CMat h(2, 2);
  h << Complex(1.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0),
      Complex(1.0, 0.0);
  const auto f = diagonalize(h);
  CHECK(std::abs(f.eigenvalues(0)) < 1e-14);
  CHECK(f.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-14));

  CVec psi0(2);
  psi0 << Complex(1.0, 0.0), Complex(0.0, 0.0);
  for (double t : {0.0, 0.3, 1.0, 2.7}) {
    const CVec psi = evolve(f, psi0, t);
    const Complex phase = std::exp(Complex(0.0, -t));
    CHECK(std::abs(psi(0) - phase * std::cos(t)) < 1e-14);
    CHECK(std::abs(psi(1) - phase * Complex(0.0, -std::sin(t))) < 1e-14);
  }
}

TEST_CASE("spectral factors reconstruct the matrix and are unitary") {
  const CMat h = sample_hamiltonian(16, 0.3, 77);
  const auto f = diagonalize(h);
  const int dim = static_cast<int>(h.rows());

  const CMat rebuilt = f.eigenvectors * f.eigenvalues.asDiagonal() *
                       f.eigenvectors.adjoint();
  CHECK((rebuilt - h).norm() < 1e-9);
  CHECK((f.eigenvectors.adjoint() * f.eigenvectors - CMat::Identity(dim, dim))
            .norm() < 1e-10);
  for (int k = 1; k < dim; ++k) {
    CHECK(f.eigenvalues(k) >= f.eigenvalues(k - 1));
  }
}

TEST_CASE("evolution composes, conserves energy, preserves norm") {
  ModelConfig cfg;
  cfg.n_levels = 16;
  cfg.coupling = 0.3;
  const CMat h = sample_hamiltonian(cfg.n_levels, cfg.coupling, 5);
  const auto f = diagonalize(h);
  const CVec psi0 = make_initial_state(cfg, 1, 0.3, 0.7);

  const CVec one_hop = evolve(f, evolve(f, psi0, 1.3), 0.9);
  const CVec direct = evolve(f, psi0, 2.2);
  CHECK((one_hop - direct).norm() < 1e-9);

  const double e0 = std::real(Complex(psi0.dot(h * psi0)));
  for (double t : {0.5, 4.0, 40.0}) {
    const CVec psi = evolve(f, psi0, t);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    CHECK(std::real(Complex(psi.dot(h * psi))) ==
          doctest::Approx(e0).epsilon(1e-9));
  }

  const CVec frozen = evolve(f, psi0, 0.0);
  CHECK((frozen - psi0).norm() < 1e-12);
}

TEST_CASE("relaxation trace matches pointwise evolution") {
  ModelConfig cfg;
  cfg.n_levels = 12;
  cfg.coupling = 0.2;
  const CMat h = sample_hamiltonian(cfg.n_levels, cfg.coupling, 11);
  const auto f = diagonalize(h);
  const CVec psi0 = make_initial_state(cfg, 1, 0.3, 0.7);

  const std::vector<double> times{0.0, 0.5, 1.0, 2.5, 7.0};
  const auto trace = relax(f, psi0, times, cfg.n_levels);
  REQUIRE(trace.times.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const CVec psi = evolve(f, psi0, times[i]);
    CHECK(trace.p1[i] == doctest::Approx(site_weight(psi, cfg.n_levels, 1))
                             .epsilon(1e-12));
    CHECK(trace.p2[i] == doctest::Approx(site_weight(psi, cfg.n_levels, 2))
                             .epsilon(1e-12));
    // The two site blocks exhaust the basis.
    CHECK(trace.p1[i] + trace.p2[i] ==
          doctest::Approx(trace.norm[i] * trace.norm[i]).epsilon(1e-12));
    CHECK(trace.norm[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(trace.p1[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expansion order zero is free evolution") {
  Vec h0(2);
  h0 << 0.3, 0.8;
  CMat v(2, 2);
  v << Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0),
      Complex(0.0, 0.0);
  CVec psi0(2);
  psi0 << Complex(0.6, 0.0), Complex(0.0, 0.8);

  const double t = 1.7;
  const auto expansion = duhamel_expansion(h0, v, 0.7, psi0, t, 2, 1e-9);
  for (int k = 0; k < 2; ++k) {
    const Complex expected = std::exp(Complex(0.0, -h0(k) * t)) * psi0(k);
    CHECK(std::abs(expansion.orders[0](k) - expected) < 1e-13);
  }
}

TEST_CASE("expansion first order matches the closed-form integral") {
  // H0 = diag(e1, e2), V off-diagonal: the first-order amplitude on level 2 is
  //   -i lambda e^{-i e2 t} (e^{i (e2 - e1) t} - 1) / (i (e2 - e1)).
  const double e1 = 0.3, e2 = 0.8, lambda = 0.7, t = 1.7;
  Vec h0(2);
  h0 << e1, e2;
  CMat v(2, 2);
  v << Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0),
      Complex(0.0, 0.0);
  CVec psi0(2);
  psi0 << Complex(1.0, 0.0), Complex(0.0, 0.0);

  const auto expansion = duhamel_expansion(h0, v, lambda, psi0, t, 1, 1e-10);
  const double delta = e2 - e1;
  const Complex expected = Complex(0.0, -lambda) *
                           std::exp(Complex(0.0, -e2 * t)) *
                           (std::exp(Complex(0.0, delta * t)) - 1.0) /
                           Complex(0.0, delta);
  CHECK(std::abs(expansion.orders[1](0)) < 1e-10);
  CHECK(std::abs(expansion.orders[1](1) - expected) < 1e-8);
}

TEST_CASE("expansion scales as lambda^n order by order") {
  const CMat h0m = build_h0(ModelConfig{8, 0.1, 0.05});
  const Vec h0 = h0m.diagonal().real();
  const auto v = sample_interaction(ModelConfig{8, 0.1, 0.05}, 3).full();
  ModelConfig cfg;
  cfg.n_levels = 8;
  const CVec psi0 = make_initial_state(cfg, 1, 0.3, 0.7);

  const auto base = duhamel_expansion(h0, v, 0.1, psi0, 1.0, 3, 1e-9);
  const auto doubled = duhamel_expansion(h0, v, 0.2, psi0, 1.0, 3, 1e-9);
  double factor = 1.0;
  for (int n = 0; n <= 3; ++n) {
    CHECK((doubled.orders[n] - factor * base.orders[n]).norm() < 1e-6);
    factor *= 2.0;
  }
}

TEST_CASE("expansion at zero coupling has no corrections") {
  Vec h0(2);
  h0 << 0.25, 0.75;
  CMat v(2, 2);
  v << Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0),
      Complex(0.0, 0.0);
  CVec psi0(2);
  psi0 << Complex(1.0, 0.0), Complex(0.0, 0.0);

  const auto expansion = duhamel_expansion(h0, v, 0.0, psi0, 2.0, 3);
  for (int n = 1; n <= 3; ++n) {
    CHECK(expansion.orders[n].norm() == 0.0);
  }
}

TEST_CASE("expansion at t = 0 is the initial state") {
  Vec h0(2);
  h0 << 0.25, 0.75;
  const CMat v = CMat::Identity(2, 2);
  CVec psi0(2);
  psi0 << Complex(0.0, 1.0), Complex(0.0, 0.0);
  const auto expansion = duhamel_expansion(h0, v, 0.5, psi0, 0.0, 2);
  CHECK((expansion.orders[0] - psi0).norm() == 0.0);
  CHECK(expansion.orders[1].norm() == 0.0);
  CHECK(expansion.orders[2].norm() == 0.0);
}

TEST_CASE("partial sums approach the exact state order by order") {
  ModelConfig cfg;
  cfg.n_levels = 32;
  cfg.coupling = 0.1;
  const auto v = sample_interaction(cfg, 21);
  const CMat h0m = build_h0(cfg);
  const CMat h = assemble_hamiltonian(h0m, v, cfg.coupling);
  const CVec psi0 = make_initial_state(cfg, 1, 0.3, 0.7);
  const double t = 2.0;

  const CVec exact = evolve(diagonalize(h), psi0, t);
  const auto expansion =
      duhamel_expansion(h0m.diagonal().real(), v.full(), cfg.coupling, psi0, t, 4);

  double prev = remainder_norm(exact, expansion, 0);
  for (int m = 1; m <= 4; ++m) {
    const double rem = remainder_norm(exact, expansion, m);
    CHECK(rem < prev);
    prev = rem;
  }
  CHECK(remainder_norm(exact, expansion, 4) < 1e-4);
  CHECK(remainder_norm(exact, expansion, 4) <
        1e-2 * remainder_norm(exact, expansion, 0));
  CHECK(expansion.step_error < 1e-6);
}

TEST_CASE("expansion argument validation") {
  Vec h0(2);
  h0 << 0.25, 0.75;
  const CMat v = CMat::Identity(2, 2);
  CVec psi0(2);
  psi0 << Complex(1.0, 0.0), Complex(0.0, 0.0);

  CHECK_THROWS_AS(duhamel_expansion(h0, v, 0.5, psi0, -1.0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(duhamel_expansion(h0, v, 0.5, psi0, 1.0, -1),
                  std::invalid_argument);
  CHECK_THROWS_AS(duhamel_expansion(h0, v, 0.5, psi0, 1.0, 2, 1e-6, 0),
                  std::invalid_argument);

  const auto expansion = duhamel_expansion(h0, v, 0.5, psi0, 1.0, 2);
  CHECK_THROWS_AS(remainder_norm(psi0, expansion, 3), std::invalid_argument);
  CHECK_THROWS_AS(remainder_norm(psi0, expansion, -1), std::invalid_argument);
}

TEST_CASE("diagonalize rejects malformed input") {
  CHECK_THROWS_AS(diagonalize(CMat::Zero(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(diagonalize(CMat()), std::invalid_argument);
}
