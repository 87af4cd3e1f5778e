#include <cmath>
#include <numbers>

#include "doctest.h"
#include "inhomo/bernstein_quadrature.hpp"
#include "inhomo/commutator.hpp"
#include "inhomo/error.hpp"
#include "inhomo/random_field.hpp"

using namespace inhomo;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField sample(const TorusGrid& g, const std::function<double(const Point&)>& fn) {
  return to_spectral(RealField::sample(g, fn));
}

SpectralField positive_coefficient(const TorusGrid& g, std::uint64_t seed) {
  return SpectralField::constant(g, 1.0) + 0.1 * random_field(g, {1, 6, 2}, seed);
}

double max_commutator(const SpectralField& a, const SpectralField& w, const DyadicCutoffs& cut) {
  double m = 0.0;
  for (int q = -1; q <= cut.q_max(); ++q) {
    for (int k = 0; k < 2; ++k) m = std::max(m, l2_norm(commutator_field(a, w, q, k, cut)));
  }
  return m;
}

}  // namespace

TEST_CASE("commutator vanishes for constant coefficients") {
  const TorusGrid g(2, 64);
  const DyadicCutoffs cut(g);
  const SpectralField w = random_field(g, {1, 20, 1}, 3);
  CHECK(max_commutator(SpectralField::constant(g, 2.5), w, cut) == 0.0);
}

TEST_CASE("commutator is bilinear") {
  const TorusGrid g(2, 64);
  const DyadicCutoffs cut(g);
  const SpectralField a1 = random_field(g, {1, 8, 1}, 1), a2 = random_field(g, {1, 8, 1}, 2);
  const SpectralField w1 = random_field(g, {1, 20, 1}, 3), w2 = random_field(g, {1, 20, 1}, 4);
  for (int q = -1; q <= cut.q_max(); ++q) {
    const SpectralField lin_w = commutator_field(a1, 2.0 * w1 + 3.0 * w2, q, 0, cut);
    const SpectralField sum_w = 2.0 * commutator_field(a1, w1, q, 0, cut) + 3.0 * commutator_field(a1, w2, q, 0, cut);
    CHECK(l2_norm(lin_w - sum_w) < 1e-12 * (1 + l2_norm(sum_w)));
    const SpectralField lin_a = commutator_field(a1 - 0.5 * a2, w1, q, 1, cut);
    const SpectralField sum_a = commutator_field(a1, w1, q, 1, cut) - 0.5 * commutator_field(a2, w1, q, 1, cut);
    CHECK(l2_norm(lin_a - sum_a) < 1e-12 * (1 + l2_norm(sum_a)));
  }
}

TEST_CASE("commutator with constant w is minus the block of grad a") {
  const TorusGrid g(2, 64);
  const DyadicCutoffs cut(g);
  const SpectralField a = positive_coefficient(g, 5);
  const SpectralField w = SpectralField::constant(g, 1.7);
  for (int q = 0; q <= cut.q_max(); ++q) {
    for (int k = 0; k < 2; ++k) {
      const SpectralField expected = -1.7 * partial(delta_q(a, q, cut), k);
      CHECK(l2_norm(commutator_field(a, w, q, k, cut) - expected) < 1e-12);
    }
  }
}

TEST_CASE("commutator is local in frequency") {
  // a shifts the frequency of w by one; blocks flat on 22..24 commute with a.
  const TorusGrid g(2, 128);
  const DyadicCutoffs cut(g);
  const SpectralField a = sample(g, [](const Point& x) { return 2.0 + std::cos(x[0]); });
  const SpectralField w_flat = sample(g, [](const Point& x) { return std::cos(23 * x[0]); });
  CHECK(max_commutator(a, w_flat, cut) < 1e-11);
  // Near a block edge the partition weights differ and the commutator does not vanish.
  const SpectralField w_edge = sample(g, [](const Point& x) { return std::cos(10 * x[0]); });
  CHECK(max_commutator(a, w_edge, cut) > 1e-3);
}

TEST_CASE("fitted constants are scale invariant") {
  const TorusGrid g(2, 64);
  const DyadicCutoffs cut(g);
  const SpectralField a = positive_coefficient(g, 8);
  const SpectralField w = random_field(g, {1, 21, 3}, 9);
  const CommutatorReport base = verify_lemma_com(a, w, {3, 2, 1}, 1.0, cut);
  const SpectralField a_scaled = SpectralField::constant(g, 1.0) + 3.0 * (a - SpectralField::constant(g, 1.0));
  const CommutatorReport scaled = verify_lemma_com(a_scaled, 0.25 * w, {3, 2, 1}, 1.0, cut);
  CHECK(base.ell_r_norm_of_cq > 0.0);
  CHECK(scaled.ell_r_norm_of_cq == doctest::Approx(base.ell_r_norm_of_cq).epsilon(1e-10));

  const CommutatorReport bis = verify_lemma_combis(a, w, 1.0, 2.0, 1.0, cut);
  const CommutatorReport bis_scaled = verify_lemma_combis(a_scaled, 3.0 * w, 1.0, 2.0, 1.0, cut);
  CHECK(bis_scaled.ell_r_norm_of_cq == doctest::Approx(bis.ell_r_norm_of_cq).epsilon(1e-10));
  CHECK(base.per_q.size() == static_cast<std::size_t>(cut.q_max() + 2));
}

TEST_CASE("commutator estimates reject indices outside their range") {
  const TorusGrid g(2, 32);
  const DyadicCutoffs cut(g);
  const SpectralField a = positive_coefficient(g, 1);
  const SpectralField w = random_field(g, {1, 8, 0}, 2);
  CHECK_THROWS_AS(verify_lemma_com(a, w, {3, 2, 1}, 2.5, cut), DomainError);
  CHECK_THROWS_AS(verify_lemma_com(a, w, {1, 2, 2}, 0.0, cut), DomainError);
  CHECK_THROWS_AS(verify_lemma_combis(a, w, 0.0, 2, 1, cut), DomainError);
  CHECK_THROWS_AS(commutator_field(a, w, 0, 2, cut), DomainError);
}

TEST_CASE("commutator suite reports finite refinement-stable norms") {
  const CommutatorSuiteResult r = run_commutator_suite({CommutatorLemma::Com, {3, 2, 1}, 1.0}, 3, {32, 64}, 11);
  CHECK(r.finite);
  REQUIRE(r.norms.size() == 2);
  CHECK(r.norms[0].size() == 3);
  CHECK(r.max_refinement_factor >= 1.0);
  CHECK(r.max_refinement_factor < 2.0);
  CHECK(r.ensemble_spread >= 1.0);
}

TEST_CASE("single mode attains the closed-form Bernstein ratio") {
  // For u = cos(k x1) and a = 1: lower_ratio = p^2 / (p - 1).
  const TorusGrid g(2, 64);
  const SpectralField a = SpectralField::constant(g, 1.0);
  const SpectralField u = sample(g, [](const Point& x) { return std::cos(5 * x[0]); });
  for (double p : {2.0, 3.0, 4.0}) {
    const WeightedBernsteinReport r = verify_weighted_bernstein(u, a, p, 5, 10);
    CHECK(r.identity_residual < 1e-9);
    CHECK(r.lower_ratio == doctest::Approx(p * p / (p - 1)).epsilon(1e-8));
  }
  const WeightedBernsteinReport r = verify_weighted_bernstein(u, a, 1.5, 5, 10);
  CHECK(r.identity_residual < 1e-3);
  CHECK(r.lower_ratio == doctest::Approx(4.5).epsilon(1e-3));
}

TEST_CASE("Bernstein ratio is invariant under scaling u and a") {
  const TorusGrid g(2, 64);
  const SpectralField a = sample(g, [](const Point& x) { return 1.5 + 0.4 * std::cos(x[0]); });
  const SpectralField u = random_field(g, {4, 8, 0}, 3);
  for (double p : {2.0, 3.0}) {
    const WeightedBernsteinReport r = verify_weighted_bernstein(u, a, p, 4, 8);
    const WeightedBernsteinReport s = verify_weighted_bernstein(7.0 * u, 0.5 * a, p, 4, 8);
    CHECK(s.lower_ratio == doctest::Approx(r.lower_ratio).epsilon(1e-7));
    CHECK(r.lower_ratio > 0.0);
  }
}

TEST_CASE("integration by parts identity holds without band limits") {
  const TorusGrid g(2, 32);
  const SpectralField a =
      sample(g, [](const Point& x) { return 1.5 + 0.4 * std::cos(x[0]) + 0.2 * std::sin(2 * x[1]); });
  const SpectralField u = random_field(g, {1, 10, 2}, 12);
  for (double p : {2.0, 2.5, 3.0, 4.0}) CHECK(weighted_bernstein_identity(u, a, p).residual < 1e-10);
}

TEST_CASE("line-split quadrature agrees with the exact grid rule for even p") {
  const TorusGrid g(2, 32);
  const SpectralField a = sample(g, [](const Point& x) { return 1.5 + 0.4 * std::cos(x[0]); });
  const SpectralField u = random_field(g, {2, 6, 0}, 4);
  const BernsteinIdentity grid = weighted_bernstein_identity(u, a, 4.0);
  const PowerIntegrals split = line_split_integrals(u, a, 4.0, 0.0, kBernsteinOversampling);
  CHECK(split.middle == doctest::Approx(grid.middle).epsilon(1e-12));
  CHECK(split.right == doctest::Approx(grid.right).epsilon(1e-12));

  const TorusGrid g3(3, 16);
  const SpectralField u3 = random_field(g3, {1, 2, 0}, 1);
  CHECK_THROWS(line_split_integrals(u3, SpectralField::constant(g3, 1.0), 3.0, 0.0, 2));
}

TEST_CASE("tangency finder locates the horizontal tangents of the zero set") {
  // u = cos x1 / 2 + cos x2 vanishes with d_1 u = 0 at four known points.
  const TorusGrid g(2, 32);
  const SpectralField u = sample(g, [](const Point& x) { return 0.5 * std::cos(x[0]) + std::cos(x[1]); });
  const auto pts = zero_set_tangencies(u);
  REQUIRE(pts.size() == 4);
  const std::array<std::array<double, 2>, 4> expected{
      {{0.0, 2 * kPi / 3}, {0.0, 4 * kPi / 3}, {kPi, kPi / 3}, {kPi, 5 * kPi / 3}}};
  auto periodic_distance = [](double x, double y) { return std::abs(std::remainder(x - y, 2 * kPi)); };
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& p : pts) {
      found = found || (periodic_distance(p[0], e[0]) < 1e-10 && periodic_distance(p[1], e[1]) < 1e-10);
    }
    CHECK(found);
  }
}

TEST_CASE("weighted Bernstein rejects invalid inputs") {
  const TorusGrid g(2, 32);
  const SpectralField u = random_field(g, {4, 8, 0}, 1);
  const SpectralField a = SpectralField::constant(g, 1.0);
  CHECK_THROWS_AS(verify_weighted_bernstein(u, a, 3, 5, 8), DomainError);
  CHECK_THROWS_AS(verify_weighted_bernstein(u, -1.0 * a, 3, 4, 8), DomainError);
  CHECK_THROWS_AS(verify_weighted_bernstein(u, a, 1.0, 4, 8), DomainError);
  CHECK_THROWS_AS(verify_weighted_bernstein(u, a, 3, 8, 4), DomainError);
}

TEST_CASE("Bernstein suite passes for even exponents") {
  const BernsteinSuiteResult r = run_weighted_bernstein_suite({2, 4}, {4, 8}, 2, 3, 64, 5);
  CHECK(r.pass);
  for (double res : r.residual_max) CHECK(res < kBernsteinResidualTol);
  for (double f : r.stability_factor) CHECK(f < kBernsteinStabilityFactor);
}
