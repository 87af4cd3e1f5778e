#include <cmath>

#include "doctest.h"
#include "inhomo/elliptic.hpp"
#include "inhomo/error.hpp"
#include "inhomo/random_field.hpp"

using namespace inhomo;

namespace {

SpectralField sample(const TorusGrid& g, double (*fn)(const Point&)) {
  return to_spectral(RealField::sample(g, [fn](const Point& x) { return fn(x); }));
}

// Positive coefficient with prescribed relative contrast a^*/a_*.
Coefficient random_coefficient(const TorusGrid& g, double contrast, std::uint64_t seed) {
  const SpectralField r = random_field(g, {1, 4, 0}, seed, 99);
  const RealField pr = to_physical(r);
  const double lo = min_value(pr), hi = max_value(pr);
  RealField a(g);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = (pr[i] - lo) / (hi - lo);
    a[i] = std::exp(std::log(contrast) * t);
  }
  return Coefficient(to_spectral(a));
}

}  // namespace

TEST_CASE("coefficient bounds") {
  const TorusGrid g(2, 32);
  const Coefficient a(sample(g, [](const Point& x) { return 1.5 + 0.4 * std::cos(x[0]); }));
  CHECK(a.a_star() == doctest::Approx(1.1));
  CHECK(a.a_upper() == doctest::Approx(1.9));
  CHECK(a.mean_value() == doctest::Approx(1.5));
  CHECK(a.relative_deviation() == doctest::Approx(0.4 / 1.5));
  CHECK_THROWS_AS(Coefficient(sample(g, [](const Point& x) { return std::cos(x[0]); })), DomainError);
}

TEST_CASE("constant-coefficient solve") {
  const TorusGrid g(2, 32);
  // With -Delta Pi = div F and F = grad phi, Pi = -phi.
  const SpectralField phi = sample(g, [](const Point& x) { return std::cos(x[0]); });
  const EllipticSolution s = solve_constant(divergence(gradient(phi)));
  CHECK(l2_norm(s.grad_pi + gradient(phi)) < 1e-14);

  VectorField curl_free(g);
  const SpectralField psi = random_field(g, {1, 8, 0}, 2);
  curl_free[0] = partial(psi, 1);
  curl_free[1] = -1.0 * partial(psi, 0);
  CHECK(l2_norm(solve_constant(divergence(curl_free)).grad_pi) < 1e-13 * l2_norm(curl_free));

  const VectorField F = random_vector_field(g, {1, 10, 0}, 3);
  const EllipticSolution r = solve_constant(divergence(F));
  CHECK(l2_norm(laplacian(r.pi) + divergence(F)) < 1e-12 * l2_norm(divergence(F)));
  CHECK(r.residual_l2 < 1e-12);
  CHECK(l2_norm(potential_part(r.grad_pi) - r.grad_pi) < 1e-10 * l2_norm(r.grad_pi));

  CHECK_THROWS_AS(solve_constant(SpectralField::constant(g, 1.0)), DomainError);
}

TEST_CASE("Krylov with a constant coefficient halves the constant solve") {
  const TorusGrid g(2, 32);
  const VectorField F = random_vector_field(g, {1, 10, 0}, 4);
  const Coefficient two(SpectralField::constant(g, 2.0));
  const EllipticSolution s = solve_variable_krylov(two, F, 1e-12, 50);
  CHECK(s.converged);
  CHECK(l2_norm(s.grad_pi - 0.5 * solve_constant(divergence(F)).grad_pi) < 1e-12 * l2_norm(F));
  CHECK(s.iterations <= 2);
}

TEST_CASE("manufactured variable-coefficient solution") {
  const TorusGrid g(2, 128);
  const SpectralField pi_star = sample(g, [](const Point& x) { return std::sin(x[0]) * std::sin(x[1]); });
  const Coefficient a(sample(g, [](const Point& x) { return 1.5 + 0.4 * std::cos(x[0]); }));
  // -div(a grad Pi) = div F with F = -a grad Pi* gives Pi = Pi*.
  VectorField F(g);
  const VectorField gp = gradient(pi_star);
  for (int j = 0; j < 2; ++j) {
    RealField c = to_physical(gp[j]);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= -a.values()[i];
    F[j] = to_spectral(c);
  }
  const EllipticSolution s = solve_variable_krylov(a, F, 1e-12, 200);
  CHECK(s.converged);
  CHECK(l2_norm(s.grad_pi - gp) < 1e-8);
  CHECK(s.residual_l2 <= 1e-12);
  CHECK(l2_norm(s.pi - pi_star) < 1e-8);
}

TEST_CASE("L2 estimate and solver agreement") {
  const TorusGrid g(2, 64);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Coefficient a = random_coefficient(g, 10.0, seed);
    const VectorField F = random_vector_field(g, {1, 12, 0}, seed);
    const EllipticSolution s = solve_variable_krylov(a, F, 1e-10, 500);
    REQUIRE(s.converged);
    CHECK(a.a_star() * l2_norm(s.grad_pi) <= l2_norm(F) * (1 + 1e-6));
    CHECK(l2_norm(potential_part(s.grad_pi) - s.grad_pi) < 1e-10 * l2_norm(s.grad_pi));
    CHECK(std::abs(s.pi.mean()) == 0.0);
  }
  const double tol = 1e-9;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Coefficient a = random_coefficient(g, 1.4, seed);
    REQUIRE(a.relative_deviation() < 0.5);
    const VectorField F = random_vector_field(g, {1, 12, 0}, seed + 10);
    const EllipticSolution k = solve_variable_krylov(a, F, tol, 500);
    const EllipticSolution p = solve_variable_perturbative(a, F, tol, 500);
    REQUIRE(k.converged);
    REQUIRE(p.converged);
    CHECK(l2_norm(k.grad_pi - p.grad_pi) < 10 * tol * l2_norm(F));
  }
}

TEST_CASE("only div F enters and the solve is linear") {
  const TorusGrid g(2, 64);
  const Coefficient a = random_coefficient(g, 3.0, 7);
  const VectorField F = random_vector_field(g, {1, 12, 0}, 8);
  VectorField G = F;
  const SpectralField psi = random_field(g, {1, 12, 0}, 9);
  G[0] += partial(psi, 1);
  G[1] -= partial(psi, 0);
  const double tol = 1e-10;
  const EllipticSolution s1 = solve_variable_krylov(a, F, tol, 500);
  const EllipticSolution s2 = solve_variable_krylov(a, G, tol, 500);
  CHECK(l2_norm(s1.grad_pi - s2.grad_pi) < tol * l2_norm(F) * 10);
  const EllipticSolution s3 = solve_variable_krylov(a, 3.0 * F, tol, 500);
  CHECK(s3.iterations == s1.iterations);
  CHECK(l2_norm(s3.grad_pi - 3.0 * s1.grad_pi) < 1e-13 * l2_norm(s3.grad_pi));
}

TEST_CASE("Krylov returns the best iterate when the budget runs out") {
  const TorusGrid g(2, 64);
  const Coefficient a = random_coefficient(g, 10.0, 1);
  const VectorField F = random_vector_field(g, {1, 12, 0}, 2);
  const EllipticSolution s = solve_variable_krylov(a, F, 1e-14, 3);
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 3);
  CHECK(s.residual_l2 < 1.0);
  CHECK_THROWS_AS(solve_variable_krylov(a, F, 0.0, 3), DomainError);
}

TEST_CASE("perturbative iteration") {
  const TorusGrid g(2, 64);
  const VectorField F = random_vector_field(g, {1, 12, 0}, 5);
  const Coefficient flat(SpectralField::constant(g, 1.7));
  const EllipticSolution s0 = solve_variable_perturbative(flat, F, 1e-10, 50);
  CHECK(s0.iterations == 1);
  CHECK(l2_norm(s0.grad_pi - (1 / 1.7) * solve_constant(divergence(F)).grad_pi) < 1e-13 * l2_norm(F));

  const Coefficient mild(sample(g, [](const Point& x) { return 1.0 + 0.3 * std::cos(x[0]); }));
  const EllipticSolution s = solve_variable_perturbative(mild, F, 1e-10, 200);
  CHECK(s.converged);
  REQUIRE(s.rates.size() >= 3);
  for (double r : s.rates) CHECK(r <= 0.3 + 0.1);

  // Spiky coefficient with relative deviation 2 from its mean.
  auto bump = [](const Point& x) {
    const double b = (1 + std::cos(x[0])) * (1 + std::cos(x[1])) / 4;
    return 1.0 + 3.46 * b * b;
  };
  const Coefficient wild(to_spectral(RealField::sample(g, bump)));
  CHECK(wild.relative_deviation() == doctest::Approx(2.0).epsilon(0.01));
  CHECK_THROWS_AS(solve_variable_perturbative(wild, F, 1e-10, 200), ConvergenceError);
}

TEST_CASE("Besov elliptic estimates") {
  const TorusGrid g(2, 64);
  const DyadicCutoffs cut(g);
  const VectorField F = random_vector_field(g, {1, 10, 0}, 6);
  const BesovIndex idx{3, 2, 1};

  // Constant coefficient: grad Pi = -Q F, so lhs <= div term up to the block overlap constant.
  const Coefficient one(SpectralField::constant(g, 1.0));
  const EllipticEstimateReport c = verify_besov_elliptic(one, F, idx, 2, EllipticVariant::Last, cut);
  CHECK(c.tail_term == 0.0);
  CHECK(c.ratio < 2.0);

  std::vector<EllipticEstimateReport> sweep;
  for (double dev : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    const Coefficient a(to_spectral(RealField::sample(g, [dev](const Point& x) { return 1 + dev * std::cos(x[0] + 2 * x[1]); })));
    sweep.push_back(verify_besov_elliptic(a, F, idx, 2, EllipticVariant::Energy, cut));
    const auto interior = verify_besov_elliptic(a, F, idx, 2, EllipticVariant::Interior, cut);
    CHECK(std::isfinite(interior.ratio));
    CHECK(interior.ratio > 0);
  }
  const GammaFit fit = fit_elliptic_gamma(sweep);
  CHECK(fit.gamma >= 0.0);
  for (const auto& r : sweep) {
    CHECK(r.lhs <= fit.constant * r.rhs * (1 + 1e-12));
    CHECK(r.fitted_gamma.value() == fit.gamma);
  }

  CHECK_THROWS_AS(verify_besov_elliptic(one, F, {1.5, 2, 2}, 1.2, EllipticVariant::Interior, cut), DomainError);
  CHECK_THROWS_AS(verify_besov_elliptic(one, F, idx, 3.5, EllipticVariant::Interior, cut), DomainError);
  CHECK_THROWS_AS(verify_besov_elliptic(one, F, {3, 1.5, 1}, 2, EllipticVariant::Energy, cut), DomainError);
  CHECK(parse_variant("energy") == EllipticVariant::Energy);
  CHECK(variant_name(EllipticVariant::Last) == "last");
  CHECK_THROWS_AS(parse_variant("bogus"), DomainError);
}
