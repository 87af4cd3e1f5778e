#include <cmath>
#include <numbers>

#include "doctest.h"
#include "inhomo/error.hpp"
#include "inhomo/random_field.hpp"
#include "inhomo/spectral.hpp"

using namespace inhomo;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_diff(const SpectralField& a, const SpectralField& b) { return l2_norm(a - b) / l2_norm(b); }

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(TorusGrid(1, 32), DomainError);
  CHECK_THROWS_AS(TorusGrid(2, 24), DomainError);
  CHECK_THROWS_AS(TorusGrid(2, 8), DomainError);
  const TorusGrid g(2, 64);
  CHECK(g.physical_size() == 4096);
  CHECK(g.spectral_size() == 64 * 33);
  CHECK(g.max_wavenumber() == doctest::Approx(32.0 * std::sqrt(2.0)));
  CHECK(g.dealias_cutoff() == 21);
}

TEST_CASE("transform of constants and single modes") {
  const TorusGrid g(2, 32);
  const SpectralField c = to_spectral(RealField::sample(g, [](const Point&) { return 3.5; }));
  CHECK(c.coefficient({0, 0, 0}).real() == doctest::Approx(3.5));
  double others = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) others += std::abs(c.coeffs()[i]);
  CHECK(others < 1e-14);

  const SpectralField cosx = to_spectral(RealField::sample(g, [](const Point& x) { return std::cos(x[0]); }));
  CHECK(std::abs(cosx.coefficient({1, 0, 0}) - Complex(0.5, 0)) < 1e-15);
  CHECK(std::abs(cosx.coefficient({-1, 0, 0}) - Complex(0.5, 0)) < 1e-15);
  double rest = 0.0;
  const auto t = grid_tables(g);
  for (std::size_t i = 0; i < cosx.size(); ++i) {
    const auto& k = t->index_k[i];
    if (!(std::abs(k[0]) == 1 && k[1] == 0)) rest += std::abs(cosx.coeffs()[i]);
  }
  CHECK(rest < 1e-14);
}

TEST_CASE("round trip to machine precision") {
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 64 : 16);
    const SpectralField f = random_field(g, {1, 7.5, 0}, 11);
    const SpectralField back = to_spectral(to_physical(f));
    CHECK(rel_diff(back, f) < 1e-13);
  }
}

TEST_CASE("set_coefficient keeps Hermitian symmetry") {
  const TorusGrid g(2, 16);
  SpectralField f(g);
  f.set_coefficient({-3, 0, 0}, Complex(1.0, 2.0));
  CHECK(f.coefficient({3, 0, 0}) == Complex(1.0, -2.0));
  f.set_coefficient({2, -1, 0}, Complex(0.5, 0.25));
  CHECK(f.coefficient({-2, 1, 0}) == Complex(0.5, -0.25));
  const RealField x = to_physical(f);
  CHECK(rel_diff(to_spectral(x), f) < 1e-14);
  CHECK_THROWS_AS(f.set_coefficient({8, 0, 0}, 1.0), DomainError);
}

TEST_CASE("differential operators") {
  const TorusGrid g(2, 32);
  const SpectralField cosx = to_spectral(RealField::sample(g, [](const Point& x) { return std::cos(x[0]); }));
  const VectorField grad = gradient(cosx);
  const SpectralField minus_sin = to_spectral(RealField::sample(g, [](const Point& x) { return -std::sin(x[0]); }));
  CHECK(rel_diff(grad[0], minus_sin) < 1e-14);
  CHECK(l2_norm(grad[1]) < 1e-14);

  const SpectralField f = random_field(g, {1, 10, 0}, 3);
  CHECK(rel_diff(divergence(gradient(f)), laplacian(f)) < 1e-14);

  // u = grad^perp psi = (-d2 psi, d1 psi) has curl = Laplacian psi.
  VectorField u(g);
  u[0] = -1.0 * partial(f, 1);
  u[1] = partial(f, 0);
  CHECK(rel_diff(curl2d(u), laplacian(f)) < 1e-14);
  CHECK(l2_norm(divergence(u)) < 1e-12 * l2_norm(u));

  const TorusGrid g3(3, 16);
  const VectorField w = random_vector_field(g3, {1, 5, 0}, 5);
  CHECK(l2_norm(divergence(curl(w))) < 1e-12 * l2_norm(w));
  CHECK_THROWS_AS(curl2d(w), ShapeError);
}

TEST_CASE("Fourier multipliers") {
  const TorusGrid g(2, 32);
  SpectralField f = random_field(g, {0, 12, 0}, 9);
  f.coeffs()[0] = 2.0;
  const SpectralField id = fourier_multiplier(f, [](const Wavevector&) { return 1.0; }, 1.0);
  CHECK(l2_norm(id - f) == 0.0);

  const SpectralField inv = fourier_multiplier(
      laplacian(f), [](const Wavevector& k) { return -1.0 / (k[0] * k[0] + k[1] * k[1]); }, 0.0);
  SpectralField mean_free = f;
  mean_free.coeffs()[0] = 0.0;
  CHECK(rel_diff(inv, mean_free) < 1e-14);

  const SpectralField riesz = fourier_multiplier(
      f, [](const Wavevector& k) { return k[0] * k[0] / (k[0] * k[0] + k[1] * k[1]); }, 0.0);
  CHECK(l2_norm(riesz) <= l2_norm(f));

  CHECK_THROWS_AS(fourier_multiplier(f, [](const Wavevector&) { return std::nan(""); }, 0.0), DomainError);

  // Differentiation commutes with radial multipliers.
  auto radial = [](const Wavevector& k) { return std::exp(-0.1 * std::sqrt(k[0] * k[0] + k[1] * k[1])); };
  const SpectralField a = partial(fourier_multiplier(f, radial, 1.0), 0);
  const SpectralField b = fourier_multiplier(partial(f, 0), radial, 1.0);
  CHECK(l2_norm(a - b) < 1e-14 * l2_norm(a));
}

TEST_CASE("Leray projector identities") {
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 32 : 16);
    VectorField v = random_vector_field(g, {0, 7, 0}, 21);
    for (int a = 0; a < dim; ++a) v[a].coeffs()[0] = 0.3 * (a + 1);
    const VectorField w = random_vector_field(g, {0, 7, 0}, 22);
    const VectorField pv = leray_project(v);
    const VectorField qv = potential_part(v);
    const double nv = l2_norm(v);
    CHECK(l2_norm(divergence(pv)) < 1e-12 * nv);
    CHECK(l2_norm(pv + qv - v) < 1e-13 * nv);
    CHECK(l2_norm(leray_project(pv) - pv) < 1e-13 * nv);
    CHECK(std::abs(inner_product(pv, potential_part(w))) < 1e-12 * nv * l2_norm(w));
    // The mean velocity is divergence-free and kept by P.
    for (int a = 0; a < dim; ++a) CHECK(pv[a].coeffs()[0] == v[a].coeffs()[0]);

    const SpectralField phi = random_field(g, {1, 7, 0}, 23);
    CHECK(l2_norm(leray_project(gradient(phi))) < 1e-13 * l2_norm(gradient(phi)));
    CHECK(l2_norm(leray_project(pv) - pv) < 1e-13 * l2_norm(pv));
  }
}

TEST_CASE("dealiasing mask") {
  const TorusGrid g(2, 32);
  const SpectralField c = SpectralField::constant(g, 1.25);
  CHECK(l2_norm(dealias(c) - c) == 0.0);
  SpectralField top(g);
  top.set_coefficient({15, 0, 0}, 1.0);
  CHECK(l2_norm(dealias(top)) == 0.0);
  const SpectralField f = random_field(g, {1, 20, 0}, 4);
  CHECK(l2_norm(dealias(dealias(f)) - dealias(f)) == 0.0);
}

TEST_CASE("dealiased product of resolved modes is exact") {
  const TorusGrid g(2, 32);
  const SpectralField a = to_spectral(RealField::sample(g, [](const Point& x) { return std::cos(3 * x[0]); }));
  const SpectralField b = to_spectral(RealField::sample(g, [](const Point& x) { return std::sin(4 * x[1]); }));
  const SpectralField ab =
      to_spectral(RealField::sample(g, [](const Point& x) { return std::cos(3 * x[0]) * std::sin(4 * x[1]); }));
  CHECK(rel_diff(product(a, b), ab) < 1e-14);
}

TEST_CASE("Parseval") {
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 64 : 16);
    const SpectralField f = random_field(g, {0, 7, 0}, 31);
    const double quad = lp_norm(to_physical(f), 2.0);
    CHECK(std::abs(quad - l2_norm(f)) < 1e-12 * quad);
    const SpectralField h = random_field(g, {0, 7, 0}, 32);
    double s = 0.0;
    const RealField pf = to_physical(f), ph = to_physical(h);
    for (std::size_t i = 0; i < pf.size(); ++i) s += pf[i] * ph[i];
    s *= g.cell_volume();
    CHECK(std::abs(s - inner_product(f, h)) < 1e-12 * l2_norm(f) * l2_norm(h));
  }
  const TorusGrid g(2, 16);
  const SpectralField one = SpectralField::constant(g, 1.0);
  CHECK(l2_norm(one) == doctest::Approx(2 * kPi));
}

TEST_CASE("point evaluation and refined sup norm") {
  const TorusGrid g(2, 32);
  const SpectralField f = random_field(g, {1, 6, 0}, 41);
  const RealField pf = to_physical(f);
  for (std::size_t i : {0u, 17u, 333u}) CHECK(evaluate(f, pf.coordinates(i)) == doctest::Approx(pf[i]).epsilon(1e-12));

  // Off-grid maximum: cos(x - 0.1) on a 16-point grid peaks between nodes.
  const TorusGrid coarse(2, 16);
  const SpectralField s = to_spectral(RealField::sample(coarse, [](const Point& x) { return 2.0 * std::cos(x[0] - 0.1) * std::cos(x[1] - 0.2); }));
  CHECK(max_value(to_physical(s)) < 2.0 - 1e-3);
  CHECK(sup_norm_refined(s) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spectral support predicate") {
  const TorusGrid g(2, 64);
  const SpectralField f = random_field(g, {4, 8, 0}, 2);
  CHECK(spectrum_within(f, 4, 8));
  CHECK_FALSE(spectrum_within(f, 5, 8));
  CHECK(spectrum_within(SpectralField(g), 1, 2));
}

TEST_CASE("random fields are reproducible across grids") {
  const SpectralField a = random_field(TorusGrid(2, 32), {1, 6, 0}, 5);
  const SpectralField b = random_field(TorusGrid(2, 64), {1, 6, 0}, 5);
  for (int k1 = -6; k1 <= 6; ++k1) {
    for (int k2 = 0; k2 <= 6; ++k2) CHECK(a.coefficient({k1, k2, 0}) == b.coefficient({k1, k2, 0}));
  }
  CHECK(std::abs(a.mean()) == 0.0);
  CHECK(l2_norm(to_spectral(to_physical(a)) - a) < 1e-13 * l2_norm(a));
}

TEST_CASE("shape errors") {
  const SpectralField a(TorusGrid(2, 16));
  const SpectralField b(TorusGrid(2, 32));
  CHECK_THROWS_AS(product(a, b), ShapeError);
  CHECK_THROWS_AS(inner_product(a, b), ShapeError);
  CHECK_THROWS_AS(RealField(TorusGrid(2, 16), AlignedVector<double>(10)), ShapeError);
}
