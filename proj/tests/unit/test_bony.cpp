#include <cmath>

#include "doctest.h"
#include "inhomo/bony.hpp"
#include "inhomo/error.hpp"
#include "inhomo/random_field.hpp"

using namespace inhomo;

namespace {

SpectralField mode(const TorusGrid& g, int k1, int k2) {
  return to_spectral(RealField::sample(g, [=](const Point& x) { return std::cos(k1 * x[0] + k2 * x[1]); }));
}

}  // namespace

TEST_CASE("Bony split reconstructs the dealiased product") {
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 64 : 32);
    const DyadicCutoffs cut(g);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      SpectralField u = random_field(g, {0, 30, 0}, seed, 1);
      SpectralField v = random_field(g, {0, 30, 0}, seed, 2);
      u.coeffs()[0] = 0.7;
      const SpectralField uv = product(u, v);
      const BonySplit s = bony_decompose(u, v, cut);
      CHECK(l2_norm(s.t_uv + s.t_vu + s.remainder - uv) < 1e-12 * l2_norm(uv));
      CHECK(l2_norm(s.t_uv - paraproduct(u, v, cut)) < 1e-14 * l2_norm(uv));
      CHECK(l2_norm(s.remainder - remainder(u, v, cut)) < 1e-14 * l2_norm(uv));
      CHECK(l2_norm(remainder(v, u, cut) - s.remainder) < 1e-13 * l2_norm(uv));
      CHECK(l2_norm(t_prime(u, v, cut) + paraproduct(v, u, cut) - uv) < 1e-12 * l2_norm(uv));
    }
  }
}

TEST_CASE("zero factors") {
  const TorusGrid g(2, 32);
  const DyadicCutoffs cut(g);
  const SpectralField v = random_field(g, {1, 10, 0}, 3);
  CHECK(l2_norm(paraproduct(SpectralField(g), v, cut)) == 0.0);
  CHECK(l2_norm(remainder(v, SpectralField(g), cut)) == 0.0);
}

TEST_CASE("disjoint spectra reduce to one paraproduct") {
  const TorusGrid g(2, 128);
  const DyadicCutoffs cut(g);
  // u in blocks -1, 0; v with |k| = 32 in blocks 4, 5.
  const SpectralField u = 0.5 * mode(g, 1, 0) + mode(g, 0, 1) + SpectralField::constant(g, 2.0);
  const SpectralField v = mode(g, 32, 0);
  const SpectralField uv = product(u, v);
  const BonySplit s = bony_decompose(u, v, cut);
  CHECK(l2_norm(s.t_uv - uv) < 1e-13 * l2_norm(uv));
  CHECK(l2_norm(s.t_vu) < 1e-13 * l2_norm(uv));
  CHECK(l2_norm(s.remainder) < 1e-13 * l2_norm(uv));
}

TEST_CASE("paraproduct by a constant removes the two lowest blocks") {
  const TorusGrid g(2, 64);
  const DyadicCutoffs cut(g);
  const SpectralField v = random_field(g, {0, 20, 0}, 5);
  const SpectralField c = SpectralField::constant(g, 3.0);
  const SpectralField expected = 3.0 * (v - s_q(v, 1, cut));
  CHECK(l2_norm(paraproduct(c, v, cut) - expected) < 1e-13 * l2_norm(v));
}

TEST_CASE("remainder of a single mode with itself") {
  const TorusGrid g(2, 64);
  const DyadicCutoffs cut(g);
  const SpectralField u = mode(g, 8, 0);
  const BonySplit s = bony_decompose(u, u, cut);
  const SpectralField uu = product(u, u);
  // All blocks of u sit at q = 2, 3, so the paraproducts vanish and R carries u^2.
  CHECK(l2_norm(s.t_uv) < 1e-14);
  CHECK(l2_norm(s.remainder - uu) < 1e-13 * l2_norm(uu));
}

TEST_CASE("tame and paraproduct ratios") {
  const TorusGrid g(2, 64);
  const DyadicCutoffs cut(g);
  const SpectralField b = random_field(g, {1, 12, 0}, 8);
  const SpectralField a = SpectralField::constant(g, 2.5);
  CHECK(tame_bound_check(a, b, {2, 2, 1}, cut) <= 1.0 + 1e-12);
  CHECK(tame_bound_check(b, a, {2, 2, 1}, cut) <= 1.0 + 1e-12);
  CHECK_THROWS_AS(tame_bound_check(a, b, {0, 2, 1}, cut), DomainError);
  CHECK_THROWS_AS(tame_bound_check(SpectralField(g), SpectralField(g), {1, 2, 1}, cut), DomainError);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const SpectralField x = random_field(g, {1, 12, 1}, seed, 3);
    const SpectralField y = random_field(g, {1, 12, 1}, seed, 4);
    worst = std::max(worst, tame_bound_check(x, y, {2, 2, 1}, cut));
    CHECK(std::isfinite(paraproduct_bound_check(x, y, {1, 2, 1}, cut)));
    const double neg = negative_paraproduct_check(x, y, {1, 2, 1}, -0.5, cut);
    CHECK(std::isfinite(neg));
    CHECK(neg > 0.0);
    CHECK_THROWS_AS(negative_paraproduct_check(x, y, {1, 2, 1}, 0.5, cut), DomainError);
  }
  CHECK(worst < 10.0);
}

TEST_CASE("composition ratios") {
  const TorusGrid g(2, 64);
  const DyadicCutoffs cut(g);
  const SpectralField a = random_field(g, {1, 8, 0}, 6);
  const BesovIndex idx{2, 2, 1};
  CHECK(composition_check({[](double x) { return x; }}, a, idx, cut) == doctest::Approx(1.0).epsilon(1e-13));
  const ScalarMap sq{[](double x) { return x * x; }};
  const double r1 = composition_check(sq, a, idx, cut);
  const double r2 = composition_check(sq, 0.5 * a, idx, cut);
  CHECK(r2 == doctest::Approx(0.5 * r1).epsilon(1e-12));
  const ScalarMap inv{[](double x) { return 1.0 / (1.0 + x); }, -0.5, 0.5};
  const double amax = lp_norm(a, INFINITY);
  CHECK(std::isfinite(composition_check(inv, (0.5 / amax) * a, idx, cut)));
  CHECK_THROWS_AS(composition_check(inv, (2.0 / amax) * a, idx, cut), DomainError);
}
