#include "inhomo/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inhomo/bernstein_quadrature.hpp"
#include "inhomo/error.hpp"
#include "inhomo/parallel.hpp"
#include "inhomo/random_field.hpp"

namespace inhomo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CommutatorReport fitted_report(const SpectralField& a, const SpectralField& w, double p, double r, double varsigma,
                               double norm_product, const DyadicCutoffs& cut) {
  CommutatorReport rep;
  const int dim = a.grid().dim();
  for (int q = -1; q <= cut.q_max(); ++q) {
    double lhs = 0.0;
    for (int k = 0; k < dim; ++k) lhs = std::max(lhs, lp_norm(commutator_field(a, w, q, k, cut), p));
    const double bound = std::pow(2.0, -q * varsigma) * norm_product;
    rep.per_q.push_back({q, lhs, bound});
    rep.c_q_fitted.push_back(lhs == 0.0 ? 0.0 : (bound > 0.0 ? lhs / bound : kInf));
  }
  rep.ell_r_norm_of_cq = ell_r_norm(rep.c_q_fitted, r);
  return rep;
}

}  // namespace

SpectralField commutator_field(const SpectralField& a, const SpectralField& w, int q, int k, const DyadicCutoffs& cut) {
  require_same_grid(a.grid(), w.grid(), "commutator_field");
  require_same_grid(a.grid(), cut.grid(), "commutator_field cutoffs");
  if (k < 0 || k >= a.grid().dim()) throw DomainError("derivative axis out of range");
  SpectralField a0 = a;
  a0.coeffs()[0] = 0.0;
  return partial(product(a0, delta_q(w, q, cut)) - delta_q(product(a0, w), q, cut), k);
}

CommutatorReport verify_lemma_com(const SpectralField& a, const SpectralField& w, const BesovIndex& idx,
                                  double varsigma, const DyadicCutoffs& cut) {
  idx.validate();
  const int dim = a.grid().dim();
  if (!idx.condition_c(dim)) throw DomainError("commutator estimate needs (s, p, r) satisfying condition (C)");
  if (!(varsigma > -1.0 && varsigma <= idx.s - 1.0)) throw DomainError("varsigma must lie in (-1, s - 1]");
  const double ga = besov_norm(gradient(a), {idx.s - 1, idx.p, idx.r}, cut).total;
  const double wn = besov_norm(w, {varsigma, idx.p, idx.r}, cut).total;
  return fitted_report(a, w, idx.p, idx.r, varsigma, ga * wn, cut);
}

CommutatorReport verify_lemma_combis(const SpectralField& a, const SpectralField& w, double varsigma, double p,
                                     double r, const DyadicCutoffs& cut) {
  if (!(varsigma > 0.0)) throw DomainError("second commutator estimate needs varsigma > 0");
  const BesovIndex idx{varsigma, p, r};
  idx.validate();
  const VectorField ga = gradient(a);
  const double bound = lp_norm(ga, kInf) * besov_norm(w, idx, cut).total +
                       lp_norm(w, kInf) * besov_norm(ga, idx, cut).total;
  return fitted_report(a, w, p, r, varsigma, bound, cut);
}

SpectralField zero_pad(const SpectralField& f, const TorusGrid& target) {
  const TorusGrid& src = f.grid();
  if (target.dim() != src.dim() || target.points() < src.points()) {
    throw ShapeError("zero padding needs a grid of the same dimension with at least as many points");
  }
  const auto tables = grid_tables(src);
  SpectralField out(target);
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (tables->nyquist_mask[i] == 0.0 || c[i] == Complex(0.0)) continue;
    out.set_coefficient(tables->index_k[i], c[i]);
  }
  return out;
}

namespace {

bool even_integer(double p) { return p == std::round(p) && static_cast<long>(p) % 2 == 0; }

struct BernsteinIntegrals {
  BernsteinIdentity identity;
  double power = 0.0;  // int |u|^p
};

BernsteinIntegrals bernstein_integrals(const SpectralField& u, const SpectralField& a, double p, int oversampling) {
  require_same_grid(u.grid(), a.grid(), "weighted_bernstein_identity");
  if (!(p > 1.0) || std::isinf(p)) throw DomainError("weighted Bernstein identity needs 1 < p < inf");
  if (oversampling < 1) throw DomainError("oversampling factor must be >= 1");
  const int dim = u.grid().dim();
  const TorusGrid fine(dim, u.grid().points() * oversampling);
  const SpectralField uf = zero_pad(u, fine);
  const RealField U = to_physical(uf);
  double umax = 0.0;
  for (double x : U.values()) umax = std::max(umax, std::abs(x));
  const double eps = 1e-8 * umax;

  BernsteinIntegrals out;
  if (dim == 2 && !even_integer(p)) {
    // |u|^{p-2} is not smooth across the zero set; split the quadrature there.
    const PowerIntegrals r = line_split_integrals(u, a, p, eps, oversampling);
    out.identity = {r.middle, r.right, 0.0};
    out.power = r.power;
  } else {
    // Polynomial integrands: the zero-padded grid rule is exact up to roundoff.
    const RealField A = to_physical(zero_pad(a, fine));
    std::vector<RealField> grad;
    VectorField flux(fine);
    for (int j = 0; j < dim; ++j) {
      grad.push_back(to_physical(partial(uf, j)));
      RealField g = grad.back();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] *= A[i];
      flux[j] = to_spectral(g);
    }
    const RealField D = to_physical(divergence(flux));
    double middle = 0.0, right = 0.0, power = 0.0;
    for (std::size_t i = 0; i < U.size(); ++i) {
      const double x = U[i];
      double w_mid, w_right;
      if (p >= 2.0) {
        w_mid = std::pow(std::abs(x), p - 2);
        w_right = w_mid * x;
      } else {
        const double T = std::sqrt(x * x + eps * eps);
        const double dT = T > 0 ? x / T : 0.0;
        w_mid = dT * dT * std::pow(T, p - 2);
        w_right = std::pow(T, p - 1) * dT;
      }
      double g2 = 0.0;
      for (const auto& g : grad) g2 += g[i] * g[i];
      middle += A[i] * g2 * w_mid;
      right -= D[i] * w_right;
      power += std::pow(std::abs(x), p);
    }
    const double vol = fine.cell_volume();
    out.identity = {(p - 1) * middle * vol, right * vol, 0.0};
    out.power = power * vol;
  }
  auto& id = out.identity;
  id.residual = id.right != 0.0 ? std::abs(id.middle - id.right) / std::abs(id.right) : (id.middle == 0.0 ? 0.0 : kInf);
  return out;
}

}  // namespace

BernsteinIdentity weighted_bernstein_identity(const SpectralField& u, const SpectralField& a, double p, int oversampling) {
  return bernstein_integrals(u, a, p, oversampling).identity;
}

WeightedBernsteinReport verify_weighted_bernstein(const SpectralField& u, const SpectralField& a, double p, double R1,
                                                  double R2, int oversampling) {
  if (!(R1 > 0.0 && R2 > R1)) throw DomainError("annulus needs 0 < R1 < R2");
  if (!spectrum_within(u, R1, R2)) throw DomainError("spectrum of u leaks outside the annulus");
  const TorusGrid fine(u.grid().dim(), u.grid().points() * oversampling);
  const RealField A = to_physical(zero_pad(a, fine));
  const double a_star = min_value(A);
  if (!(a_star > 0.0)) throw DomainError("weighted Bernstein needs a bounded below by a positive constant");
  const BernsteinIntegrals b = bernstein_integrals(u, a, p, oversampling);
  WeightedBernsteinReport rep;
  rep.identity = b.identity;
  rep.identity_residual = b.identity.residual;
  const double denom = a_star * ((p - 1) / (p * p)) * R1 * R1 * b.power;
  rep.lower_ratio = denom > 0 ? rep.identity.middle / denom : kInf;
  return rep;
}

CommutatorSuiteResult run_commutator_suite(const CommutatorCase& c, int samples, const std::vector<int>& grids,
                                           std::uint64_t seed) {
  if (samples < 1 || grids.empty()) throw DomainError("commutator suite needs samples and grids");
  CommutatorSuiteResult res;
  res.c = c;
  res.grids = grids;
  constexpr int dim = 2;
  const double reg_a = c.lemma == CommutatorLemma::Com ? c.idx.s : c.varsigma + 1.0;
  const double decay_a = dim / 2.0 + reg_a + 1.0;
  const double decay_w = dim / 2.0 + c.varsigma + 1.0;
  for (int n : grids) {
    const TorusGrid g(dim, n);
    const DyadicCutoffs cut(g);
    const double kmax = g.dealias_cutoff();
    std::vector<double> norms(static_cast<std::size_t>(samples));
    parallel_for(samples, [&](int i) {
      const SpectralField a =
          SpectralField::constant(g, 1.0) + random_field(g, {1, kmax, decay_a}, seed, 2 * static_cast<std::uint64_t>(i));
      const SpectralField w = random_field(g, {1, kmax, decay_w}, seed, 2 * static_cast<std::uint64_t>(i) + 1);
      const CommutatorReport rep = c.lemma == CommutatorLemma::Com
                                       ? verify_lemma_com(a, w, c.idx, c.varsigma, cut)
                                       : verify_lemma_combis(a, w, c.varsigma, c.idx.p, c.idx.r, cut);
      norms[static_cast<std::size_t>(i)] = rep.ell_r_norm_of_cq;
    });
    for (double x : norms) {
      if (!std::isfinite(x)) res.finite = false;
    }
    res.norms.push_back(std::move(norms));
  }
  for (std::size_t gi = 1; gi < res.norms.size(); ++gi) {
    for (int i = 0; i < samples; ++i) {
      const double r = res.norms[gi][i] / res.norms[gi - 1][i];
      res.max_refinement_factor = std::max(res.max_refinement_factor, std::max(r, 1.0 / r));
    }
  }
  if (res.norms.size() == 1) res.max_refinement_factor = 1.0;
  const auto& last = res.norms.back();
  const auto [mn, mx] = std::minmax_element(last.begin(), last.end());
  res.ensemble_spread = *mx / *mn;
  res.pass = res.finite && res.max_refinement_factor < 2.0 && res.ensemble_spread < 2.0;
  return res;
}

BernsteinSuiteResult run_weighted_bernstein_suite(const std::vector<double>& ps, const std::vector<double>& r1s,
                                                  double r2_over_r1, int samples, int points, std::uint64_t seed) {
  if (samples < 1 || ps.empty() || r1s.empty()) throw DomainError("Bernstein suite needs samples, exponents and radii");
  const TorusGrid g(2, points);
  const SpectralField a = to_spectral(RealField::sample(g, [](const Point& x) { return 1.5 + 0.4 * std::cos(x[0]); }));
  BernsteinSuiteResult res{ps, r1s, r2_over_r1, {}, {}, {}, true};
  for (double p : ps) {
    double worst = 0.0;
    std::vector<double> mins;
    for (double r1 : r1s) {
      const double r2 = r1 * r2_over_r1;
      std::vector<WeightedBernsteinReport> reps(static_cast<std::size_t>(samples));
      parallel_for(samples, [&](int i) {
        const SpectralField u = random_field(g, {r1, r2, 0}, seed, static_cast<std::uint64_t>(i));
        reps[static_cast<std::size_t>(i)] = verify_weighted_bernstein(u, a, p, r1, r2);
      });
      double mn = kInf;
      for (const auto& rep : reps) {
        worst = std::max(worst, rep.identity_residual);
        mn = std::min(mn, rep.lower_ratio);
      }
      mins.push_back(mn);
    }
    const auto [lo, hi] = std::minmax_element(mins.begin(), mins.end());
    const double factor = *hi / *lo;
    const double tol = p >= 2.0 ? kBernsteinResidualTol : kBernsteinResidualTolSmallP;
    if (!(worst < tol) || !(factor < kBernsteinStabilityFactor) || !(*lo > 0.0)) res.pass = false;
    res.residual_max.push_back(worst);
    res.min_ratio.push_back(std::move(mins));
    res.stability_factor.push_back(factor);
  }
  return res;
}

}  // namespace inhomo
