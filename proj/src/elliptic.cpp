#include "inhomo/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inhomo/error.hpp"
#include "inhomo/kernels.hpp"

namespace inhomo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// to_spectral(m * to_physical(f)) without dealiasing.
SpectralField collocation_product(const RealField& m, const SpectralField& f) {
  RealField g = to_physical(f);
  kernels::active().mul(m.values().data(), g.values().data(), g.values().data(), g.size());
  return to_spectral(g);
}

SpectralField precondition(const SpectralField& r, double abar) {
  SpectralField z = inverse_minus_laplacian(r);
  z *= 1.0 / abar;
  return z;
}

EllipticSolution finish_solution(SpectralField pi, const Coefficient& a, const SpectralField& rhs, int iterations,
                                 bool converged) {
  pi.coeffs()[0] = 0.0;
  const double rn = l2_norm(rhs);
  const double res = l2_norm(apply_elliptic_operator(a, pi) - rhs);
  EllipticSolution sol{pi, gradient(pi), rn > 0 ? res / rn : res, iterations, converged, {}};
  return sol;
}

void check_rhs_mean(const SpectralField& rhs) {
  // L2 norm of the mean mode against the whole field.
  if (std::abs(rhs.mean()) * std::sqrt(rhs.grid().volume()) > 1e-10 * l2_norm(rhs)) {
    throw DomainError("right-hand side of the pressure equation has a nonzero mean");
  }
}

}  // namespace

Coefficient::Coefficient(const SpectralField& a) : a_(a), values_(to_physical(a)) { init(); }

Coefficient::Coefficient(const RealField& values) : a_(to_spectral(values)), values_(values) { init(); }

void Coefficient::init() {
  for (double x : values_.values()) {
    if (!std::isfinite(x)) throw DomainError("coefficient has non-finite values");
  }
  a_star_ = min_value(values_);
  a_upper_ = max_value(values_);
  if (!(a_star_ > 0.0)) throw DomainError("coefficient must be bounded below by a positive constant, min = " +
                                          std::to_string(a_star_));
}

double Coefficient::relative_deviation() const {
  const double m = mean_value();
  double dev = 0.0;
  for (double x : values_.values()) dev = std::max(dev, std::abs(x - m));
  return dev / m;
}

EllipticSolution solve_constant(const SpectralField& div_f) {
  check_rhs_mean(div_f);
  SpectralField rhs = div_f;
  rhs.coeffs()[0] = 0.0;
  SpectralField pi = inverse_minus_laplacian(rhs);
  const double rn = l2_norm(rhs);
  const double res = l2_norm(laplacian(pi) + rhs);
  return EllipticSolution{pi, gradient(pi), rn > 0 ? res / rn : res, 1, true, {}};
}

SpectralField coefficient_product(const Coefficient& a, const SpectralField& f) {
  require_same_grid(a.grid(), f.grid(), "coefficient product");
  return collocation_product(a.values(), f);
}

SpectralField apply_elliptic_operator(const Coefficient& a, const SpectralField& x) {
  require_same_grid(a.grid(), x.grid(), "elliptic operator");
  const int dim = x.grid().dim();
  SpectralField out(x.grid());
  for (int j = 0; j < dim; ++j) out -= partial(collocation_product(a.values(), partial(x, j)), j);
  return out;
}

EllipticSolution solve_variable_krylov_rhs(const Coefficient& a, const SpectralField& rhs_in, double tol, int max_iter,
                                           const SpectralField* guess) {
  require_same_grid(a.grid(), rhs_in.grid(), "solve_variable_krylov");
  if (!(tol > 0.0)) throw DomainError("solver tolerance must be positive");
  check_rhs_mean(rhs_in);
  SpectralField rhs = rhs_in;
  rhs.coeffs()[0] = 0.0;
  const double rhs_norm = l2_norm(rhs);
  const TorusGrid& grid = rhs.grid();
  if (rhs_norm == 0.0) return finish_solution(SpectralField(grid), a, rhs, 0, true);

  const double abar = a.mean_value();
  SpectralField x = guess ? *guess : SpectralField(grid);
  require_same_grid(x.grid(), grid, "solve_variable_krylov guess");
  x.coeffs()[0] = 0.0;

  int it = 0;
  SpectralField best = x;
  double best_res = kInf;
  // Restarts recompute the true residual so recursion drift cannot fake convergence.
  while (true) {
    SpectralField r = rhs - apply_elliptic_operator(a, x);
    double rnorm = l2_norm(r);
    if (rnorm < best_res) {
      best_res = rnorm;
      best = x;
    }
    if (rnorm <= tol * rhs_norm) return finish_solution(x, a, rhs, it, true);
    if (it >= max_iter) break;
    SpectralField z = precondition(r, abar);
    SpectralField p = z;
    double rz = inner_product(r, z);
    const int restart_at = it;
    while (it < max_iter) {
      const SpectralField ap = apply_elliptic_operator(a, p);
      const double pap = inner_product(p, ap);
      if (!(pap > 0.0)) break;
      const double alpha = rz / pap;
      x.axpy(alpha, p);
      r.axpy(-alpha, ap);
      ++it;
      rnorm = l2_norm(r);
      if (!std::isfinite(rnorm)) throw ConvergenceError("conjugate gradient produced non-finite residuals");
      if (rnorm <= tol * rhs_norm) break;
      z = precondition(r, abar);
      const double rz_new = inner_product(r, z);
      p *= rz_new / rz;
      p += z;
      rz = rz_new;
    }
    if (it == restart_at) break;
  }
  return finish_solution(best, a, rhs, it, false);
}

EllipticSolution solve_variable_krylov(const Coefficient& a, const VectorField& F, double tol, int max_iter) {
  require_same_grid(a.grid(), F.grid(), "solve_variable_krylov");
  return solve_variable_krylov_rhs(a, divergence(F), tol, max_iter);
}

EllipticSolution solve_variable_perturbative(const Coefficient& a, const VectorField& F, double tol, int max_iter) {
  require_same_grid(a.grid(), F.grid(), "solve_variable_perturbative");
  if (!(tol > 0.0)) throw DomainError("solver tolerance must be positive");
  const TorusGrid& grid = F.grid();
  const int dim = grid.dim();
  const double abar = a.mean_value();
  RealField deviation = a.values();
  for (auto& x : deviation.values()) x -= abar;
  const SpectralField div_f = divergence(F);
  const double div_norm = l2_norm(div_f);

  SpectralField pi(grid);
  VectorField g(grid);
  std::vector<double> rates;
  double prev_diff = -1.0;
  int growth = 0;
  for (int k = 1; k <= max_iter; ++k) {
    VectorField G = F;
    for (int j = 0; j < dim; ++j) G[j] += collocation_product(deviation, g[j]);
    SpectralField next_pi = inverse_minus_laplacian(divergence(G));
    next_pi *= 1.0 / abar;
    VectorField next_g = gradient(next_pi);
    const double diff = l2_norm(next_g - g);
    const double norm = l2_norm(next_g);
    if (!std::isfinite(diff)) throw ConvergenceError("perturbative pressure iteration produced non-finite values");
    if (prev_diff > 0.0) {
      rates.push_back(diff / prev_diff);
      growth = diff > prev_diff ? growth + 1 : 0;
      if (growth >= 3) {
        throw ConvergenceError("perturbative pressure iteration diverges: relative coefficient deviation " +
                               std::to_string(a.relative_deviation()) + " (needs < 1)");
      }
    }
    prev_diff = diff;
    pi = next_pi;
    g = next_g;
    const double res = div_norm > 0 ? l2_norm(apply_elliptic_operator(a, pi) - div_f) / div_norm : 0.0;
    if (diff <= tol * norm || res <= tol) {
      EllipticSolution sol = finish_solution(pi, a, div_f, k, true);
      sol.rates = rates;
      return sol;
    }
  }
  EllipticSolution sol = finish_solution(pi, a, div_f, max_iter, false);
  sol.rates = rates;
  return sol;
}

std::string variant_name(EllipticVariant v) {
  switch (v) {
    case EllipticVariant::Interior:
      return "interior";
    case EllipticVariant::Energy:
      return "energy";
    case EllipticVariant::Last:
      return "last";
  }
  return "interior";
}

EllipticVariant parse_variant(const std::string& name) {
  if (name == "interior") return EllipticVariant::Interior;
  if (name == "energy") return EllipticVariant::Energy;
  if (name == "last") return EllipticVariant::Last;
  throw DomainError("unknown elliptic estimate variant '" + name + "'");
}

EllipticEstimateReport verify_besov_elliptic(const Coefficient& a, const VectorField& F, const BesovIndex& idx,
                                             double sigma, EllipticVariant variant, const DyadicCutoffs& cut,
                                             double gamma) {
  idx.validate();
  const int dim = a.grid().dim();
  if (!(idx.p > 1.0) || std::isinf(idx.p)) throw DomainError("Besov elliptic estimates need 1 < p < inf");
  if (!idx.condition_c(dim)) throw DomainError("coefficient regularity index fails s > 1 + N/p (or = with r = 1)");
  switch (variant) {
    case EllipticVariant::Interior:
      if (!(sigma > 1.0 && sigma <= idx.s)) throw DomainError("interior estimate needs sigma in (1, s]");
      break;
    case EllipticVariant::Energy:
      if (idx.p < 2.0) throw DomainError("energy estimate needs p >= 2");
      if (!(sigma > 1.0 + dim / idx.p - dim / 2.0 && sigma <= idx.s)) {
        throw DomainError("energy estimate needs sigma in (1 + N/p - N/2, s]");
      }
      break;
    case EllipticVariant::Last:
      if (!(sigma > 1.0)) throw DomainError("commutator-split estimate needs sigma > 1");
      break;
  }
  const EllipticSolution sol = solve_variable_krylov(a, F, 1e-12, 2000);
  const BesovIndex at_sigma{sigma, idx.p, idx.r};
  const BesovIndex below{sigma - 1.0, idx.p, idx.r};
  const VectorField grad_a = gradient(a.field());

  EllipticEstimateReport rep;
  rep.variant = variant;
  rep.sigma = sigma;
  rep.contrast = a.contrast();
  rep.lhs = a.a_star() * besov_norm(sol.grad_pi, at_sigma, cut).total;
  rep.div_term = besov_norm(divergence(F), below, cut).total;
  rep.coefficient_base = 1.0 + besov_norm(grad_a, {idx.s - 1.0, idx.p, idx.r}, cut).total / a.a_star();
  switch (variant) {
    case EllipticVariant::Interior:
      rep.tail_term = a.a_star() * lp_norm(sol.grad_pi, idx.p);
      rep.rhs = rep.div_term + std::pow(rep.coefficient_base, sigma) * rep.tail_term;
      break;
    case EllipticVariant::Energy:
      rep.tail_term = l2_norm(F);
      rep.rhs = rep.div_term + std::pow(rep.coefficient_base, gamma) * rep.tail_term;
      rep.fitted_gamma = gamma;
      break;
    case EllipticVariant::Last:
      rep.tail_term = lp_norm(grad_a, kInf) * besov_norm(sol.grad_pi, below, cut).total +
                      lp_norm(sol.grad_pi, kInf) * besov_norm(grad_a, below, cut).total;
      rep.rhs = rep.div_term + rep.tail_term;
      break;
  }
  if (!(rep.rhs > 0.0)) throw DomainError("estimate right-hand side vanishes (zero data)");
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

GammaFit fit_elliptic_gamma(std::vector<EllipticEstimateReport>& reports, double gamma_max) {
  if (reports.empty()) throw DomainError("gamma fit needs at least one report");
  for (const auto& r : reports) {
    if (r.variant != EllipticVariant::Energy) throw DomainError("gamma fit applies to energy-variant reports only");
  }
  auto spread = [&](double g) {
    double mean = 0.0;
    std::vector<double> logs;
    for (const auto& r : reports) {
      const double l = std::log(r.lhs) - std::log(r.div_term + std::pow(r.coefficient_base, g) * r.tail_term);
      logs.push_back(l);
      mean += l;
    }
    mean /= static_cast<double>(logs.size());
    double var = 0.0;
    for (double l : logs) var += (l - mean) * (l - mean);
    return var;
  };
  const int steps = static_cast<int>(std::round(gamma_max / 0.01));
  double best_g = 0.0;
  double best_v = kInf;
  for (int i = 0; i <= steps; ++i) {
    const double g = 0.01 * i;
    const double v = spread(g);
    if (v < best_v - 1e-15) {
      best_v = v;
      best_g = g;
    }
  }
  GammaFit fit{best_g, 0.0};
  for (auto& r : reports) {
    r.rhs = r.div_term + std::pow(r.coefficient_base, best_g) * r.tail_term;
    r.ratio = r.lhs / r.rhs;
    r.fitted_gamma = best_g;
    fit.constant = std::max(fit.constant, r.ratio);
  }
  return fit;
}

}  // namespace inhomo
