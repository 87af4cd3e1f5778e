#include "inhomo/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "inhomo/error.hpp"
#include "inhomo/transport.hpp"

namespace inhomo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Iterate {
  std::vector<SpectralField> a;
  std::vector<VectorField> u;
  std::vector<SpectralField> pi;
  std::vector<VectorField> grad_pi;
};

struct Pair {
  SpectralField a;
  VectorField u;

  Pair& axpy(double alpha, const Pair& o) {
    a.axpy(alpha, o.a);
    u.axpy(alpha, o.u);
    return *this;
  }
};

// Linear transport of (a, u) by the frozen velocity v with frozen pressure gradient g.
Pair frozen_rhs(const Pair& y, const VectorField& v, const VectorField& g, const std::optional<VectorField>& f) {
  Pair d{advection_term(v, y.a), convection(v, y.u)};
  d.u *= -1.0;
  const Coefficient a(y.a);
  for (int j = 0; j < y.u.dim(); ++j) d.u[j] -= coefficient_product(a, g[j]);
  if (f) d.u += *f;
  return d;
}

std::optional<VectorField> force_at(const ForcingProvider& forcing, double t) {
  if (!forcing) return std::nullopt;
  return forcing(t);
}

void fill_pressure(Iterate& it, const std::vector<double>& times, const ForcingProvider& forcing,
                   const SolverOptions& solver, const Iterate* guess) {
  it.pi.clear();
  it.grad_pi.clear();
  for (std::size_t j = 0; j < times.size(); ++j) {
    Coefficient a = [&] {
      try {
        return Coefficient(it.a[j]);
      } catch (const DomainError&) {
        throw IntegrationAbort("density positivity lost in a Picard iterate", times[j]);
      }
    }();
    const auto f = force_at(forcing, times[j]);
    EllipticSolution s = solve_pressure(a, it.u[j], f ? &*f : nullptr, solver, guess ? &guess->pi[j] : nullptr);
    it.pi.push_back(std::move(s.pi));
    it.grad_pi.push_back(std::move(s.grad_pi));
  }
}

Iterate next_iterate(const Iterate& prev, const InitialData& data, const std::vector<double>& times, double h,
                     const SolverOptions& solver, const SpectralField& a0) {
  const int steps = static_cast<int>(times.size() / 2);
  const double dx = data.u0.grid().spacing();
  Iterate out;
  Pair y{a0, data.u0};
  out.a.push_back(y.a);
  out.u.push_back(y.u);
  std::optional<Pair> k1;
  for (int m = 0; m < steps; ++m) {
    const std::size_t j0 = 2 * m, jm = j0 + 1, j1 = j0 + 2;
    const double t = times[j0];
    const double vmax = std::max({lp_norm(prev.u[j0], kInf), lp_norm(prev.u[jm], kInf), lp_norm(prev.u[j1], kInf)});
    if (h * vmax > solver.cfl * dx * (1 + 1e-12)) throw IntegrationAbort("CFL violation in a Picard iterate", t);
    const auto f0 = force_at(data.forcing, t);
    const auto fm = force_at(data.forcing, t + 0.5 * h);
    const auto f1 = force_at(data.forcing, t + h);
    if (!k1) k1 = frozen_rhs(y, prev.u[j0], prev.grad_pi[j0], f0);
    Pair s = y;
    const Pair k2 = frozen_rhs(s.axpy(0.5 * h, *k1), prev.u[jm], prev.grad_pi[jm], fm);
    s = y;
    const Pair k3 = frozen_rhs(s.axpy(0.5 * h, k2), prev.u[jm], prev.grad_pi[jm], fm);
    s = y;
    const Pair k4 = frozen_rhs(s.axpy(h, k3), prev.u[j1], prev.grad_pi[j1], f1);
    Pair next = y;
    next.axpy(h / 6, *k1).axpy(h / 3, k2).axpy(h / 3, k3).axpy(h / 6, k4);
    const Pair d1 = frozen_rhs(next, prev.u[j1], prev.grad_pi[j1], f1);
    // Cubic Hermite value at the half step keeps fourth-order accuracy.
    Pair mid = y;
    mid.axpy(1.0, next);
    mid.a *= 0.5;
    mid.u *= 0.5;
    mid.axpy(h / 8, *k1).axpy(-h / 8, d1);
    out.a.push_back(mid.a);
    out.u.push_back(mid.u);
    out.a.push_back(next.a);
    out.u.push_back(next.u);
    y = std::move(next);
    k1 = d1;
  }
  return out;
}

}  // namespace

void PicardOptions::validate() const {
  if (!(t_horizon > 0.0) || !std::isfinite(t_horizon)) throw DomainError("Picard horizon must be positive and finite");
  if (n_iters < 1) throw DomainError("Picard needs at least one iteration");
  if (steps < 1) throw DomainError("Picard needs at least one time step");
  if (!(floor_factor >= 0.0)) throw DomainError("floor factor must be nonnegative");
}

PicardResult picard_iterate(const InitialData& data, const PicardOptions& opts, const SolverOptions& solver) {
  opts.validate();
  data.validate();
  const TorusGrid& grid = data.rho0.grid();
  const double h = opts.t_horizon / opts.steps;
  PicardResult res;
  for (int j = 0; j <= 2 * opts.steps; ++j) res.times.push_back(j == 2 * opts.steps ? opts.t_horizon : 0.5 * h * j);

  RealField av = to_physical(data.rho0);
  for (auto& x : av.values()) x = 1.0 / x;
  const SpectralField a0 = to_spectral(av);
  res.floor = opts.floor_factor * (l2_norm(a0) + l2_norm(data.u0));

  Iterate cur;
  cur.a.assign(res.times.size(), a0);
  cur.u.assign(res.times.size(), data.u0);
  cur.pi.assign(res.times.size(), SpectralField(grid));
  cur.grad_pi.assign(res.times.size(), VectorField(grid));
  res.terminal.push_back({a0, data.u0, VectorField(grid)});

  for (int n = 0; n < opts.n_iters; ++n) {
    Iterate next = next_iterate(cur, data, res.times, h, solver, a0);
    fill_pressure(next, res.times, data.forcing, solver, n > 0 ? &cur : nullptr);
    double delta = 0.0;
    for (std::size_t j = 0; j < res.times.size(); ++j) {
      delta = std::max(delta, l2_norm(next.a[j] - cur.a[j]) + l2_norm(next.u[j] - cur.u[j]));
    }
    res.deltas.push_back(delta);
    res.terminal.push_back({next.a.back(), next.u.back(), next.grad_pi.back()});
    cur = std::move(next);
  }
  for (std::size_t n = 0; n + 1 < res.deltas.size(); ++n) {
    res.ratios.push_back(res.deltas[n] > 0 ? res.deltas[n + 1] / res.deltas[n] : std::nan(""));
  }
  return res;
}

bool picard_cauchy(const PicardResult& res, int n_from, int n_to, double factor) {
  if (n_from < 0 || n_to + 1 >= static_cast<int>(res.deltas.size())) {
    throw DomainError("Picard result has too few iterates for the requested range");
  }
  for (int n = n_from; n <= n_to; ++n) {
    const double next = res.deltas[n + 1];
    if (next > res.floor && next > factor * res.deltas[n]) return false;
  }
  return true;
}

}  // namespace inhomo
