#include "inhomo/stability.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "inhomo/error.hpp"
#include "inhomo/parallel.hpp"
#include "inhomo/transport.hpp"

namespace inhomo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// || w^{1/p} |v| ||_p with w pointwise.
double weighted_lp(const std::vector<RealField>& v, const RealField& w, double p) {
  RealField m = magnitude(v);
  if (!std::isinf(p)) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] *= std::pow(w[i], 1.0 / p);
  }
  return lp_norm(m, p);
}

}  // namespace

std::array<RunResult, 2> run_pair(const InitialData& first, const InitialData& second, SolverOptions opts) {
  opts.keep_states = true;
  std::array<std::optional<RunResult>, 2> out;
  parallel_for(2, [&](int i) { out[static_cast<std::size_t>(i)] = run(i == 0 ? first : second, opts); });
  return {std::move(*out[0]), std::move(*out[1])};
}

GronwallReport stability_compare(const RunResult& run1, const RunResult& run2, double p,
                                 const ForcingProvider& forcing1, const ForcingProvider& forcing2) {
  if (!(p >= 1.0)) throw DomainError("stability comparison needs p >= 1");
  const auto& s1 = run1.states;
  const auto& s2 = run2.states;
  if (s1.empty() || s1.size() != s2.size()) throw DomainError("runs must keep the same number of states");
  GronwallReport rep;
  rep.p = p;
  double a_int = 0.0, prev_rate = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (std::abs(s1[i].t - s2[i].t) > 1e-12 * std::max(1.0, std::abs(s1[i].t))) {
      throw DomainError("runs are sampled at different times");
    }
    require_same_grid(s1[i].u.grid(), s2[i].u.grid(), "stability_compare");
    const double t = s1[i].t;
    const RealField rho1 = density_values(s1[i].a);
    const RealField rho2 = density_values(s2[i].a);
    RealField drho = rho2;
    for (std::size_t k = 0; k < drho.size(); ++k) drho[k] -= rho1[k];
    const double dr = lp_norm(drho, p);
    const double du = weighted_lp(to_physical(s2[i].u - s1[i].u), rho2, p);
    double df = 0.0;
    if (forcing1 || forcing2) {
      const TorusGrid& g = s1[i].u.grid();
      const VectorField f1 = forcing1 ? forcing1(t) : VectorField(g);
      const VectorField f2 = forcing2 ? forcing2(t) : VectorField(g);
      df = weighted_lp(to_physical(f2 - f1), rho2, p);
    }
    const double rho1_min = min_value(rho1);
    const double sqrt_rho2_min = std::sqrt(min_value(rho2));
    const double rate = lp_norm(gradient(to_spectral(rho1)), kInf) / sqrt_rho2_min +
                        lp_norm(s1[i].grad_pi, kInf) / (rho1_min * sqrt_rho2_min) +
                        lp_norm(velocity_gradient(s1[i].u), kInf);
    if (i > 0) a_int += 0.5 * (t - rep.times.back()) * (rate + prev_rate);
    prev_rate = rate;
    rep.times.push_back(t);
    rep.rho_distance.push_back(dr);
    rep.u_distance.push_back(du);
    rep.distance.push_back(dr + du);
    rep.forcing_distance.push_back(df);
    rep.a_integral.push_back(a_int);
  }
  rep.terminal_distance = rep.distance.back();

  const std::size_t m = rep.times.size();
  auto bound = [&](double C, std::vector<double>* out) {
    bool ok = true;
    double integral = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) {
        integral += 0.5 * (rep.times[i] - rep.times[i - 1]) *
                    (std::exp(-C * rep.a_integral[i]) * rep.forcing_distance[i] +
                     std::exp(-C * rep.a_integral[i - 1]) * rep.forcing_distance[i - 1]);
      }
      const double b = std::exp(C * rep.a_integral[i]) * (rep.distance[0] + integral);
      if (out) out->push_back(b);
      if (rep.distance[i] > b * (1 + 1e-9) + 1e-300) ok = false;
    }
    return ok;
  };
  double C = 0.0;
  if (!bound(0.0, nullptr)) {
    double hi = 1.0;
    while (!bound(hi, nullptr) && hi < 1e8) hi *= 2;
    if (!bound(hi, nullptr)) {
      C = kInf;
    } else {
      double lo = 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bound(mid, nullptr) ? hi : lo) = mid;
      }
      C = hi;
    }
  }
  rep.fitted_constant = C;
  bound(std::isinf(C) ? 0.0 : C, &rep.bound);
  return rep;
}

}  // namespace inhomo
