#include "inhomo/euler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "inhomo/error.hpp"
#include "inhomo/random_field.hpp"
#include "inhomo/transport.hpp"

namespace inhomo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Right-hand side of the (a, u) system plus the forcing-work density.
struct Tendency {
  SpectralField da;
  VectorField du;
  double dwork = 0.0;
  SpectralField pi;
};

Coefficient positive_coefficient(const SpectralField& a, double t) {
  try {
    return Coefficient(a);
  } catch (const DomainError&) {
    throw IntegrationAbort("density positivity lost", t);
  }
}

double forcing_density(const Coefficient& a, const VectorField& u, const VectorField& f) {
  const auto pu = to_physical(u);
  const auto pf = to_physical(f);
  const RealField& av = a.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < pu.size(); ++j) dot += pf[j][i] * pu[j][i];
    sum += dot / av[i];
  }
  return 2.0 * sum * a.grid().cell_volume();
}

Tendency tendency(const SpectralField& a_field, const VectorField& u, double t, const ForcingProvider& forcing,
                  const SolverOptions& opts, const SpectralField& pi_guess, const VectorField* frozen_grad_pi) {
  const Coefficient a = positive_coefficient(a_field, t);
  std::optional<VectorField> f;
  if (forcing) f = forcing(t);
  Tendency out{advection_term(u, a_field), VectorField(u.grid()), 0.0, SpectralField(u.grid())};
  VectorField grad_pi(u.grid());
  if (frozen_grad_pi) {
    grad_pi = *frozen_grad_pi;
    out.pi = pi_guess;
  } else {
    EllipticSolution sol = solve_pressure(a, u, f ? &*f : nullptr, opts, &pi_guess);
    grad_pi = std::move(sol.grad_pi);
    out.pi = std::move(sol.pi);
  }
  out.du = convection(u, u);
  out.du *= -1.0;
  // Same product as the elliptic operator, so div du vanishes to solver tolerance.
  for (int j = 0; j < u.dim(); ++j) out.du[j] -= coefficient_product(a, grad_pi[j]);
  if (f) {
    out.du += *f;
    out.dwork = forcing_density(a, u, *f);
  }
  return out;
}

void check_cfl(const VectorField& u, double dt, double cfl, double t) {
  const double vmax = lp_norm(u, kInf);
  const double h = u.grid().spacing();
  if (dt * vmax > cfl * h * (1 + 1e-12)) {
    throw IntegrationAbort("CFL violation: dt = " + std::to_string(dt) + " exceeds " + std::to_string(cfl * h / vmax), t);
  }
}

bool finite(const SpectralField& f) {
  for (auto c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

struct StepResult {
  FlowState state;
  double work_increment = 0.0;
};

StepResult rk4_step(const FlowState& s, const ForcingProvider& forcing, double dt, const SolverOptions& opts) {
  check_cfl(s.u, dt, opts.cfl, s.t);
  const VectorField* frozen = opts.lagged_pressure ? &s.grad_pi : nullptr;
  const SpectralField& a0 = s.a.field();

  const Tendency k1 = tendency(a0, s.u, s.t, forcing, opts, s.pi, frozen);
  SpectralField a = a0;
  a.axpy(0.5 * dt, k1.da);
  VectorField u = s.u;
  u.axpy(0.5 * dt, k1.du);
  const Tendency k2 = tendency(a, u, s.t + 0.5 * dt, forcing, opts, k1.pi, frozen);
  a = a0;
  a.axpy(0.5 * dt, k2.da);
  u = s.u;
  u.axpy(0.5 * dt, k2.du);
  const Tendency k3 = tendency(a, u, s.t + 0.5 * dt, forcing, opts, k2.pi, frozen);
  a = a0;
  a.axpy(dt, k3.da);
  u = s.u;
  u.axpy(dt, k3.du);
  const Tendency k4 = tendency(a, u, s.t + dt, forcing, opts, k3.pi, frozen);

  a = a0;
  u = s.u;
  a.axpy(dt / 6, k1.da).axpy(dt / 3, k2.da).axpy(dt / 3, k3.da).axpy(dt / 6, k4.da);
  u.axpy(dt / 6, k1.du).axpy(dt / 3, k2.du).axpy(dt / 3, k3.du).axpy(dt / 6, k4.du);
  const double t_new = s.t + dt;
  if (!finite(a)) throw IntegrationAbort("non-finite density", t_new);
  for (int j = 0; j < u.dim(); ++j) {
    if (!finite(u[j])) throw IntegrationAbort("non-finite velocity", t_new);
  }
  u = leray_project(u);

  const Coefficient coef = positive_coefficient(a, t_new);
  std::optional<VectorField> f;
  if (forcing) f = forcing(t_new);
  EllipticSolution p = solve_pressure(coef, u, f ? &*f : nullptr, opts, &k4.pi);
  const double work = dt / 6 * (k1.dwork + 2 * k2.dwork + 2 * k3.dwork + k4.dwork);
  return {FlowState{coef, std::move(u), std::move(p.pi), std::move(p.grad_pi), t_new}, work};
}

double bkm_integrand(const FlowState& s, const BesovIndex& idx, const DyadicCutoffs& cut) {
  return lp_norm(velocity_gradient(s.u), kInf) + besov_norm(s.grad_pi, {idx.s - 1, idx.p, idx.r}, cut).total;
}

}  // namespace

void InitialData::validate() const {
  require_same_grid(rho0.grid(), u0.grid(), "initial data");
  if (u0.dim() != rho0.grid().dim()) throw ShapeError("velocity must have one component per axis");
  if (!(min_value(to_physical(rho0)) > 0.0)) throw DomainError("initial density must be positive");
  const double div = l2_norm(divergence(u0));
  if (!(div < 1e-10)) throw DomainError("initial velocity is not divergence-free: ||div u0|| = " + std::to_string(div));
  idx.validate();
}

void SolverOptions::validate() const {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(t_end >= 0.0)) throw DomainError("t_end must be nonnegative");
  if (!(cfl > 0.0)) throw DomainError("cfl must be positive");
  if (record_every < 1) throw DomainError("record_every must be >= 1");
  if (!(elliptic_tol > 0.0)) throw DomainError("elliptic tolerance must be positive");
  if (elliptic_max_iter < 1) throw DomainError("elliptic max_iter must be >= 1");
}

std::string method_name(EllipticMethod m) { return m == EllipticMethod::Krylov ? "krylov" : "perturbative"; }

EllipticMethod parse_method(const std::string& name) {
  if (name == "krylov") return EllipticMethod::Krylov;
  if (name == "perturbative") return EllipticMethod::Perturbative;
  throw DomainError("unknown elliptic method '" + name + "'");
}

VectorField convection(const VectorField& u, const VectorField& w) {
  require_same_grid(u.grid(), w.grid(), "convection");
  VectorField out(u.grid());
  for (int i = 0; i < w.dim(); ++i) {
    for (int k = 0; k < u.dim(); ++k) out[i] += product(u[k], partial(w[i], k));
  }
  return out;
}

RealField density_values(const Coefficient& a) {
  RealField rho = a.values();
  for (auto& x : rho.values()) x = 1.0 / x;
  return rho;
}

EllipticSolution solve_pressure(const Coefficient& a, const VectorField& u, const VectorField* f,
                                const SolverOptions& opts, const SpectralField* guess) {
  VectorField F = convection(u, leray_project(u));
  if (f) F -= *f;
  EllipticSolution sol = opts.method == EllipticMethod::Krylov
                             ? solve_variable_krylov_rhs(a, divergence(F), opts.elliptic_tol, opts.elliptic_max_iter, guess)
                             : solve_variable_perturbative(a, F, opts.elliptic_tol, opts.elliptic_max_iter);
  if (!sol.converged) {
    throw ConvergenceError("pressure solve did not converge: relative residual " + std::to_string(sol.residual_l2) +
                           " after " + std::to_string(sol.iterations) + " iterations");
  }
  return sol;
}

FlowState initial_state(const InitialData& data, const SolverOptions& opts) {
  data.validate();
  RealField a = to_physical(data.rho0);
  for (auto& x : a.values()) x = 1.0 / x;
  Coefficient coef(a);
  std::optional<VectorField> f;
  if (data.forcing) f = data.forcing(0.0);
  EllipticSolution p = solve_pressure(coef, data.u0, f ? &*f : nullptr, opts);
  return FlowState{coef, data.u0, std::move(p.pi), std::move(p.grad_pi), 0.0};
}

FlowState step_direct(const FlowState& state, const ForcingProvider& forcing, double dt, const SolverOptions& opts) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  return rk4_step(state, forcing, dt, opts).state;
}

DiagnosticsRecord diagnose(const FlowState& s, const BesovIndex& idx, const DyadicCutoffs& cut) {
  DiagnosticsRecord r;
  r.t = s.t;
  const RealField rho = density_values(s.a);
  const auto pu = to_physical(s.u);
  double e = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double m = 0.0;
    for (const auto& c : pu) m += c[i] * c[i];
    e += rho[i] * m;
  }
  r.energy = e * s.a.grid().cell_volume();
  r.grad_u_inf = lp_norm(velocity_gradient(s.u), kInf);
  const BesovIndex lower{idx.s - 1, idx.p, idx.r};
  r.grad_pi_besov = besov_norm(s.grad_pi, lower, cut).total;
  if (s.u.grid().dim() == 2) {
    r.vort_inf = sup_norm_refined(curl2d(s.u));
    r.vort_source_l2 = l2_norm(vorticity_source_2d(s));
  } else {
    r.vort_inf = lp_norm(curl(s.u), kInf);
  }
  r.u_besov = besov_norm(s.u, idx, cut).total;
  r.da_besov = besov_norm(gradient(s.a.field()), lower, cut).total;
  r.rho_min = min_value(rho);
  r.rho_max = max_value(rho);
  return r;
}

RunResult run(const InitialData& data, const SolverOptions& opts) {
  opts.validate();
  const DyadicCutoffs cut(data.rho0.grid());
  RunResult res{initial_state(data, opts), {}, {}, std::nullopt, 0.0, 0.0};
  FlowState& s = res.final_state;
  double work = 0.0, bkm = 0.0;
  double integrand = bkm_integrand(s, data.idx, cut);

  auto record = [&] {
    DiagnosticsRecord r = diagnose(s, data.idx, cut);
    r.forcing_work = work;
    r.bkm_integral = bkm;
    res.records.push_back(r);
    if (opts.keep_states) res.states.push_back(s);
  };
  record();

  const int steps = static_cast<int>(std::ceil(opts.t_end / opts.dt - 1e-9));
  for (int n = 0; n < steps; ++n) {
    const double dt = (n + 1 == steps) ? opts.t_end - s.t : opts.dt;
    try {
      StepResult st = rk4_step(s, data.forcing, dt, opts);
      work += st.work_increment;
      s = std::move(st.state);
    } catch (const IntegrationAbort& e) {
      res.abort_reason = e.what();
      res.abort_time = e.time();
      break;
    } catch (const ConvergenceError& e) {
      res.abort_reason = e.what();
      res.abort_time = s.t;
      break;
    }
    res.max_divergence = std::max(res.max_divergence, l2_norm(divergence(s.u)));
    const double next = bkm_integrand(s, data.idx, cut);
    bkm += 0.5 * dt * (integrand + next);
    integrand = next;
    if ((n + 1) % opts.record_every == 0 || n + 1 == steps) record();
  }
  if (res.abort_reason && (res.records.empty() || res.records.back().t != s.t)) record();
  return res;
}

SpectralField vorticity_source_2d(const FlowState& s) {
  if (s.u.grid().dim() != 2) throw DomainError("vorticity source is defined in 2D only");
  const SpectralField& a = s.a.field();
  return product(partial(a, 0), s.grad_pi[1]) - product(partial(a, 1), s.grad_pi[0]);
}

BkmReport bkm_monitor(const std::vector<DiagnosticsRecord>& records, const BesovIndex& idx, int dim) {
  BkmReport rep;
  const double critical = 1.0 + (std::isinf(idx.p) ? 0.0 : dim / idx.p);
  rep.curl_variant_valid = idx.s > critical;
  double curl = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0) curl += 0.5 * (records[i].t - records[i - 1].t) * (records[i].vort_inf + records[i - 1].vort_inf);
    rep.times.push_back(records[i].t);
    rep.bkm_integral.push_back(records[i].bkm_integral);
    rep.curl_integral.push_back(curl);
  }
  // Least-squares slope of log I against log t over the later half.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = records.size() / 2; i < records.size(); ++i) {
    if (records[i].t > 0 && records[i].bkm_integral > 0) {
      pts.emplace_back(std::log(records[i].t), std::log(records[i].bkm_integral));
    }
  }
  if (pts.size() >= 2) {
    double mx = 0, my = 0;
    for (auto [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    if (sxx > 0) rep.log_slope = sxy / sxx;
  }
  rep.superlinear = rep.log_slope > kSuperlinearSlope;
  return rep;
}

double lifespan_estimate(const InitialData& data, const LifespanParams& params) {
  data.validate();
  const TorusGrid& g = data.rho0.grid();
  const DyadicCutoffs cut(g);
  const BesovIndex& idx = data.idx;
  const BesovIndex lower{idx.s - 1, idx.p, idx.r};
  const RealField rho = to_physical(data.rho0);
  const double rho_upper = max_value(rho);
  RealField a = rho;
  for (auto& x : a.values()) x = 1.0 / x;
  const double a_upper = max_value(a);
  const double A0 = a_upper + besov_norm(gradient(to_spectral(a)), lower, cut).total;
  const double u_bs = besov_norm(data.u0, idx, cut).total;
  const double u_l2 = l2_norm(data.u0);
  const double w = rho_upper * A0;

  if (!data.forcing) {
    const double denom = w * (u_bs + std::pow(w, params.gamma + 1) * u_l2);
    return denom > 0 ? params.c / denom : kInf;
  }

  // Time integrals of the forcing norms by composite Simpson.
  auto lhs = [&](double t) {
    constexpr int kPanels = 16;
    double f_bs = 0, f_div = 0, f_l2 = 0;
    for (int i = 0; i <= kPanels; ++i) {
      const double wt = (i == 0 || i == kPanels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const VectorField f = data.forcing(t * i / kPanels);
      f_bs += wt * besov_norm(f, idx, cut).total;
      f_div += wt * besov_norm(divergence(f), lower, cut).total;
      f_l2 += wt * l2_norm(f);
    }
    const double h = t / kPanels / 3;
    return w * t * (u_bs + h * f_bs + w * h * f_div + std::pow(w, params.gamma + 1) * (u_l2 + h * f_l2));
  };
  double hi = 1.0;
  while (lhs(hi) <= params.c) {
    hi *= 2;
    if (hi > 1e6) return kInf;
  }
  double lo = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (lhs(mid) <= params.c ? lo : hi) = mid;
  }
  return lo;
}

InitialData smooth_data(const InitialData& data, int n) {
  if (n < 0) throw DomainError("smoothing index must be >= 0");
  data.validate();
  const DyadicCutoffs cut(data.rho0.grid());
  if (n > cut.q_max()) return data;
  InitialData out = data;
  const double mean = data.rho0.mean();
  out.rho0 = s_q(data.rho0 - SpectralField::constant(data.rho0.grid(), mean), n, cut) +
             SpectralField::constant(data.rho0.grid(), mean);
  for (int j = 0; j < out.u0.dim(); ++j) out.u0[j] = s_q(data.u0[j], n, cut);
  out.u0 = leray_project(out.u0);
  const RealField r0 = to_physical(data.rho0);
  const RealField rn = to_physical(out.rho0);
  const double lo = min_value(r0), hi = max_value(r0);
  if (!(min_value(rn) >= 0.5 * lo && max_value(rn) <= 2.0 * hi)) {
    throw DomainError("smoothed density leaves [rho_min/2, 2 rho_max]");
  }
  return out;
}

InitialData benchmark_datum(int points, std::uint64_t seed, double amplitude) {
  const TorusGrid g(2, points);
  const DyadicCutoffs cut(g);
  InitialData d{to_spectral(RealField::sample(g, [amplitude](const Point& x) { return 1.0 + amplitude * std::cos(x[0]); })),
                leray_project(random_vector_field(g, {4, 8, 0}, seed)),
                {},
                {3.0, 2.0, 1.0}};
  d.u0 *= 1.0 / besov_norm(d.u0, {1.0, 2.0, 2.0}, cut).total;
  return d;
}

}  // namespace inhomo
