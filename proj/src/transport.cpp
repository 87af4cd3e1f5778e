#include "inhomo/transport.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "inhomo/error.hpp"

namespace inhomo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_field(const SpectralField& f) {
  for (auto c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

}  // namespace

SpectralField advection_term(const VectorField& v, const SpectralField& f) {
  require_same_grid(v.grid(), f.grid(), "advection_term");
  SpectralField out(f.grid());
  for (int j = 0; j < v.dim(); ++j) out -= product(v[j], partial(f, j));
  return out;
}

VectorField velocity_gradient(const VectorField& v) {
  std::vector<SpectralField> comps;
  for (int i = 0; i < v.dim(); ++i) {
    for (int j = 0; j < v.grid().dim(); ++j) comps.push_back(partial(v[i], j));
  }
  return VectorField(std::move(comps));
}

TransportTrajectory advect(const TransportProblem& problem, double dt, int record_every, double cfl) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (record_every < 1) throw DomainError("record_every must be >= 1");
  if (!problem.velocity) throw DomainError("transport problem needs a velocity provider");
  const TorusGrid& grid = problem.initial.grid();
  const double h = grid.spacing();

  auto rhs = [&](double t, const SpectralField& f) {
    const VectorField v = problem.velocity(t);
    SpectralField r = advection_term(v, f);
    if (problem.source) r += problem.source(t);
    return r;
  };

  TransportTrajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(problem.initial);
  SpectralField f = problem.initial;
  double t = 0.0;
  const int steps = static_cast<int>(std::ceil(problem.t_end / dt - 1e-9));
  for (int n = 0; n < steps; ++n) {
    const double step = std::min(dt, problem.t_end - t);
    const double vmax = lp_norm(problem.velocity(t), kInf);
    if (step * vmax > cfl * h * (1 + 1e-12)) {
      throw IntegrationAbort("CFL violation: dt = " + std::to_string(step) + " exceeds " +
                                 std::to_string(cfl * h / vmax),
                             t);
    }
    const SpectralField k1 = rhs(t, f);
    SpectralField y = f;
    y.axpy(0.5 * step, k1);
    const SpectralField k2 = rhs(t + 0.5 * step, y);
    y = f;
    y.axpy(0.5 * step, k2);
    const SpectralField k3 = rhs(t + 0.5 * step, y);
    y = f;
    y.axpy(step, k3);
    const SpectralField k4 = rhs(t + step, y);
    f.axpy(step / 6.0, k1);
    f.axpy(step / 3.0, k2);
    f.axpy(step / 3.0, k3);
    f.axpy(step / 6.0, k4);
    t = (n + 1 == steps) ? problem.t_end : t + step;
    if (!finite_field(f)) throw IntegrationAbort("transport produced non-finite values", t);
    if ((n + 1) % record_every == 0 || n + 1 == steps) {
      traj.times.push_back(t);
      traj.states.push_back(f);
    }
  }
  return traj;
}

TransportEstimateReport transport_estimate_monitor(const TransportTrajectory& trajectory, const VelocityProvider& velocity,
                                                   const SourceProvider& source, const BesovIndex& idx,
                                                   const DyadicCutoffs& cut, bool self_transport) {
  idx.validate();
  if (!(idx.s > 0.0)) throw DomainError("transport estimate needs sigma > 0");
  if (trajectory.times.empty()) throw DomainError("empty trajectory");
  const int dim = cut.grid().dim();
  const double critical = 1.0 + (std::isinf(idx.p) ? 0.0 : dim / idx.p);
  const bool high = idx.s > critical || (idx.s == critical && idx.r == 1.0);

  TransportEstimateReport rep;
  rep.self_transport = self_transport;
  rep.times = trajectory.times;
  const std::size_t m = trajectory.times.size();
  std::vector<double> vprime(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = trajectory.times[i];
    rep.norm.push_back(besov_norm(trajectory.states[i], idx, cut).total);
    rep.source_norm.push_back(source ? besov_norm(source(t), idx, cut).total : 0.0);
    const VectorField grad_v = velocity_gradient(velocity(t));
    if (self_transport) {
      vprime[i] = lp_norm(grad_v, kInf);
    } else if (high) {
      vprime[i] = besov_norm(grad_v, {idx.s - 1.0, idx.p, idx.r}, cut).total;
    } else {
      vprime[i] = besov_norm(grad_v, {dim / idx.p, idx.p, kInf}, cut).total + lp_norm(grad_v, kInf);
    }
  }
  rep.v_integral.assign(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    rep.v_integral[i] =
        rep.v_integral[i - 1] + 0.5 * (trajectory.times[i] - trajectory.times[i - 1]) * (vprime[i] + vprime[i - 1]);
  }

  // The rearranged inequality ||f(t)|| <= e^{CV(t)}||f0|| + int e^{C(V(t)-V(s))}||g(s)|| ds
  // has a right side nondecreasing in C, so the minimal C is found by bisection.
  auto holds = [&](double C, std::vector<double>* scaled, std::vector<double>* rhs) {
    bool ok = true;
    double integral = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) {
        const double dt = trajectory.times[i] - trajectory.times[i - 1];
        integral += 0.5 * dt *
                    (std::exp(-C * rep.v_integral[i]) * rep.source_norm[i] +
                     std::exp(-C * rep.v_integral[i - 1]) * rep.source_norm[i - 1]);
      }
      const double lhs = std::exp(-C * rep.v_integral[i]) * rep.norm[i];
      const double r = rep.norm[0] + integral;
      if (scaled) scaled->push_back(lhs);
      if (rhs) rhs->push_back(r);
      if (lhs > r * (1 + 1e-9) + 1e-300) ok = false;
    }
    return ok;
  };

  double C = 0.0;
  if (!holds(0.0, nullptr, nullptr)) {
    double hi = 1.0;
    while (!holds(hi, nullptr, nullptr) && hi < 1e8) hi *= 2.0;
    if (!holds(hi, nullptr, nullptr)) {
      C = kInf;
    } else {
      double lo = 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid, nullptr, nullptr) ? hi : lo) = mid;
      }
      C = hi;
    }
  }
  rep.fitted_constant = C;
  holds(std::isinf(C) ? 0.0 : C, &rep.scaled_lhs, &rep.rhs);
  return rep;
}

}  // namespace inhomo
