#pragma once

// Density-dependent incompressible Euler equations on the torus, written for
// the inverse density a = 1/rho:
//   da/dt + u.grad a = 0
//   du/dt + u.grad u + a grad Pi = f
//   -div(a grad Pi) = div(u.grad Pu - f)
// RK4 time stepping with an elliptic pressure solve at every stage, flow
// diagnostics, the lifespan heuristic and low-frequency smoothing of data.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "inhomo/elliptic.hpp"

namespace inhomo {

using ForcingProvider = std::function<VectorField(double)>;

struct InitialData {
  SpectralField rho0;
  VectorField u0;
  ForcingProvider forcing;  // empty means f = 0
  BesovIndex idx{3.0, 2.0, 1.0};

  // Throws DomainError unless min rho0 > 0 and ||div u0|| < 1e-10, and
  // ShapeError when the fields live on different grids.
  void validate() const;
};

struct FlowState {
  Coefficient a;
  VectorField u;
  SpectralField pi;
  VectorField grad_pi;
  double t = 0.0;
};

enum class EllipticMethod { Krylov, Perturbative };

std::string method_name(EllipticMethod m);
EllipticMethod parse_method(const std::string& name);

struct SolverOptions {
  double dt = 1e-2;
  double t_end = 1.0;
  double cfl = 0.5;
  int record_every = 1;
  EllipticMethod method = EllipticMethod::Krylov;
  double elliptic_tol = 1e-12;
  int elliptic_max_iter = 500;
  // Reuse the pressure of the step start for all RK4 stages.
  bool lagged_pressure = false;
  // Keep the full state at every recorded sample.
  bool keep_states = false;

  void validate() const;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;        // ||sqrt(rho) u||_2^2
  double forcing_work = 0.0;  // 2 int_0^t int rho f.u
  double grad_u_inf = 0.0;
  double grad_pi_besov = 0.0;  // ||grad Pi||_{B^{s-1}_{p,r}}
  double bkm_integral = 0.0;   // int_0^t (||grad u||_inf + ||grad Pi||_{B^{s-1}_{p,r}})
  double vort_inf = 0.0;
  double vort_source_l2 = 0.0;  // 2D only, 0 in 3D
  double u_besov = 0.0;
  double da_besov = 0.0;  // ||grad a||_{B^{s-1}_{p,r}}
  double rho_min = 0.0;
  double rho_max = 0.0;
};

// Fixed CSV header of the diagnostics table.
inline constexpr const char* kDiagnosticsHeader =
    "t,energy,forcing_work,grad_u_inf,grad_pi_besov,bkm_integral,vort_inf,vort_source_l2,u_besov,da_besov,rho_min,rho_max";

// Builds the state at t = 0 (a = 1/rho0 pointwise) and solves for its pressure.
FlowState initial_state(const InitialData& data, const SolverOptions& opts);

// Pressure of (a, u) under forcing f: -div(a grad Pi) = div(u.grad Pu - f).
// Throws ConvergenceError when the elliptic solver fails.
EllipticSolution solve_pressure(const Coefficient& a, const VectorField& u, const VectorField* f,
                                const SolverOptions& opts, const SpectralField* guess = nullptr);

// One RK4 step followed by Leray re-projection of u and a pressure solve for
// the new state. Throws IntegrationAbort on a CFL violation or lost
// positivity, ConvergenceError when a pressure solve fails.
FlowState step_direct(const FlowState& state, const ForcingProvider& forcing, double dt, const SolverOptions& opts);

struct RunResult {
  FlowState final_state;
  std::vector<DiagnosticsRecord> records;
  std::vector<FlowState> states;  // filled when keep_states is set
  std::optional<std::string> abort_reason;
  double abort_time = 0.0;
  double max_divergence = 0.0;  // largest ||div u||_2 after any accepted step
};

// Integrates to opts.t_end, recording every record_every steps plus the
// initial and final samples. Solver failures end the run early with the
// partial trajectory and abort_reason set.
RunResult run(const InitialData& data, const SolverOptions& opts);

// Diagnostics of a single state; forcing_work and bkm_integral are left at 0.
DiagnosticsRecord diagnose(const FlowState& state, const BesovIndex& idx, const DyadicCutoffs& cut);

// d1 a d2 Pi - d2 a d1 Pi, the source in the 2D vorticity equation.
// Throws DomainError outside 2D.
SpectralField vorticity_source_2d(const FlowState& state);

struct BkmReport {
  std::vector<double> times;
  std::vector<double> bkm_integral;
  std::vector<double> curl_integral;  // int ||curl u||_inf
  bool curl_variant_valid = false;   // s > 1 + N/p
  double log_slope = 0.0;            // d log I / d log t over the later half
  bool superlinear = false;          // log_slope > kSuperlinearSlope
};

inline constexpr double kSuperlinearSlope = 1.2;

BkmReport bkm_monitor(const std::vector<DiagnosticsRecord>& records, const BesovIndex& idx, int dim);

struct LifespanParams {
  double c = 0.1;
  double gamma = 1.0;
};

// Largest t with rho^* t A0 (U0(t) + rho^* A0 ||div f||_{L1_t B^{s-1}}
//   + (rho^* A0)^{gamma+1} (||u0||_2 + ||f||_{L1_t L2})) <= c,
// A0 = a^* + ||grad a0||_{B^{s-1}}, U0(t) = ||u0||_{B^s} + ||f||_{L1_t B^s}.
// Infinite when the left side stays 0.
double lifespan_estimate(const InitialData& data, const LifespanParams& params = {});

// S_n applied to rho0 - mean and to u0 (then re-projected). n above q_max is
// the identity. Throws DomainError when the smoothed density leaves
// [rho_min / 2, 2 rho_max].
InitialData smooth_data(const InitialData& data, int n);

// 2D datum rho0 = 1 + amplitude cos x1, u0 = P(random band [4, 8] field) scaled
// to unit B^1_{2,2} norm, f = 0.
InitialData benchmark_datum(int points, std::uint64_t seed = 42, double amplitude = 0.2);

// u.grad w with dealiased products.
VectorField convection(const VectorField& u, const VectorField& w);

// rho = 1/a on the grid.
RealField density_values(const Coefficient& a);

}  // namespace inhomo
