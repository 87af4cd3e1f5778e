#pragma once

// Successive approximations for the density-dependent Euler system: given
// (a^n, u^n, grad Pi^n) on [0, T], the next iterate transports a^{n+1} by u^n,
// solves du^{n+1}/dt + u^n.grad u^{n+1} = f - a^{n+1} grad Pi^n, and updates the
// pressure from -div(a^{n+1} grad Pi^{n+1}) = div(u^{n+1}.grad Pu^{n+1} - f).

#include <vector>

#include "inhomo/euler.hpp"

namespace inhomo {

struct PicardOptions {
  double t_horizon = 0.0;
  int n_iters = 8;
  int steps = 8;  // RK4 steps over the horizon; iterates are stored at half steps
  // Differences below floor_factor (||a0||_2 + ||u0||_2) count as converged.
  double floor_factor = 1e-13;

  void validate() const;
};

struct PicardTerminal {
  SpectralField a;
  VectorField u;
  VectorField grad_pi;
};

struct PicardResult {
  std::vector<double> times;  // half-step samples of [0, t_horizon]
  // Iterate n at t_horizon, n = 0..n_iters.
  std::vector<PicardTerminal> terminal;
  // delta_n = sup_t (||a^{n+1} - a^n||_2 + ||u^{n+1} - u^n||_2), n = 0..n_iters-1.
  std::vector<double> deltas;
  std::vector<double> ratios;  // deltas[n+1] / deltas[n]; nan when deltas[n] = 0
  double floor = 0.0;
};

// elliptic and cfl settings come from solver; its dt and t_end are ignored.
PicardResult picard_iterate(const InitialData& data, const PicardOptions& opts, const SolverOptions& solver);

// True when delta_{n+1} <= factor delta_n or delta_{n+1} <= floor for every n in [n_from, n_to].
bool picard_cauchy(const PicardResult& res, int n_from, int n_to, double factor = 0.5);

}  // namespace inhomo
