#pragma once

// Pseudo-spectral RK4 integration of df/dt + v.grad f = g and a monitor for
// the Besov a priori estimate of the solution.

#include <functional>
#include <vector>

#include "inhomo/littlewood_paley.hpp"

namespace inhomo {

using VelocityProvider = std::function<VectorField(double)>;
using SourceProvider = std::function<SpectralField(double)>;

struct TransportProblem {
  SpectralField initial;
  VelocityProvider velocity;
  SourceProvider source;  // empty means g = 0
  double t_end = 1.0;
  bool divergence_free = false;
};

struct TransportTrajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
};

inline constexpr double kDefaultCfl = 0.5;

// Advection term -v.grad f with dealiased products.
SpectralField advection_term(const VectorField& v, const SpectralField& f);

// Records the initial state and every record_every-th step (plus the final
// state). Throws IntegrationAbort on a CFL violation (dt > cfl h / max|v|)
// or non-finite values.
TransportTrajectory advect(const TransportProblem& problem, double dt, int record_every = 1, double cfl = kDefaultCfl);

struct TransportEstimateReport {
  std::vector<double> times;
  std::vector<double> norm;           // ||f(t)||_{B^sigma}
  std::vector<double> v_integral;     // V(t)
  std::vector<double> source_norm;    // ||g(t)||_{B^sigma}
  std::vector<double> scaled_lhs;     // exp(-C V(t)) ||f(t)||
  std::vector<double> rhs;            // ||f0|| + int exp(-C V) ||g||
  double fitted_constant = 0.0;       // smallest C making the estimate hold; inf if none does
  bool self_transport = false;
};

// V'(t) follows the case split on sigma against 1 + N/p; with self_transport
// (f is the transporting field) V'(t) = ||grad v||_inf.
TransportEstimateReport transport_estimate_monitor(const TransportTrajectory& trajectory, const VelocityProvider& velocity,
                                                   const SourceProvider& source, const BesovIndex& idx,
                                                   const DyadicCutoffs& cut, bool self_transport = false);

// Collects grad v as a field with dim^2 components (row-major), so Besov and
// L^p norms use the Frobenius magnitude.
VectorField velocity_gradient(const VectorField& v);

}  // namespace inhomo
