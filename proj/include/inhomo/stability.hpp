#pragma once

// Comparison of two flow runs against a Gronwall bound
//   D(t) <= e^{C A(t)} (D(0) + int_0^t e^{-C A} ||rho2^{1/p} df||_p),
// D = ||rho2 - rho1||_p + ||rho2^{1/p} (u2 - u1)||_p and
// A' = ||grad rho1||_inf / rho2_*^{1/2} + ||grad Pi1||_inf / (rho1_* rho2_*^{1/2}) + ||grad u1||_inf,
// with the smallest C fitted from the data.

#include <array>
#include <vector>

#include "inhomo/euler.hpp"

namespace inhomo {

struct GronwallReport {
  double p = 2.0;
  std::vector<double> times;
  std::vector<double> distance;        // D(t)
  std::vector<double> rho_distance;    // ||rho2 - rho1||_p
  std::vector<double> u_distance;      // ||rho2^{1/p} (u2 - u1)||_p
  std::vector<double> a_integral;      // A(t)
  std::vector<double> forcing_distance;  // ||rho2^{1/p} (f2 - f1)||_p
  double fitted_constant = 0.0;        // inf when no C <= 1e8 works
  std::vector<double> bound;           // right side with the fitted constant
  double terminal_distance = 0.0;
};

// Runs both data sets with the same options (keep_states forced on),
// concurrently when the worker limit allows.
std::array<RunResult, 2> run_pair(const InitialData& first, const InitialData& second, SolverOptions opts);

// Both runs need keep_states and identical sample times. Throws DomainError
// on a sampling mismatch.
GronwallReport stability_compare(const RunResult& run1, const RunResult& run2, double p,
                                 const ForcingProvider& forcing1 = {}, const ForcingProvider& forcing2 = {});

}  // namespace inhomo
