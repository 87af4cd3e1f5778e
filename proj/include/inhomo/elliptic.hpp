#pragma once

// Solvers for -div(a grad Pi) = div F on the torus with a bounded below, and
// empirical checks of the associated L2 and Besov estimates.
//
// The variable-coefficient operator multiplies by a pointwise on the grid
// (no dealiasing), which keeps it symmetric positive definite in the grid
// inner product, so a_* ||grad Pi|| <= ||F|| holds for the discrete problem too.

#include <optional>
#include <string>
#include <vector>

#include "inhomo/littlewood_paley.hpp"

namespace inhomo {

class Coefficient {
 public:
  // Throws DomainError unless min a > 0 on the grid.
  explicit Coefficient(const SpectralField& a);
  explicit Coefficient(const RealField& values);

  const SpectralField& field() const { return a_; }
  const RealField& values() const { return values_; }
  const TorusGrid& grid() const { return a_.grid(); }
  double a_star() const { return a_star_; }
  double a_upper() const { return a_upper_; }
  double mean_value() const { return a_.mean(); }
  // a^* / a_*
  double contrast() const { return a_upper_ / a_star_; }
  // ||a - mean||_inf / mean, the perturbative convergence parameter.
  double relative_deviation() const;

 private:
  void init();

  SpectralField a_;
  RealField values_;
  double a_star_ = 0.0;
  double a_upper_ = 0.0;
};

struct EllipticSolution {
  SpectralField pi;  // mean zero
  VectorField grad_pi;
  // Relative strong-form residual ||div(a grad Pi) + div F|| / ||div F||.
  double residual_l2 = 0.0;
  int iterations = 0;
  bool converged = true;
  // Successive-difference ratios of the perturbative iteration.
  std::vector<double> rates;
};

// -Delta Pi = divF, grad Pi = grad (-Delta)^{-1} div F.
// Throws DomainError when divF has a mean above roundoff.
EllipticSolution solve_constant(const SpectralField& div_f);

// a f with the pointwise grid product, no dealiasing. The elliptic operator is
// built from it, so flux terms formed with it stay consistent with the solves.
SpectralField coefficient_product(const Coefficient& a, const SpectralField& f);

// y = -div(a grad x), with the pointwise grid product.
SpectralField apply_elliptic_operator(const Coefficient& a, const SpectralField& x);

// Preconditioned CG on -div(a grad Pi) = rhs (rhs mean-free), starting from
// guess when given. Stops when ||residual|| <= tol ||rhs||; after max_iter the
// best iterate is returned with converged = false.
EllipticSolution solve_variable_krylov_rhs(const Coefficient& a, const SpectralField& rhs, double tol, int max_iter,
                                           const SpectralField* guess = nullptr);
EllipticSolution solve_variable_krylov(const Coefficient& a, const VectorField& F, double tol, int max_iter);

// grad Pi^{k+1} = abar^{-1} grad (-Delta)^{-1} div(F + (a - abar) grad Pi^k), stopping
// when ||grad Pi^{k+1} - grad Pi^k|| <= tol ||grad Pi^{k+1}||. Throws
// ConvergenceError when the differences grow three steps in a row.
EllipticSolution solve_variable_perturbative(const Coefficient& a, const VectorField& F, double tol, int max_iter);

enum class EllipticVariant { Interior, Energy, Last };

std::string variant_name(EllipticVariant v);
EllipticVariant parse_variant(const std::string& name);

struct EllipticEstimateReport {
  EllipticVariant variant = EllipticVariant::Interior;
  double sigma = 0.0;
  double lhs = 0.0;  // a_* ||grad Pi||_{B^sigma}
  double rhs = 0.0;
  double ratio = 0.0;
  // Pieces of the right-hand side, kept so the exponent can be refitted.
  double div_term = 0.0;          // ||div F||_{B^{sigma-1}}
  double coefficient_base = 0.0;  // 1 + ||Da||_{B^{s-1}} / a_*
  double tail_term = 0.0;         // the factor multiplying coefficient_base^gamma
  double contrast = 0.0;
  std::optional<double> fitted_gamma;
};

// Solves the equation for (a, F) and evaluates both sides of the chosen Besov
// estimate. Energy variant uses exponent gamma. Throws DomainError when the
// indices fall outside the estimate's hypotheses.
EllipticEstimateReport verify_besov_elliptic(const Coefficient& a, const VectorField& F, const BesovIndex& idx,
                                             double sigma, EllipticVariant variant, const DyadicCutoffs& cut,
                                             double gamma = 1.0);

struct GammaFit {
  double gamma = 0.0;
  double constant = 0.0;  // max lhs / rhs(gamma) over the sweep
};

// Least-squares fit of lhs ~ C rhs(gamma) in log space over energy-variant
// reports (grid search on gamma in [0, gamma_max]). Updates each report's rhs,
// ratio and fitted_gamma.
GammaFit fit_elliptic_gamma(std::vector<EllipticEstimateReport>& reports, double gamma_max = 8.0);

}  // namespace inhomo
