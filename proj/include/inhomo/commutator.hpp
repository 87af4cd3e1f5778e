#pragma once

// Empirical checks of the commutator estimates for d_k [a, Delta_q] w and of
// the weighted Bernstein inequality for annulus-supported functions.

#include <cstdint>
#include <vector>

#include "inhomo/littlewood_paley.hpp"

namespace inhomo {

// d_k (a Delta_q w - Delta_q (a w)) with dealiased products. The mean of a is
// removed first, so a constant a gives exactly zero.
SpectralField commutator_field(const SpectralField& a, const SpectralField& w, int q, int k, const DyadicCutoffs& cut);

struct CommutatorBlock {
  int q = 0;
  double lhs = 0.0;    // max_k ||d_k [a, Delta_q] w||_{L^p}
  double bound = 0.0;  // 2^{-q varsigma} times the norm products of the lemma
};

struct CommutatorReport {
  std::vector<CommutatorBlock> per_q;  // q = -1..q_max
  std::vector<double> c_q_fitted;      // lhs / bound; 0 when lhs = 0
  double ell_r_norm_of_cq = 0.0;
};

// Bound ||grad a||_{B^{s-1}_{p,r}} ||w||_{B^varsigma_{p,r}}. Requires
// condition (C) for idx and varsigma in (-1, s-1].
CommutatorReport verify_lemma_com(const SpectralField& a, const SpectralField& w, const BesovIndex& idx,
                                  double varsigma, const DyadicCutoffs& cut);

// Bound ||grad a||_inf ||w||_{B^varsigma_{p,r}} + ||w||_inf ||grad a||_{B^varsigma_{p,r}}.
// Requires varsigma > 0.
CommutatorReport verify_lemma_combis(const SpectralField& a, const SpectralField& w, double varsigma, double p,
                                     double r, const DyadicCutoffs& cut);

struct BernsteinIdentity {
  double middle = 0.0;  // (p-1) int a |grad u|^2 |u|^{p-2}
  double right = 0.0;   // -int div(a grad u) |u|^{p-2} u
  double residual = 0.0;  // |middle - right| / |right|
};

inline constexpr int kBernsteinOversampling = 4;

// For even integer p the integrands are polynomials and a grid refined by zero
// padding integrates them exactly. Otherwise (2D only) the quadrature is split
// along the zero set of u, see bernstein_quadrature.hpp. For p < 2 the powers are
// regularized with T_eps(x) = sqrt(x^2 + eps^2), eps = 1e-8 ||u||_inf.
BernsteinIdentity weighted_bernstein_identity(const SpectralField& u, const SpectralField& a, double p,
                                              int oversampling = kBernsteinOversampling);

struct WeightedBernsteinReport {
  double lower_ratio = 0.0;  // middle / (a_* ((p-1)/p^2) R1^2 int |u|^p)
  double identity_residual = 0.0;
  BernsteinIdentity identity;
};

// Throws DomainError when the spectrum of u leaves R1 <= |k| <= R2, when
// a_* <= 0 or p <= 1.
WeightedBernsteinReport verify_weighted_bernstein(const SpectralField& u, const SpectralField& a, double p, double R1,
                                                  double R2, int oversampling = kBernsteinOversampling);

// Trigonometric interpolation of f onto a finer (or equal) grid of the same dimension.
SpectralField zero_pad(const SpectralField& f, const TorusGrid& target);

// Ensemble suites.

enum class CommutatorLemma { Com, Combis };

struct CommutatorCase {
  CommutatorLemma lemma = CommutatorLemma::Com;
  BesovIndex idx{3, 2, 1};
  double varsigma = 1.0;
};

struct CommutatorSuiteResult {
  CommutatorCase c;
  std::vector<int> grids;
  // norms[g][i]: l^r norm of fitted c_q for sample i on grids[g].
  std::vector<std::vector<double>> norms;
  double max_refinement_factor = 0.0;  // max_i max(n1/n0, n0/n1) between consecutive grids
  double ensemble_spread = 0.0;        // max_i / min_i on the finest grid
  bool finite = true;
  bool pass = false;  // finite, refinement factor < 2 and spread < 2
};

// Samples i = 0..samples-1 draw a = 1 + random field and w = random field with
// |k|^-decay spectra up to the dealiasing cutoff, decay chosen one derivative
// above the critical regularity of each factor.
CommutatorSuiteResult run_commutator_suite(const CommutatorCase& c, int samples, const std::vector<int>& grids,
                                           std::uint64_t seed);

struct BernsteinSuiteResult {
  std::vector<double> ps;
  std::vector<double> r1s;
  double r2_over_r1 = 2.0;
  // residual_max[i]: largest identity residual for ps[i] over all samples and radii.
  std::vector<double> residual_max;
  // min_ratio[i][j]: smallest lower_ratio for ps[i] at r1s[j].
  std::vector<std::vector<double>> min_ratio;
  std::vector<double> stability_factor;  // per p, max/min of min_ratio over radii
  bool pass = false;
};

inline constexpr double kBernsteinResidualTol = 1e-6;        // p >= 2
inline constexpr double kBernsteinResidualTolSmallP = 1e-3;  // 1 < p < 2
inline constexpr double kBernsteinStabilityFactor = 1.5;

// Annulus fields on a 2D grid with coefficient a = 1.5 + 0.4 cos x1.
BernsteinSuiteResult run_weighted_bernstein_suite(const std::vector<double>& ps, const std::vector<double>& r1s,
                                                  double r2_over_r1, int samples, int points, std::uint64_t seed);

}  // namespace inhomo
