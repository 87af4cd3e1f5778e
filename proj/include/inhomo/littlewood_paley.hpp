#pragma once

// Dyadic frequency decomposition on the torus: the cutoff profiles chi and
// phi, block operators Delta_q and S_q, Besov norms, and empirical Bernstein
// and embedding ratio checks.

#include <optional>
#include <utility>
#include <vector>

#include "inhomo/spectral.hpp"

namespace inhomo {

// Inner plateau of chi reaches 3/4 + kPlateauWidening.
inline constexpr double kPlateauWidening = 0.05;
inline constexpr double kChiPlateau = 0.75 + kPlateauWidening;
inline constexpr double kChiSupport = 4.0 / 3.0;

// Smooth radial cutoff: 1 on [0, 0.8], 0 on [4/3, inf), nonincreasing.
double chi_profile(double r);
// phi(r) = chi(r/2) - chi(r), supported in [3/4, 8/3].
double phi_profile(double r);

struct BesovIndex {
  double s = 0.0;
  double p = 2.0;  // +inf allowed
  double r = 2.0;  // +inf allowed

  // s > 1 + N/p, or s = 1 + N/p with r = 1: B^s_{p,r} embeds in Lipschitz functions.
  bool condition_c(int dim) const;
  void validate() const;
};

struct BesovNormReport {
  std::vector<std::pair<int, double>> blocks;  // (q, 2^{qs} ||Delta_q f||_{L^p})
  double total = 0.0;
};

class DyadicCutoffs {
 public:
  explicit DyadicCutoffs(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  int q_max() const { return q_max_; }
  // Spectral mask of Delta_q for -1 <= q <= q_max.
  std::span<const double> block_mask(int q) const;
  // Spectral mask of S_q = chi(2^{-q} D), q >= 0.
  AlignedVector<double> low_mask(int q) const;

 private:
  TorusGrid grid_;
  int q_max_;
  std::vector<AlignedVector<double>> blocks_;
};

DyadicCutoffs build_cutoffs(const TorusGrid& grid);

// Delta_q f. Zero for q <= -2; throws DomainError for q > q_max.
SpectralField delta_q(const SpectralField& f, int q, const DyadicCutoffs& cut);
// S_q f for q >= 0.
SpectralField s_q(const SpectralField& f, int q, const DyadicCutoffs& cut);
// All blocks Delta_{-1}..Delta_{q_max}; element i is block q = i - 1.
std::vector<SpectralField> dyadic_blocks(const SpectralField& f, const DyadicCutoffs& cut);

// ||f||_{B^s_{p,r}} with grid-quadrature L^p norms of each block.
BesovNormReport besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicCutoffs& cut);
// Vector version: each block norm is the L^p norm of the pointwise magnitude.
BesovNormReport besov_norm(const VectorField& v, const BesovIndex& idx, const DyadicCutoffs& cut);
// l^r combination of per-block values, r = inf is the max.
double ell_r_norm(const std::vector<double>& values, double r);

struct BernsteinReport {
  // ||D^k f||_{L^q} / (lambda^{k + N(1/p - 1/q)} ||f||_{L^p})
  double ratio = 0.0;
  double derivative_norm = 0.0;
  double field_norm = 0.0;
};

struct BernsteinRegion {
  enum class Kind { Ball, Annulus };
  Kind kind = Kind::Annulus;
  double inner = 0.75;  // r, annulus only
  double outer = 8.0 / 3.0;  // R
};

// |D^k f| is the Euclidean norm of the full k-th derivative tensor.
RealField derivative_tensor_magnitude(const SpectralField& f, int k_order);

// Throws DomainError if the spectrum of f leaves the stated region scaled by lambda.
BernsteinReport bernstein_check(const SpectralField& f, double p, double q, int k_order, double lambda,
                                const BernsteinRegion& region);

// ||f||_{B^{s2}_{p2,r}} / ||f||_{B^{s1}_{p1,r}}; nullopt for the 0/0 case.
// Throws DomainError unless p1 <= p2 and s2 <= s1 - N/p1 + N/p2.
std::optional<double> embedding_check(const SpectralField& f, const BesovIndex& from, const BesovIndex& to,
                                      const DyadicCutoffs& cut);

}  // namespace inhomo
