#pragma once

// Paraproduct/remainder splitting of products and ratio checks for the
// product and composition estimates.
//
// Convention: S_q = sum_{q' <= q-1} Delta_q', so S_0 = Delta_{-1} and
// T_u v = sum_{q >= 1} S_{q-1}u Delta_q v. With that choice
// T_u v + T_v u + R(u, v) is exactly the dealiased product u v.

#include <functional>

#include "inhomo/littlewood_paley.hpp"

namespace inhomo {

struct BonySplit {
  SpectralField t_uv;
  SpectralField t_vu;
  SpectralField remainder;
};

SpectralField paraproduct(const SpectralField& u, const SpectralField& v, const DyadicCutoffs& cut);
SpectralField remainder(const SpectralField& u, const SpectralField& v, const DyadicCutoffs& cut);
BonySplit bony_decompose(const SpectralField& u, const SpectralField& v, const DyadicCutoffs& cut);
// T'_u v = T_u v + R(u, v)
SpectralField t_prime(const SpectralField& u, const SpectralField& v, const DyadicCutoffs& cut);

// ||ab||_{B^s} / (||a||_inf ||b||_{B^s} + ||b||_inf ||grad a||_{B^{s-1}}), s > 0.
double tame_bound_check(const SpectralField& a, const SpectralField& b, const BesovIndex& idx,
                        const DyadicCutoffs& cut);

// ||T_u v||_{B^s} / (||u||_inf ||grad v||_{B^{s-1}}).
double paraproduct_bound_check(const SpectralField& u, const SpectralField& v, const BesovIndex& idx,
                               const DyadicCutoffs& cut);

// ||T_u v||_{B^{s+t}_{p,r}} / (||u||_{B^t_{inf,inf}} ||v||_{B^s_{p,r}}), t < 0.
double negative_paraproduct_check(const SpectralField& u, const SpectralField& v, const BesovIndex& idx, double t,
                                  const DyadicCutoffs& cut);

struct ScalarMap {
  std::function<double(double)> fn;
  // Closed interval on which fn is smooth; the field must take values inside it.
  double lower = -1e300;
  double upper = 1e300;
};

// ||F(a) - F(mean a)||_{B^s} / ||a - mean a||_{B^s}, F applied pointwise on the grid.
double composition_check(const ScalarMap& F, const SpectralField& a, const BesovIndex& idx, const DyadicCutoffs& cut);

}  // namespace inhomo
