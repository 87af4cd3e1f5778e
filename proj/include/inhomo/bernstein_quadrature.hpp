#pragma once

// Quadrature for the weighted Bernstein integrals on the 2D torus,
//   middle = (p-1) int a |grad u|^2 w_mid(u),  right = -int div(a grad u) w_right(u),
//   power  = int |u|^p,
// with w_mid = |u|^{p-2}, w_right = |u|^{p-2} u (T_eps-regularized for p < 2).
// These are smooth except on the zero set of u, where grid quadrature only
// converges algebraically. Each horizontal line is split at the zeros and
// extrema of u and integrated piecewise with graded Gauss-Legendre rules; the
// outer integral is split at the heights where the zero set is tangent to the
// lines, which are the only places the line integrals fail to be smooth.

#include <array>
#include <vector>

#include "inhomo/spectral.hpp"

namespace inhomo {

struct PowerIntegrals {
  double middle = 0.0;
  double right = 0.0;
  double power = 0.0;
};

// Requires a 2D grid. eps is the T_eps regularization used when p < 2.
// oversampling sizes the grid on which div(a grad u) is formed exactly.
PowerIntegrals line_split_integrals(const SpectralField& u, const SpectralField& a, double p, double eps,
                                    int oversampling);

// Points (x1, x2) with u = 0 and d_1 u = 0, reduced to [0, 2pi)^2.
std::vector<std::array<double, 2>> zero_set_tangencies(const SpectralField& u);

}  // namespace inhomo
