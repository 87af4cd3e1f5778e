#include "inhomo/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "inhomo/error.hpp"

namespace inhomo {
namespace {

double smooth_step_g(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = smooth_step_g(t);
  const double b = smooth_step_g(1.0 - t);
  return a / (a + b);
}

void check_finite(const SpectralField& f) {
  for (auto c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("field has non-finite coefficients");
  }
}

bool index_in_range(double x) { return x >= 1.0 && (std::isinf(x) || std::isfinite(x)); }

}  // namespace

double chi_profile(double r) {
  if (r <= kChiPlateau) return 1.0;
  if (r >= kChiSupport) return 0.0;
  return smooth_step((kChiSupport - r) / (kChiSupport - kChiPlateau));
}

double phi_profile(double r) { return chi_profile(0.5 * r) - chi_profile(r); }

bool BesovIndex::condition_c(int dim) const {
  const double critical = 1.0 + (std::isinf(p) ? 0.0 : dim / p);
  if (s > critical) return true;
  return std::abs(s - critical) < 1e-12 && r == 1.0;
}

void BesovIndex::validate() const {
  if (!std::isfinite(s)) throw DomainError("Besov index s must be finite");
  if (!index_in_range(p)) throw DomainError("Besov index p must lie in [1, inf], got " + std::to_string(p));
  if (!index_in_range(r)) throw DomainError("Besov index r must lie in [1, inf], got " + std::to_string(r));
}

DyadicCutoffs::DyadicCutoffs(const TorusGrid& grid) : grid_(grid), q_max_(0) {
  const double kmax = grid.max_wavenumber();
  while (kChiPlateau * std::ldexp(1.0, q_max_ + 1) < kmax) ++q_max_;

  const auto tables = grid_tables(grid);
  const std::size_t size = grid.spectral_size();
  blocks_.assign(static_cast<std::size_t>(q_max_ + 2), AlignedVector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) {
    if (tables->nyquist_mask[i] == 0.0) continue;
    const double k = tables->k_norm[i];
    blocks_[0][i] = chi_profile(k);
    for (int q = 0; q <= q_max_; ++q) blocks_[static_cast<std::size_t>(q + 1)][i] = phi_profile(std::ldexp(k, -q));
  }
}

std::span<const double> DyadicCutoffs::block_mask(int q) const {
  if (q < -1 || q > q_max_) {
    throw DomainError("dyadic block " + std::to_string(q) + " outside the ladder [-1, " + std::to_string(q_max_) + "]");
  }
  return blocks_[static_cast<std::size_t>(q + 1)];
}

AlignedVector<double> DyadicCutoffs::low_mask(int q) const {
  if (q < 0) throw DomainError("low-frequency cutoff S_q needs q >= 0");
  const auto tables = grid_tables(grid_);
  AlignedVector<double> mask(grid_.spectral_size(), 0.0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (tables->nyquist_mask[i] != 0.0) mask[i] = chi_profile(std::ldexp(tables->k_norm[i], -q));
  }
  return mask;
}

DyadicCutoffs build_cutoffs(const TorusGrid& grid) { return DyadicCutoffs(grid); }

SpectralField delta_q(const SpectralField& f, int q, const DyadicCutoffs& cut) {
  require_same_grid(f.grid(), cut.grid(), "delta_q");
  if (q <= -2) return SpectralField(f.grid());
  return apply_mask(f, cut.block_mask(q));
}

SpectralField s_q(const SpectralField& f, int q, const DyadicCutoffs& cut) {
  require_same_grid(f.grid(), cut.grid(), "s_q");
  return apply_mask(f, cut.low_mask(q));
}

std::vector<SpectralField> dyadic_blocks(const SpectralField& f, const DyadicCutoffs& cut) {
  require_same_grid(f.grid(), cut.grid(), "dyadic_blocks");
  std::vector<SpectralField> out;
  out.reserve(static_cast<std::size_t>(cut.q_max() + 2));
  for (int q = -1; q <= cut.q_max(); ++q) out.push_back(apply_mask(f, cut.block_mask(q)));
  return out;
}

double ell_r_norm(const std::vector<double>& values, double r) {
  if (values.empty()) return 0.0;
  if (std::isinf(r)) return *std::max_element(values.begin(), values.end());
  if (r == 1.0) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  double s = 0.0;
  for (double v : values) s += std::pow(v, r);
  return std::pow(s, 1.0 / r);
}

namespace {

template <class BlockNorm>
BesovNormReport assemble(const BesovIndex& idx, const DyadicCutoffs& cut, BlockNorm&& block_norm) {
  idx.validate();
  BesovNormReport report;
  std::vector<double> values;
  for (int q = -1; q <= cut.q_max(); ++q) {
    const double v = std::pow(2.0, q * idx.s) * block_norm(q);
    report.blocks.emplace_back(q, v);
    values.push_back(v);
  }
  report.total = ell_r_norm(values, idx.r);
  return report;
}

}  // namespace

BesovNormReport besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicCutoffs& cut) {
  require_same_grid(f.grid(), cut.grid(), "besov_norm");
  check_finite(f);
  return assemble(idx, cut, [&](int q) { return lp_norm(apply_mask(f, cut.block_mask(q)), idx.p); });
}

BesovNormReport besov_norm(const VectorField& v, const BesovIndex& idx, const DyadicCutoffs& cut) {
  require_same_grid(v.grid(), cut.grid(), "besov_norm");
  for (int a = 0; a < v.dim(); ++a) check_finite(v[a]);
  return assemble(idx, cut, [&](int q) {
    std::vector<RealField> comps;
    for (int a = 0; a < v.dim(); ++a) comps.push_back(to_physical(apply_mask(v[a], cut.block_mask(q))));
    return lp_norm(magnitude(comps), idx.p);
  });
}

RealField derivative_tensor_magnitude(const SpectralField& f, int k_order) {
  if (k_order < 0) throw DomainError("derivative order must be >= 0");
  const int dim = f.grid().dim();
  RealField acc(f.grid());
  // Enumerate multi-indices alpha with |alpha| = k_order; each appears
  // k!/prod(alpha_i!) times among the ordered index tuples of the tensor.
  std::array<int, 3> alpha{0, 0, 0};
  auto factorial = [](int m) {
    double r = 1.0;
    for (int i = 2; i <= m; ++i) r *= i;
    return r;
  };
  auto visit = [&](const std::array<int, 3>& al) {
    SpectralField d = f;
    for (int a = 0; a < dim; ++a) {
      for (int j = 0; j < al[a]; ++j) d = partial(d, a);
    }
    double mult = factorial(k_order);
    for (int a = 0; a < dim; ++a) mult /= factorial(al[a]);
    const RealField g = to_physical(d);
    for (std::size_t i = 0; i < g.size(); ++i) acc[i] += mult * g[i] * g[i];
  };
  if (dim == 2) {
    for (int i = 0; i <= k_order; ++i) {
      alpha = {i, k_order - i, 0};
      visit(alpha);
    }
  } else {
    for (int i = 0; i <= k_order; ++i) {
      for (int j = 0; i + j <= k_order; ++j) {
        alpha = {i, j, k_order - i - j};
        visit(alpha);
      }
    }
  }
  for (auto& x : acc.values()) x = std::sqrt(x);
  return acc;
}

BernsteinReport bernstein_check(const SpectralField& f, double p, double q, int k_order, double lambda,
                                const BernsteinRegion& region) {
  if (!(lambda > 0.0)) throw DomainError("Bernstein scale lambda must be positive");
  if (!(p >= 1.0) || !(q >= p)) throw DomainError("Bernstein check needs 1 <= p <= q");
  const double inner = region.kind == BernsteinRegion::Kind::Ball ? 0.0 : region.inner * lambda;
  const double outer = region.outer * lambda;
  if (!spectrum_within(f, inner, outer)) throw DomainError("spectrum of the field leaves the stated region");
  BernsteinReport rep;
  rep.field_norm = lp_norm(f, p);
  rep.derivative_norm = lp_norm(derivative_tensor_magnitude(f, k_order), q);
  const int dim = f.grid().dim();
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const double exponent = k_order + dim * (1.0 / p - inv_q);
  const double denom = std::pow(lambda, exponent) * rep.field_norm;
  rep.ratio = denom > 0.0 ? rep.derivative_norm / denom : 0.0;
  return rep;
}

std::optional<double> embedding_check(const SpectralField& f, const BesovIndex& from, const BesovIndex& to,
                                      const DyadicCutoffs& cut) {
  from.validate();
  to.validate();
  const int dim = f.grid().dim();
  auto inv = [](double p) { return std::isinf(p) ? 0.0 : 1.0 / p; };
  if (!(from.p <= to.p)) throw DomainError("embedding needs p1 <= p2");
  if (to.s > from.s - dim * inv(from.p) + dim * inv(to.p) + 1e-12) {
    throw DomainError("embedding needs s2 <= s1 - N/p1 + N/p2");
  }
  const double num = besov_norm(f, to, cut).total;
  const double den = besov_norm(f, from, cut).total;
  if (den == 0.0) {
    if (num == 0.0) return std::nullopt;
    return std::numeric_limits<double>::infinity();
  }
  return num / den;
}

}  // namespace inhomo
