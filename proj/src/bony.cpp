#include "inhomo/bony.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "inhomo/error.hpp"
#include "inhomo/kernels.hpp"

namespace inhomo {
namespace {

// Physical-space dyadic blocks of the dealiased field; element i is q = i - 1.
std::vector<RealField> physical_blocks(const SpectralField& f, const DyadicCutoffs& cut) {
  const SpectralField d = dealias(f);
  std::vector<RealField> out;
  for (int q = -1; q <= cut.q_max(); ++q) out.push_back(to_physical(apply_mask(d, cut.block_mask(q))));
  return out;
}

// sum_{q >= 1} S_{q-1}u Delta_q v accumulated pointwise into acc.
void accumulate_paraproduct(const std::vector<RealField>& ub, const std::vector<RealField>& vb, RealField& acc) {
  const auto& k = kernels::active();
  RealField low(acc.grid());
  // Block index i holds q = i - 1; S_{q-1} = sum of blocks q' <= q - 2, i.e. indices < i - 1.
  for (std::size_t i = 2; i < vb.size(); ++i) {
    k.axpy(1.0, ub[i - 2].values().data(), low.values().data(), low.size());
    k.fma_acc(low.values().data(), vb[i].values().data(), acc.values().data(), acc.size());
  }
}

void accumulate_remainder(const std::vector<RealField>& ub, const std::vector<RealField>& vb, RealField& acc) {
  const auto& k = kernels::active();
  RealField near(acc.grid());
  const std::size_t m = ub.size();
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(near.values().begin(), near.values().end(), 0.0);
    for (std::size_t j = (i == 0 ? 0 : i - 1); j <= std::min(m - 1, i + 1); ++j) {
      k.axpy(1.0, vb[j].values().data(), near.values().data(), near.size());
    }
    k.fma_acc(ub[i].values().data(), near.values().data(), acc.values().data(), acc.size());
  }
}

SpectralField finish(const RealField& acc) { return dealias(to_spectral(acc)); }

void check_pair(const SpectralField& u, const SpectralField& v, const DyadicCutoffs& cut, const char* what) {
  require_same_grid(u.grid(), v.grid(), what);
  require_same_grid(u.grid(), cut.grid(), what);
}

}  // namespace

SpectralField paraproduct(const SpectralField& u, const SpectralField& v, const DyadicCutoffs& cut) {
  check_pair(u, v, cut, "paraproduct");
  RealField acc(u.grid());
  accumulate_paraproduct(physical_blocks(u, cut), physical_blocks(v, cut), acc);
  return finish(acc);
}

SpectralField remainder(const SpectralField& u, const SpectralField& v, const DyadicCutoffs& cut) {
  check_pair(u, v, cut, "remainder");
  RealField acc(u.grid());
  accumulate_remainder(physical_blocks(u, cut), physical_blocks(v, cut), acc);
  return finish(acc);
}

BonySplit bony_decompose(const SpectralField& u, const SpectralField& v, const DyadicCutoffs& cut) {
  check_pair(u, v, cut, "bony_decompose");
  const auto ub = physical_blocks(u, cut);
  const auto vb = physical_blocks(v, cut);
  RealField tuv(u.grid()), tvu(u.grid()), rem(u.grid());
  accumulate_paraproduct(ub, vb, tuv);
  accumulate_paraproduct(vb, ub, tvu);
  accumulate_remainder(ub, vb, rem);
  return BonySplit{finish(tuv), finish(tvu), finish(rem)};
}

SpectralField t_prime(const SpectralField& u, const SpectralField& v, const DyadicCutoffs& cut) {
  check_pair(u, v, cut, "t_prime");
  const auto ub = physical_blocks(u, cut);
  const auto vb = physical_blocks(v, cut);
  RealField acc(u.grid());
  accumulate_paraproduct(ub, vb, acc);
  accumulate_remainder(ub, vb, acc);
  return finish(acc);
}

double tame_bound_check(const SpectralField& a, const SpectralField& b, const BesovIndex& idx,
                        const DyadicCutoffs& cut) {
  check_pair(a, b, cut, "tame_bound_check");
  if (!(idx.s > 0.0)) throw DomainError("tame estimate needs s > 0");
  const BesovIndex lower{idx.s - 1.0, idx.p, idx.r};
  const double denom = lp_norm(a, INFINITY) * besov_norm(b, idx, cut).total +
                       lp_norm(b, INFINITY) * besov_norm(gradient(a), lower, cut).total;
  if (!(denom > 0.0)) throw DomainError("tame estimate denominator vanishes");
  return besov_norm(product(a, b), idx, cut).total / denom;
}

double paraproduct_bound_check(const SpectralField& u, const SpectralField& v, const BesovIndex& idx,
                               const DyadicCutoffs& cut) {
  check_pair(u, v, cut, "paraproduct_bound_check");
  const BesovIndex lower{idx.s - 1.0, idx.p, idx.r};
  const double denom = lp_norm(u, INFINITY) * besov_norm(gradient(v), lower, cut).total;
  if (!(denom > 0.0)) throw DomainError("paraproduct bound denominator vanishes");
  return besov_norm(paraproduct(u, v, cut), idx, cut).total / denom;
}

double negative_paraproduct_check(const SpectralField& u, const SpectralField& v, const BesovIndex& idx, double t,
                                  const DyadicCutoffs& cut) {
  check_pair(u, v, cut, "negative_paraproduct_check");
  if (!(t < 0.0)) throw DomainError("negative_paraproduct_check needs t < 0");
  const double denom = besov_norm(u, {t, INFINITY, INFINITY}, cut).total * besov_norm(v, idx, cut).total;
  if (!(denom > 0.0)) throw DomainError("negative paraproduct denominator vanishes");
  return besov_norm(paraproduct(u, v, cut), {idx.s + t, idx.p, idx.r}, cut).total / denom;
}

double composition_check(const ScalarMap& F, const SpectralField& a, const BesovIndex& idx, const DyadicCutoffs& cut) {
  require_same_grid(a.grid(), cut.grid(), "composition_check");
  const RealField pa = to_physical(a);
  const double lo = min_value(pa);
  const double hi = max_value(pa);
  if (lo < F.lower || hi > F.upper) {
    throw DomainError("field values [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] leave the interval where the map is smooth");
  }
  const double mean = a.mean();
  const double f_mean = F.fn(mean);
  RealField fa(a.grid());
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = F.fn(pa[i]) - f_mean;
  SpectralField centered = a;
  centered.coeffs()[0] = 0.0;
  const double denom = besov_norm(centered, idx, cut).total;
  if (!(denom > 0.0)) throw DomainError("composition check needs a non-constant field");
  return besov_norm(to_spectral(fa), idx, cut).total / denom;
}

}  // namespace inhomo
