#include "inhomo/random_field.hpp"

#include <cmath>
#include <numbers>

namespace inhomo {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double gaussian(std::uint64_t seed, std::uint64_t stream, const std::array<int, 3>& k, std::uint64_t draw) {
  const double u1 = counter_uniform(seed, stream, k[0], k[1], k[2], 2 * draw);
  const double u2 = counter_uniform(seed, stream, k[0], k[1], k[2], 2 * draw + 1);
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::int64_t k1, std::int64_t k2, std::int64_t k3,
                       std::uint64_t draw) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ stream);
  h = splitmix(h ^ static_cast<std::uint64_t>(k1));
  h = splitmix(h ^ static_cast<std::uint64_t>(k2));
  h = splitmix(h ^ static_cast<std::uint64_t>(k3));
  h = splitmix(h ^ draw);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SpectralField random_field(const TorusGrid& grid, const RandomSpectrum& spectrum, std::uint64_t seed,
                           std::uint64_t stream) {
  const auto tables = grid_tables(grid);
  SpectralField f(grid);
  auto c = f.coeffs();
  const int last = grid.dim() - 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (tables->parseval_weight[i] == 0.0) continue;
    const double kn = tables->k_norm[i];
    if (kn == 0.0 || kn < spectrum.k_min || kn > spectrum.k_max) continue;
    // Canonical representative of the pair {k, -k}: the value is drawn at the
    // representative and conjugated at its mirror so the field stays real.
    std::array<int, 3> k = tables->index_k[i];
    bool mirrored = false;
    if (k[last] == 0) {
      for (int a = 0; a < grid.dim(); ++a) {
        if (k[a] != 0) {
          mirrored = k[a] < 0;
          break;
        }
      }
    }
    if (mirrored) k = {-k[0], -k[1], -k[2]};
    const double amp = std::pow(kn, -spectrum.decay) / std::sqrt(2.0);
    Complex v(amp * gaussian(seed, stream, k, 0), amp * gaussian(seed, stream, k, 1));
    c[i] = mirrored ? std::conj(v) : v;
  }
  return f;
}

VectorField random_vector_field(const TorusGrid& grid, const RandomSpectrum& spectrum, std::uint64_t seed,
                                std::uint64_t stream) {
  std::vector<SpectralField> comps;
  for (int a = 0; a < grid.dim(); ++a) {
    comps.push_back(random_field(grid, spectrum, seed, stream * 16 + static_cast<std::uint64_t>(a)));
  }
  return VectorField(std::move(comps));
}

}  // namespace inhomo
