#pragma once

// Reproducible random spectral fields. Every wavevector draws its coefficient
// from a counter-based hash of (seed, stream, k), so the same seed yields the
// same trigonometric polynomial on every grid that resolves it.

#include <cstdint>

#include "inhomo/spectral.hpp"

namespace inhomo {

struct RandomSpectrum {
  double k_min = 1.0;
  double k_max = 8.0;
  // Coefficient amplitude scales as |k|^-decay.
  double decay = 0.0;
};

// Uniform double in [0, 1) from a counter.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::int64_t k1, std::int64_t k2, std::int64_t k3,
                       std::uint64_t draw);

// Real, mean-free field with Gaussian coefficients on k_min <= |k| <= k_max.
SpectralField random_field(const TorusGrid& grid, const RandomSpectrum& spectrum, std::uint64_t seed,
                           std::uint64_t stream = 0);

// One independent stream per component.
VectorField random_vector_field(const TorusGrid& grid, const RandomSpectrum& spectrum, std::uint64_t seed,
                                std::uint64_t stream = 0);

}  // namespace inhomo
