#pragma once

#include "inhomo/spectral.hpp"

namespace inhomo::detail {

// Unnormalized FFTW transforms on a cached per-grid plan. Buffers must be
// 64-byte aligned (AlignedVector). inverse() overwrites its input.
void fft_forward(const TorusGrid& grid, const double* in, Complex* out);
void fft_inverse(const TorusGrid& grid, Complex* in, double* out);

}  // namespace inhomo::detail
