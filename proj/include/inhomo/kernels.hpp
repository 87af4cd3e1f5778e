#pragma once

// Data-parallel inner loops shared by every spectral operation.
//
// Each kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The active table is chosen once at startup from cpuid
// (override with INHOMO_EULER_SIMD=scalar) and can be switched for tests.

#include <cstddef>
#include <string_view>

namespace inhomo::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  // out[i] = sym[i] * in[i] for interleaved complex in/out (n complex values).
  void (*scale_complex)(const double* in, const double* sym, double* out, std::size_t n);
  // out[i] = i * sym[i] * in[i] for interleaved complex in/out.
  void (*scale_complex_imag)(const double* in, const double* sym, double* out, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // acc[i] += a[i] * b[i]
  void (*fma_acc)(const double* a, const double* b, double* acc, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum w[i] * |c[i]|^2 for interleaved complex c
  double (*weighted_norm2_complex)(const double* c, const double* w, std::size_t n);
  // max |a[i]|
  double (*max_abs)(const double* a, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the CPU (or the build) has no AVX2+FMA support.
const KernelTable* avx2_table();

const KernelTable& active();
void set_backend(Backend b);
Backend active_backend();
std::string_view backend_name(Backend b);

}  // namespace inhomo::kernels
