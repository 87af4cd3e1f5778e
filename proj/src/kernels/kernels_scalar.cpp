#include "inhomo/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace inhomo::kernels {
namespace {

void scale_complex(const double* in, const double* sym, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[2 * i] = sym[i] * in[2 * i];
    out[2 * i + 1] = sym[i] * in[2 * i + 1];
  }
}

void scale_complex_imag(const double* in, const double* sym, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = in[2 * i];
    const double im = in[2 * i + 1];
    out[2 * i] = -sym[i] * im;
    out[2 * i + 1] = sym[i] * re;
  }
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void fma_acc(const double* a, const double* b, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += a[i] * b[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_norm2_complex(const double* c, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += w[i] * (c[2 * i] * c[2 * i] + c[2 * i + 1] * c[2 * i + 1]);
  }
  return s;
}

double max_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Backend::Scalar, scale_complex, scale_complex_imag, mul,
                                 fma_acc,         axpy,          dot,                weighted_norm2_complex,
                                 max_abs};
  return table;
}

}  // namespace inhomo::kernels
