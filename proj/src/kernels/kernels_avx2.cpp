#include "inhomo/kernels.hpp"

#include <algorithm>
#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define INHOMO_HAVE_AVX2_KERNELS 1
#else
#define INHOMO_HAVE_AVX2_KERNELS 0
#endif

namespace inhomo::kernels {

#if INHOMO_HAVE_AVX2_KERNELS
namespace {

#define INHOMO_AVX2 __attribute__((target("avx2,fma")))

INHOMO_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

INHOMO_AVX2 void scale_complex(const double* in, const double* sym, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_loadu_pd(sym + i);
    const __m256d s_lo = _mm256_permute4x64_pd(s, 0x50);
    const __m256d s_hi = _mm256_permute4x64_pd(s, 0xFA);
    _mm256_storeu_pd(out + 2 * i, _mm256_mul_pd(s_lo, _mm256_loadu_pd(in + 2 * i)));
    _mm256_storeu_pd(out + 2 * i + 4, _mm256_mul_pd(s_hi, _mm256_loadu_pd(in + 2 * i + 4)));
  }
  for (; i < n; ++i) {
    out[2 * i] = sym[i] * in[2 * i];
    out[2 * i + 1] = sym[i] * in[2 * i + 1];
  }
}

INHOMO_AVX2 void scale_complex_imag(const double* in, const double* sym, double* out, std::size_t n) {
  const __m256d sign = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_loadu_pd(sym + i);
    const __m256d s_lo = _mm256_mul_pd(_mm256_permute4x64_pd(s, 0x50), sign);
    const __m256d s_hi = _mm256_mul_pd(_mm256_permute4x64_pd(s, 0xFA), sign);
    const __m256d v_lo = _mm256_permute_pd(_mm256_loadu_pd(in + 2 * i), 0x5);
    const __m256d v_hi = _mm256_permute_pd(_mm256_loadu_pd(in + 2 * i + 4), 0x5);
    _mm256_storeu_pd(out + 2 * i, _mm256_mul_pd(s_lo, v_lo));
    _mm256_storeu_pd(out + 2 * i + 4, _mm256_mul_pd(s_hi, v_hi));
  }
  for (; i < n; ++i) {
    const double re = in[2 * i];
    const double im = in[2 * i + 1];
    out[2 * i] = -sym[i] * im;
    out[2 * i + 1] = sym[i] * re;
  }
}

INHOMO_AVX2 void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

// Uses separate mul+add (not fused) so results match the scalar reference bit for bit.
INHOMO_AVX2 void fma_acc(const double* a, const double* b, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), p));
  }
  for (; i < n; ++i) acc[i] += a[i] * b[i];
}

INHOMO_AVX2 void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

INHOMO_AVX2 double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

INHOMO_AVX2 double weighted_norm2_complex(const double* c, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_loadu_pd(w + i);
    const __m256d v_lo = _mm256_loadu_pd(c + 2 * i);
    const __m256d v_hi = _mm256_loadu_pd(c + 2 * i + 4);
    acc = _mm256_fmadd_pd(_mm256_permute4x64_pd(s, 0x50), _mm256_mul_pd(v_lo, v_lo), acc);
    acc = _mm256_fmadd_pd(_mm256_permute4x64_pd(s, 0xFA), _mm256_mul_pd(v_hi, v_hi), acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += w[i] * (c[2 * i] * c[2 * i] + c[2 * i + 1] * c[2 * i + 1]);
  return sum;
}

INHOMO_AVX2 double max_abs(const double* a, std::size_t n) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_and_pd(mask, _mm256_loadu_pd(a + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) r = std::max(r, std::abs(a[i]));
  return r;
}

#undef INHOMO_AVX2

}  // namespace

const KernelTable* avx2_table() {
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{Backend::Avx2, scale_complex, scale_complex_imag, mul,
                                 fma_acc,       axpy,          dot,                weighted_norm2_complex,
                                 max_abs};
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace inhomo::kernels
