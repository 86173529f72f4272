#include "phasecs/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace phasecs::kernels {
namespace {

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  // fold the two 4-wide halves, then combine pairwise; matches the scalar path
  alignas(32) double t[4];
  _mm256_store_pd(t, _mm256_add_pd(a0, a1));
  double total = (t[0] + t[1]) + (t[2] + t[3]);
  for (; i < n; ++i) total = std::fma(x[i], y[i], total);
  return total;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scale_avx2(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  }
  for (; i < n; ++i) x[i] *= a;
}

void abs_avx2(double* dst, const double* src, std::size_t n) {
  const __m256d mask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_andnot_pd(mask, _mm256_loadu_pd(src + i)));
  }
  for (; i < n; ++i) dst[i] = std::fabs(src[i]);
}

void square_avx2(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(src + i);
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(v, v));
  }
  for (; i < n; ++i) dst[i] = src[i] * src[i];
}

void soft_avx2(double* dst, const double* src, double t, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(src + i);
    __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_andnot_pd(sign_mask, v), vt), zero);
    __m256d sign = _mm256_and_pd(v, sign_mask);
    _mm256_storeu_pd(dst + i, _mm256_or_pd(mag, sign));
  }
  for (; i < n; ++i) {
    double a = std::fabs(src[i]) - t;
    a = a > 0.0 ? a : 0.0;
    dst[i] = std::copysign(a, src[i]);
  }
}

const Ops kAvx2 = {
    "avx2", dot_avx2, axpy_avx2, scale_avx2, abs_avx2, square_avx2, soft_avx2,
};

bool runtime_supported() {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops* ops = runtime_supported() ? &kAvx2 : nullptr;
  return ops;
}

}  // namespace phasecs::kernels

#else

namespace phasecs::kernels {

const Ops* avx2_ops() { return nullptr; }

}  // namespace phasecs::kernels

#endif
