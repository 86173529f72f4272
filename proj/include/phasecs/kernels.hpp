#pragma once

#include <cstddef>

namespace phasecs::kernels {

// Vector kernels behind the numeric hot paths. Two implementations exist
// (scalar and AVX2) and are selected once at startup. Both follow the same
// lane structure: reductions run eight accumulators that are folded as two
// 4-wide halves, then combined pairwise, so scalar and AVX2 results are
// bit-identical, not merely close. The scalar path uses std::fma to mirror
// the vector FMA contractions.
struct Ops {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  void (*scale)(double* x, double a, std::size_t n);
  void (*abs_to)(double* dst, const double* src, std::size_t n);
  void (*square_to)(double* dst, const double* src, std::size_t n);
  void (*soft_threshold)(double* dst, const double* src, double t, std::size_t n);
};

const Ops& scalar_ops();

// Null when the binary lacks AVX2 codegen or the CPU lacks AVX2+FMA.
const Ops* avx2_ops();

// Startup selection: widest supported variant, overridable with
// PHASECS_KERNELS=scalar|avx2 (an unsupported request falls back to scalar).
const Ops& active();

inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}

inline double sumsq(const double* x, std::size_t n) { return active().dot(x, x, n); }

inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}

inline void scale(double* x, double a, std::size_t n) { active().scale(x, a, n); }

inline void abs_to(double* dst, const double* src, std::size_t n) {
  active().abs_to(dst, src, n);
}

inline void square_to(double* dst, const double* src, std::size_t n) {
  active().square_to(dst, src, n);
}

inline void soft_threshold(double* dst, const double* src, double t, std::size_t n) {
  active().soft_threshold(dst, src, t, n);
}

// y = A x for row-major A (m rows, n cols). Each row is one dot call, so the
// bitwise equivalence of the dot kernel carries over to matvec results.
void matvec(const double* a, std::size_t m, std::size_t n, const double* x, double* y);

}  // namespace phasecs::kernels
