#include "phasecs/kernels.hpp"

#include <cmath>

namespace phasecs::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int j = 0; j < 8; ++j) acc[j] = std::fma(x[i + j], y[i + j], acc[j]);
  }
  double t0 = acc[0] + acc[4];
  double t1 = acc[1] + acc[5];
  double t2 = acc[2] + acc[6];
  double t3 = acc[3] + acc[7];
  double total = (t0 + t1) + (t2 + t3);
  for (; i < n; ++i) total = std::fma(x[i], y[i], total);
  return total;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scale_scalar(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void abs_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::fabs(src[i]);
}

void square_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] * src[i];
}

void soft_scalar(double* dst, const double* src, double t, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::fabs(src[i]) - t;
    a = a > 0.0 ? a : 0.0;
    dst[i] = std::copysign(a, src[i]);
  }
}

const Ops kScalar = {
    "scalar", dot_scalar, axpy_scalar, scale_scalar, abs_scalar, square_scalar, soft_scalar,
};

}  // namespace

const Ops& scalar_ops() { return kScalar; }

void matvec(const double* a, std::size_t m, std::size_t n, const double* x, double* y) {
  const Ops& ops = active();
  for (std::size_t r = 0; r < m; ++r) y[r] = ops.dot(a + r * n, x, n);
}

}  // namespace phasecs::kernels
