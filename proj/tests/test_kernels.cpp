#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <doctest.h>

#include "phasecs/kernels.hpp"
#include "phasecs/rng.hpp"
#include "support/reference.hpp"

using phasecs::kernels::Ops;

namespace {

std::vector<double> random_vec(std::size_t len, std::uint64_t stream) {
  phasecs::rng::GaussianStream g(42, stream);
  std::vector<double> v(len);
  for (std::size_t i = 0; i < len; ++i) v[i] = g.at(i);
  return v;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree bitwise") {
  const Ops& sc = phasecs::kernels::scalar_ops();
  const Ops* vx = phasecs::kernels::avx2_ops();
  if (vx == nullptr) return;  // hardware without the wide path

  // lengths straddling the 8-lane boundaries, including the empty vector
  for (std::size_t len : {0, 1, 2, 3, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100, 257, 1000}) {
    std::vector<double> x = random_vec(len, 1);
    std::vector<double> y = random_vec(len, 2);

    CHECK(sc.dot(x.data(), y.data(), len) == vx->dot(x.data(), y.data(), len));

    std::vector<double> ys = y, yv = y;
    sc.axpy(0.37, x.data(), ys.data(), len);
    vx->axpy(0.37, x.data(), yv.data(), len);
    CHECK(std::memcmp(ys.data(), yv.data(), len * sizeof(double)) == 0);

    std::vector<double> xs = x, xv = x;
    sc.scale(xs.data(), -1.75, len);
    vx->scale(xv.data(), -1.75, len);
    CHECK(std::memcmp(xs.data(), xv.data(), len * sizeof(double)) == 0);

    std::vector<double> as(len), av(len);
    sc.abs_to(as.data(), x.data(), len);
    vx->abs_to(av.data(), x.data(), len);
    CHECK(std::memcmp(as.data(), av.data(), len * sizeof(double)) == 0);

    sc.square_to(as.data(), x.data(), len);
    vx->square_to(av.data(), x.data(), len);
    CHECK(std::memcmp(as.data(), av.data(), len * sizeof(double)) == 0);

    sc.soft_threshold(as.data(), x.data(), 0.6, len);
    vx->soft_threshold(av.data(), x.data(), 0.6, len);
    CHECK(std::memcmp(as.data(), av.data(), len * sizeof(double)) == 0);
  }
}

TEST_CASE("dot matches a plain-loop reference") {
  for (std::size_t len : {1, 7, 64, 513, 2000}) {
    std::vector<double> x = random_vec(len, 3);
    std::vector<double> y = random_vec(len, 4);
    double got = phasecs::kernels::dot(x.data(), y.data(), len);
    double want = testsupport::dot_ref(x.data(), y.data(), len);
    double scale = 1.0;
    for (std::size_t i = 0; i < len; ++i) scale += std::fabs(x[i] * y[i]);
    CHECK(std::fabs(got - want) <= 1e-12 * scale);
  }
}

TEST_CASE("sumsq equals self-dot and the reference") {
  std::vector<double> x = random_vec(333, 5);
  double got = phasecs::kernels::sumsq(x.data(), x.size());
  CHECK(got == phasecs::kernels::dot(x.data(), x.data(), x.size()));
  CHECK(got == doctest::Approx(testsupport::sumsq_ref(x.data(), x.size())).epsilon(1e-12));
}

TEST_CASE("matvec matches the naive reference") {
  const std::size_t m = 37, n = 53;
  std::vector<double> a = random_vec(m * n, 6);
  std::vector<double> x = random_vec(n, 7);
  std::vector<double> got(m), want(m);
  phasecs::kernels::matvec(a.data(), m, n, x.data(), got.data());
  testsupport::matvec_ref(a.data(), m, n, x.data(), want.data());
  for (std::size_t r = 0; r < m; ++r)
    CHECK(got[r] == doctest::Approx(want[r]).epsilon(1e-11));
}

TEST_CASE("soft threshold shrinks toward zero") {
  const double src[5] = {3.0, -3.0, 0.5, -0.5, 0.0};
  double dst[5];
  phasecs::kernels::soft_threshold(dst, src, 1.0, 5);
  CHECK(dst[0] == 2.0);
  CHECK(dst[1] == -2.0);
  CHECK(dst[2] == 0.0);
  CHECK(dst[3] == 0.0);
  CHECK(dst[4] == 0.0);
}

TEST_CASE("kernel variants are named") {
  CHECK(std::string(phasecs::kernels::scalar_ops().name) == "scalar");
  const Ops* vx = phasecs::kernels::avx2_ops();
  if (vx != nullptr) CHECK(std::string(vx->name) == "avx2");
  const char* active = phasecs::kernels::active().name;
  CHECK((std::string(active) == "scalar" || std::string(active) == "avx2"));
}
