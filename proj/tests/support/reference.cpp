#include "support/reference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace testsupport {

double dot_ref(const double* a, const double* b, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += a[i] * b[i];
  return s;
}

double sumsq_ref(const double* a, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += a[i] * a[i];
  return s;
}

void matvec_ref(const double* a, std::size_t m, std::size_t n, const double* x, double* y) {
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += a[r * n + c] * x[c];
    y[r] = s;
  }
}

double smallest_half_energy_ref(const std::vector<double>& x) {
  const std::size_t m = x.size();
  const std::size_t q = (m + 1) / 2;
  std::vector<double> sq(m);
  for (std::size_t i = 0; i < m; ++i) sq[i] = x[i] * x[i];
  std::sort(sq.begin(), sq.end());
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    const double t = sum + sq[i];
    comp += std::fabs(sum) >= std::fabs(sq[i]) ? (sum - t) + sq[i] : (sq[i] - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double smallest_subset_energy_ref(const std::vector<double>& x) {
  const std::size_t m = x.size();
  const std::size_t q = (m + 1) / 2;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) < q) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) s += x[i] * x[i];
    best = std::min(best, s);
  }
  return best;
}

double normal_cdf(double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); }

double normal_pdf(double v) {
  return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::acos(-1.0));
}

double normal_quantile(double p) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double mu_infinity_ref() {
  const double q = normal_quantile(0.75);
  return std::sqrt(0.5 - 2.0 * q * normal_pdf(q));
}

}  // namespace testsupport
