#include "support/jacobi_eig.hpp"

#include <algorithm>
#include <cmath>

namespace testsupport {

std::vector<double> symmetric_eigenvalues(std::vector<double> s, std::size_t n) {
  if (n == 0) return {};
  auto at = [&](std::size_t r, std::size_t c) -> double& { return s[r * n + c]; };

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(at(i, i)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) scale = std::max(scale, std::fabs(at(i, j)));
  if (scale == 0.0) return std::vector<double>(n, 0.0);
  const double stop = 1e-15 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::fabs(at(p, q)));
    if (off <= stop) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::fabs(apq) <= stop) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;

        for (std::size_t i = 0; i < n; ++i) {
          const double sip = at(i, p), siq = at(i, q);
          at(i, p) = c * sip - sn * siq;
          at(i, q) = sn * sip + c * siq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double spi = at(p, i), sqi = at(q, i);
          at(p, i) = c * spi - sn * sqi;
          at(q, i) = sn * spi + c * sqi;
        }
      }
    }
  }

  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace testsupport
