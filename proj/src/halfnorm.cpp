#include "phasecs/halfnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasecs/errors.hpp"
#include "phasecs/kernels.hpp"
#include "phasecs/parallel.hpp"
#include "phasecs/rng.hpp"

namespace phasecs {

namespace {

// Neumaier-compensated sum of an ascending range. The selection path sorts
// the kept squares first, so it sums the same values in the same order as a
// full-sort reference and matches it bit for bit.
double compensated_sum(const double* v, std::size_t n) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double t = sum + v[i];
    if (std::fabs(sum) >= std::fabs(v[i])) {
      comp += (sum - t) + v[i];
    } else {
      comp += (v[i] - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace

double smallest_subset_energy(const double* x, std::size_t m, std::size_t q) {
  if (m < 1) fail_precondition("smallest_subset_energy: empty vector");
  if (q < 1 || q > m) fail_precondition("smallest_subset_energy: q out of range");
  std::vector<double> sq(m);
  kernels::square_to(sq.data(), x, m);
  if (q < m) {
    std::nth_element(sq.begin(), sq.begin() + q, sq.end());
  }
  std::sort(sq.begin(), sq.begin() + q);
  return compensated_sum(sq.data(), q);
}

double smallest_half_energy(const double* x, std::size_t m) {
  return smallest_subset_energy(x, m, half_count(m));
}

double smallest_half_norm(const std::vector<double>& x) {
  return std::sqrt(smallest_half_energy(x.data(), x.size()));
}

double smallest_subset_norm(const std::vector<double>& x, std::size_t q) {
  return std::sqrt(smallest_subset_energy(x.data(), x.size(), q));
}

MuEstimate estimate_mu(std::size_t m, std::size_t trials, std::uint64_t seed, int threads) {
  if (m < 1) fail_precondition("estimate_mu: m must be positive");
  if (trials < 100) fail_precondition("estimate_mu: need at least 100 trials");

  std::vector<double> f(trials);
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  parallel_for(trials, threads, [&](std::size_t t) {
    rng::GaussianStream g(seed, rng::stream_id(rng::Domain::Trial, 0));
    std::vector<double> x(m);
    const std::uint64_t base = static_cast<std::uint64_t>(t) * m;
    for (std::size_t j = 0; j < m; ++j) x[j] = g.at(base + j);
    f[t] = std::sqrt(smallest_half_energy(x.data(), m)) * inv_sqrt_m;
  });

  double sum = 0.0;
  for (double v : f) sum += v;
  double mean = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (double v : f) ss += (v - mean) * (v - mean);
  double var = ss / static_cast<double>(trials - 1);

  MuEstimate out;
  out.m = m;
  out.trials = trials;
  out.mean = mean;
  out.std_error = std::sqrt(var / static_cast<double>(trials));
  out.seed = seed;
  return out;
}

double nu0() {
  const double e = std::numbers::e;
  const double pi = std::numbers::pi;
  return (1.0 / (32.0 * e)) * std::sqrt(pi / 2.0) * (1.0 - 1.0 / (4.0 * std::sqrt(pi)));
}

double order_stat_lower_bound(std::size_t k, std::size_t m, double alpha) {
  if (k < 1 || k > m) fail_precondition("order_stat_lower_bound: need 1 <= k <= m");
  if (!(alpha > 0.0)) fail_precondition("order_stat_lower_bound: alpha must be positive");
  const double e = std::numbers::e;
  const double pi = std::numbers::pi;
  const double c_alpha = (1.0 / (2.0 * e * alpha)) * (1.0 - 1.0 / (4.0 * std::sqrt(pi)));
  double best = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    double ratio = static_cast<double>(k + 1 - j) / static_cast<double>(m - j + 1);
    if (ratio > best) best = ratio;
  }
  return c_alpha * best;
}

}  // namespace phasecs
