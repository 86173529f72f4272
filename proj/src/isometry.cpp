#include "phasecs/isometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "phasecs/errors.hpp"
#include "phasecs/halfnorm.hpp"
#include "phasecs/kernels.hpp"
#include "phasecs/rng.hpp"

namespace phasecs {

namespace {

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] + (k - i) < n) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::uint64_t binom_capped(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    std::uint64_t num = n - k + i;
    // r * num / i is integral at every step; guard the multiply
    if (r > cap / num) return cap;
    r = r * num / i;
  }
  return r;
}

Eigen::MatrixXd submatrix(const SensingMatrix& a, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = a.at(rows[i], cols[j]);
  }
  return s;
}

// Two columns that agree (or anti-agree) in value on at least q rows give a
// two-sparse unit vector annihilated on those rows, so the half-erased lower
// level is exactly zero. Exact comparisons are meaningful: sign-matrix
// entries share one magnitude, and Gaussian entries never collide.
bool zero_certificate(const SensingMatrix& a, const std::vector<std::size_t>& cols,
                      std::size_t q) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      std::size_t agree = 0;
      std::size_t anti = 0;
      for (std::size_t r = 0; r < a.m; ++r) {
        double u = a.at(r, cols[i]);
        double v = a.at(r, cols[j]);
        if (u == v) ++agree;
        if (u == -v) ++anti;
      }
      if (agree >= q || anti >= q) return true;
    }
  }
  return false;
}

}  // namespace

const char* isometry_method_name(IsometryMethod m) {
  return m == IsometryMethod::ExactSmall ? "exact_small" : "randomized";
}

double min_subset_energy(const SensingMatrix& a, const std::vector<double>& x) {
  if (x.size() != a.n) fail_precondition("min_subset_energy: dimension mismatch");
  std::vector<double> y(a.m);
  kernels::matvec(a.entries.data(), a.m, a.n, x.data(), y.data());
  return smallest_half_energy(y.data(), a.m);
}

SripEstimate srip_exact_small(const SensingMatrix& a, std::size_t k, std::uint64_t budget) {
  if (k < 1 || k > a.n) fail_precondition("srip_exact_small: need 1 <= k <= n");
  const std::size_t q = half_count(a.m);
  const std::uint64_t n_supports = binom_capped(a.n, k);
  const std::uint64_t per_support = binom_capped(a.m, q);

  SripEstimate est;
  est.k = k;
  est.method = IsometryMethod::ExactSmall;
  est.supports_examined = n_supports;

  if (n_supports > budget) {
    throw budget_error("srip_exact_small: support enumeration alone exceeds budget",
                       n_supports, budget);
  }

  if (k == 1) {
    // a one-sparse unit vector is a signed coordinate, so the levels reduce
    // to per-column energies
    double tmin = std::numeric_limits<double>::infinity();
    double tmax = 0.0;
    for (std::size_t c = 0; c < a.n; ++c) {
      std::vector<double> col = a.column(c);
      tmin = std::min(tmin, smallest_half_energy(col.data(), a.m));
      tmax = std::max(tmax, kernels::sumsq(col.data(), a.m));
    }
    est.theta_minus = tmin;
    est.theta_plus = tmax;
    return est;
  }

  std::vector<std::size_t> all_rows(a.m);
  for (std::size_t r = 0; r < a.m; ++r) all_rows[r] = r;

  double theta_plus = 0.0;
  bool certified_zero = false;
  std::uint64_t uncertified = 0;

  std::vector<std::size_t> cols(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = i;
  do {
    Eigen::MatrixXd sub = submatrix(a, all_rows, cols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
    double smax = svd.singularValues()(0);
    theta_plus = std::max(theta_plus, smax * smax);
    if (!certified_zero) {
      if (zero_certificate(a, cols, q)) {
        certified_zero = true;
      } else {
        ++uncertified;
      }
    }
  } while (next_combination(cols, a.n));
  est.theta_plus = theta_plus;

  if (certified_zero) {
    est.theta_minus = 0.0;
    return est;
  }

  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t inner_cost =
      (per_support != 0 && uncertified > cap / per_support) ? cap : uncertified * per_support;
  if (inner_cost > budget || n_supports + inner_cost > budget) {
    throw budget_error("srip_exact_small: row-subset enumeration exceeds budget",
                       inner_cost, budget);
  }
  est.samples_per_support = per_support;

  double theta_minus = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) cols[i] = i;
  do {
    std::vector<std::size_t> rows(q);
    for (std::size_t i = 0; i < q; ++i) rows[i] = i;
    do {
      Eigen::MatrixXd sub = submatrix(a, rows, cols);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
      double smin = svd.singularValues()(static_cast<Eigen::Index>(k) - 1);
      theta_minus = std::min(theta_minus, smin * smin);
      if (theta_minus == 0.0) break;
    } while (next_combination(rows, a.m));
    if (theta_minus == 0.0) break;
  } while (next_combination(cols, a.n));
  est.theta_minus = theta_minus;
  return est;
}

SripEstimate srip_randomized(const SensingMatrix& a, std::size_t k, std::size_t n_supports,
                             std::size_t n_vectors, std::uint64_t seed) {
  if (k < 1 || k > a.n) fail_precondition("srip_randomized: need 1 <= k <= n");
  if (n_supports < 1 || n_vectors < 1) {
    fail_precondition("srip_randomized: need at least one support and one vector");
  }

  rng::UniformStream supp_stream(seed, rng::stream_id(rng::Domain::Trial, 0));
  rng::GaussianStream vec_stream(seed, rng::stream_id(rng::Domain::Sphere, 0));

  double tmin = std::numeric_limits<double>::infinity();
  double tmax = 0.0;
  std::vector<std::size_t> idx(a.n);
  std::vector<double> w(k);
  std::vector<double> y(a.m);

  for (std::size_t s = 0; s < n_supports; ++s) {
    for (std::size_t i = 0; i < a.n; ++i) idx[i] = i;
    const std::uint64_t base = static_cast<std::uint64_t>(s) * k;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + supp_stream.below(a.n - i, base + i);
      std::swap(idx[i], idx[j]);
    }
    for (std::size_t v = 0; v < n_vectors; ++v) {
      const std::uint64_t vbase = (static_cast<std::uint64_t>(s) * n_vectors + v) * k;
      for (std::size_t i = 0; i < k; ++i) w[i] = vec_stream.at(vbase + i);
      double norm = std::sqrt(kernels::sumsq(w.data(), k));
      if (norm == 0.0) {
        // zero draw has probability zero; fall back to a coordinate vector
        w.assign(k, 0.0);
        w[0] = 1.0;
        norm = 1.0;
      }
      std::fill(y.begin(), y.end(), 0.0);
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> col = a.column(idx[i]);
        kernels::axpy(w[i] / norm, col.data(), y.data(), a.m);
      }
      tmin = std::min(tmin, smallest_half_energy(y.data(), a.m));
      tmax = std::max(tmax, kernels::sumsq(y.data(), a.m));
    }
  }

  SripEstimate est;
  est.k = k;
  est.theta_minus = tmin;
  est.theta_plus = tmax;
  est.method = IsometryMethod::Randomized;
  est.supports_examined = n_supports;
  est.samples_per_support = n_vectors;
  est.seed = seed;
  return est;
}

RipEstimate rip_exact_small(const SensingMatrix& a, std::size_t k, std::uint64_t budget) {
  if (k < 1 || k > a.n) fail_precondition("rip_exact_small: need 1 <= k <= n");
  const std::uint64_t n_supports = binom_capped(a.n, k);
  if (n_supports > budget) {
    throw budget_error("rip_exact_small: enumeration exceeds budget", n_supports, budget);
  }

  std::vector<std::size_t> all_rows(a.m);
  for (std::size_t r = 0; r < a.m; ++r) all_rows[r] = r;

  double delta = 0.0;
  std::vector<std::size_t> cols(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = i;
  do {
    Eigen::MatrixXd sub = submatrix(a, all_rows, cols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(static_cast<Eigen::Index>(k) - 1);
    delta = std::max(delta, std::max(smax * smax - 1.0, 1.0 - smin * smin));
  } while (next_combination(cols, a.n));

  RipEstimate est;
  est.k = k;
  est.delta = delta;
  est.method = IsometryMethod::ExactSmall;
  return est;
}

BernoulliWitness bernoulli_witness(const SensingMatrix& a) {
  if (a.ensemble != Ensemble::Bernoulli) {
    fail_precondition("bernoulli_witness: requires a sign-matrix ensemble");
  }
  if (a.n < 2) fail_precondition("bernoulli_witness: need at least two columns");

  const std::size_t q = half_count(a.m);
  std::vector<std::size_t> agree_rows;
  std::vector<std::size_t> other_rows;
  for (std::size_t r = 0; r < a.m; ++r) {
    if (a.at(r, 0) == a.at(r, 1)) {
      agree_rows.push_back(r);
    } else {
      other_rows.push_back(r);
    }
  }

  BernoulliWitness w;
  w.x.assign(a.n, 0.0);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  if (agree_rows.size() >= q) {
    // columns agree on I: (e1 - e2)/sqrt(2) cancels there
    w.x[0] = inv_sqrt2;
    w.x[1] = -inv_sqrt2;
    w.rows = std::move(agree_rows);
  } else {
    // complement has >= q rows by pigeonhole and the columns anti-agree there
    w.x[0] = inv_sqrt2;
    w.x[1] = inv_sqrt2;
    w.rows = std::move(other_rows);
  }

  double energy = 0.0;
  for (std::size_t r : w.rows) {
    double v = kernels::dot(a.row(r), w.x.data(), a.n);
    energy += v * v;
  }
  w.energy = energy;
  return w;
}

double admissible_t(double theta_minus, double theta_plus) {
  if (!(theta_minus > 0.0 && theta_minus < 2.0 && theta_plus > 0.0 && theta_plus < 2.0)) {
    fail_precondition("admissible_t: levels must lie strictly inside (0, 2)");
  }
  double dm = 2.0 * theta_minus - theta_minus * theta_minus;
  double dp = 2.0 * theta_plus - theta_plus * theta_plus;
  return std::max(1.0 / dm, 1.0 / dp);
}

double cai_zhang_threshold(double t) {
  if (!(t > 4.0 / 3.0)) fail_precondition("cai_zhang_threshold: requires t > 4/3");
  return std::sqrt(1.0 - 1.0 / t);
}

double net_cardinality_log_bound(std::size_t tk, double eps) {
  if (tk < 1) fail_precondition("net_cardinality_log_bound: tk must be positive");
  if (!(eps > 0.0 && eps < 1.0)) {
    fail_precondition("net_cardinality_log_bound: eps must lie in (0, 1)");
  }
  return static_cast<double>(tk) * std::log(12.0 / eps);
}

double measurement_count_bound(double t, std::size_t k, std::size_t n, double c, double eps) {
  if (!(t > 0.0) || k < 1 || n < 1) {
    fail_precondition("measurement_count_bound: need t > 0 and positive k, n");
  }
  if (!(c > 0.0)) fail_precondition("measurement_count_bound: constant c must be positive");
  if (!(eps > 0.0 && eps < 1.0)) {
    fail_precondition("measurement_count_bound: eps must lie in (0, 1)");
  }
  const double tk = t * static_cast<double>(k);
  const double en = std::numbers::e * static_cast<double>(n);
  return (2.0 / c) * tk * (std::log(en / tk) + std::log(12.0 / eps));
}

}  // namespace phasecs
