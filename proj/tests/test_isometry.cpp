#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "phasecs/errors.hpp"
#include "phasecs/halfnorm.hpp"
#include "phasecs/isometry.hpp"
#include "phasecs/kernels.hpp"
#include "phasecs/rng.hpp"
#include "support/jacobi_eig.hpp"
#include "support/reference.hpp"

using namespace phasecs;

namespace {

std::vector<double> dense_from(const SensingMatrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.m);
  kernels::matvec(a.entries.data(), a.m, a.n, x.data(), y.data());
  return y;
}

SensingMatrix diagonal_matrix(std::size_t n, double value) {
  SensingMatrix a;
  a.m = n;
  a.n = n;
  a.entries.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a.entries[i * n + i] = value;
  return a;
}

}  // namespace

TEST_CASE("min subset energy is the half-norm identity") {
  SensingMatrix a = gen_matrix(9, 6, Ensemble::Gaussian, 11);

  std::vector<double> zero(6, 0.0);
  CHECK(min_subset_energy(a, zero) == 0.0);

  for (std::uint64_t rep = 0; rep < 25; ++rep) {
    rng::GaussianStream g(rep, rng::stream_id(rng::Domain::Misc, 5));
    std::vector<double> x(6);
    for (std::size_t i = 0; i < 6; ++i) x[i] = g.at(i);
    double fast = min_subset_energy(a, x);
    CHECK(fast == doctest::Approx(testsupport::smallest_subset_energy_ref(dense_from(a, x)))
                      .epsilon(1e-12));

    std::vector<double> x2 = x;
    for (double& v : x2) v *= 2.0;
    CHECK(min_subset_energy(a, x2) == doctest::Approx(4.0 * fast).epsilon(1e-13));
  }

  std::vector<double> wrong(5, 1.0);
  CHECK_THROWS_AS(min_subset_energy(a, wrong), std::invalid_argument);
}

TEST_CASE("exact levels at sparsity one are column statistics") {
  SensingMatrix a = gen_matrix(7, 5, Ensemble::Gaussian, 21);
  SripEstimate est = srip_exact_small(a, 1);

  double min_half = 1e300, max_full = 0.0;
  for (std::size_t c = 0; c < a.n; ++c) {
    std::vector<double> col = a.column(c);
    min_half = std::min(min_half,
                        smallest_subset_energy(col.data(), col.size(), half_count(a.m)));
    max_full = std::max(max_full, testsupport::sumsq_ref(col.data(), col.size()));
  }
  CHECK(est.theta_minus == doctest::Approx(min_half).epsilon(1e-12));
  CHECK(est.theta_plus == doctest::Approx(max_full).epsilon(1e-12));
  CHECK(est.method == IsometryMethod::ExactSmall);
}

TEST_CASE("sign matrices always lose the order-two lower level") {
  for (std::uint64_t seed : {1ULL, 17ULL, 400ULL}) {
    SensingMatrix a = gen_matrix(9, 5, Ensemble::Bernoulli, seed);
    SripEstimate est = srip_exact_small(a, 2);
    CHECK(est.theta_minus == 0.0);
    CHECK(est.theta_plus > 0.0);
  }
}

TEST_CASE("gaussian matrices keep a positive lower level") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SensingMatrix a = gen_matrix(10, 8, Ensemble::Gaussian, 500 + seed);
    SripEstimate est = srip_exact_small(a, 2);
    CHECK(est.theta_minus > 0.0);
    CHECK(est.theta_minus <= est.theta_plus);
  }
}

TEST_CASE("exact level ordering against the isometry constant") {
  SensingMatrix a = gen_matrix(12, 7, Ensemble::Gaussian, 60);
  for (std::size_t k : {1, 2, 3}) {
    SripEstimate s = srip_exact_small(a, k);
    RipEstimate r = rip_exact_small(a, k);
    CHECK(s.theta_minus <= s.theta_plus);
    CHECK(s.theta_plus <= 1.0 + r.delta + 1e-12);
  }
}

TEST_CASE("enumeration refuses over budget") {
  SensingMatrix a = gen_matrix(12, 10, Ensemble::Gaussian, 8);
  CHECK_THROWS_AS(srip_exact_small(a, 3, 10), budget_error);
  CHECK_THROWS_AS(rip_exact_small(a, 3, 5), budget_error);
  try {
    srip_exact_small(a, 3, 10);
  } catch (const budget_error& e) {
    CHECK(e.estimated_cost > e.budget);
    CHECK(e.budget == 10);
  }
}

TEST_CASE("randomized bounds bracket exact values") {
  for (std::uint64_t seed : {3ULL, 9ULL}) {
    SensingMatrix a = gen_matrix(8, 6, Ensemble::Gaussian, seed);
    for (std::size_t k : {1, 2}) {
      SripEstimate exact = srip_exact_small(a, k);
      SripEstimate rand = srip_randomized(a, k, 100, 30, 77 + seed);
      CHECK(rand.method == IsometryMethod::Randomized);
      CHECK(rand.theta_minus >= exact.theta_minus - 1e-12);
      CHECK(rand.theta_plus <= exact.theta_plus + 1e-12);
      CHECK(rand.theta_minus <= rand.theta_plus + 1e-12);
    }
  }
}

TEST_CASE("randomized lower level stays positive in the theorem regime") {
  const std::size_t n = 64, k = 3;
  const std::size_t m =
      4 * static_cast<std::size_t>(std::ceil(k * std::log(static_cast<double>(n) / k))) + 4;
  REQUIRE(m == 44);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SensingMatrix a = gen_matrix(m, n, Ensemble::Gaussian, 900 + seed);
    SripEstimate est = srip_randomized(a, k, 200, 50, seed);
    CHECK(est.theta_minus > 0.0);
  }
}

TEST_CASE("isometry constant on explicit matrices") {
  SensingMatrix eye = diagonal_matrix(4, 1.0);
  CHECK(rip_exact_small(eye, 1).delta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rip_exact_small(eye, 2).delta == doctest::Approx(0.0).epsilon(1e-12));

  SensingMatrix twice = diagonal_matrix(4, 2.0);
  CHECK(rip_exact_small(twice, 1).delta == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("isometry constant matches an independent eigensolver") {
  SensingMatrix a = gen_matrix(20, 10, Ensemble::Gaussian, 4242);
  RipEstimate est = rip_exact_small(a, 2);

  double worst = 0.0;
  for (std::size_t c1 = 0; c1 < a.n; ++c1) {
    for (std::size_t c2 = c1 + 1; c2 < a.n; ++c2) {
      std::vector<double> u = a.column(c1), v = a.column(c2);
      std::vector<double> gram = {
          testsupport::dot_ref(u.data(), u.data(), a.m),
          testsupport::dot_ref(u.data(), v.data(), a.m),
          testsupport::dot_ref(u.data(), v.data(), a.m),
          testsupport::dot_ref(v.data(), v.data(), a.m),
      };
      std::vector<double> ev = testsupport::symmetric_eigenvalues(gram, 2);
      worst = std::max({worst, ev[1] - 1.0, 1.0 - ev[0]});
    }
  }
  CHECK(est.delta == doctest::Approx(worst).epsilon(1e-10));
}

TEST_CASE("witness construction and verification") {
  // rows' first-two-column signs: ++, +-, --, ++
  const double s = 0.5;
  SensingMatrix hand;
  hand.m = 4;
  hand.n = 2;
  hand.ensemble = Ensemble::Bernoulli;
  hand.entries = {s, s, s, -s, -s, -s, s, s};

  BernoulliWitness w = bernoulli_witness(hand);
  CHECK(w.rows == std::vector<std::size_t>{0, 2, 3});
  CHECK(w.x[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(w.x[1] == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(w.energy == 0.0);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::size_t m = 5 + seed % 9;
    SensingMatrix a = gen_matrix(m, 6, Ensemble::Bernoulli, 7000 + seed);
    BernoulliWitness got = bernoulli_witness(a);
    CHECK(got.rows.size() >= half_count(m));
    CHECK(got.energy <= 1e-14);
    CHECK(testsupport::sumsq_ref(got.x.data(), got.x.size()) ==
          doctest::Approx(1.0).epsilon(1e-14));
    double direct = 0.0;
    for (std::size_t r : got.rows) {
      double d = testsupport::dot_ref(a.row(r), got.x.data(), a.n);
      direct += d * d;
    }
    CHECK(direct == 0.0);
    CHECK(srip_exact_small(a, 2).theta_minus == 0.0);
  }

  SensingMatrix g = gen_matrix(4, 3, Ensemble::Gaussian, 1);
  CHECK_THROWS_AS(bernoulli_witness(g), std::invalid_argument);
}

TEST_CASE("admissible order threshold") {
  CHECK(admissible_t(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(admissible_t(0.5, 1.5) == doctest::Approx(4.0 / 3.0));

  for (double theta : {0.3, 0.7, 1.2}) {
    double lo = 1.0 / (2.0 * theta - theta * theta);
    CHECK(admissible_t(theta, 2.0 - theta) == doctest::Approx(lo).epsilon(1e-13));
  }

  CHECK_THROWS_AS(admissible_t(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(admissible_t(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(admissible_t(-0.5, 1.0), std::invalid_argument);
}

TEST_CASE("recovery threshold function") {
  CHECK(cai_zhang_threshold(2.0) == doctest::Approx(std::sqrt(0.5)));
  double prev = 0.0;
  for (double t : {1.5, 2.0, 4.0, 16.0, 1e6}) {
    double v = cai_zhang_threshold(t);
    CHECK(v > prev);
    CHECK(v < 1.0);
    prev = v;
  }
  CHECK_THROWS_AS(cai_zhang_threshold(4.0 / 3.0), std::invalid_argument);
  CHECK_THROWS_AS(cai_zhang_threshold(1.0), std::invalid_argument);
}

TEST_CASE("covering and measurement count bounds") {
  CHECK(net_cardinality_log_bound(1, 0.5) == doctest::Approx(std::log(24.0)));
  CHECK(net_cardinality_log_bound(10, 0.1) == doctest::Approx(10.0 * std::log(120.0)));
  CHECK(net_cardinality_log_bound(10, 0.1) > net_cardinality_log_bound(10, 0.2));
  CHECK_THROWS_AS(net_cardinality_log_bound(10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(net_cardinality_log_bound(10, 1.0), std::invalid_argument);

  const double t = 2.0, c = 0.5, eps = 0.5;
  const std::size_t k = 3, n = 64;
  const double tk = t * static_cast<double>(k);
  const double expected =
      (2.0 / c) * tk * (std::log(std::exp(1.0) * static_cast<double>(n) / tk) + std::log(12.0 / eps));
  CHECK(measurement_count_bound(t, k, n, c, eps) == doctest::Approx(expected).epsilon(1e-13));
}
