#pragma once

#include <cstdint>
#include <vector>

namespace phasecs {

// F(x): the Euclidean norm of the ceil(m/2) smallest-magnitude entries of x.
// Equivalently the worst-case energy left after erasing any half of the
// coordinates. smallest_subset_norm generalizes the kept count to q.

double smallest_half_norm(const std::vector<double>& x);
double smallest_subset_norm(const std::vector<double>& x, std::size_t q);

// Squared versions; the isometry code consumes energies directly.
double smallest_half_energy(const double* x, std::size_t m);
double smallest_subset_energy(const double* x, std::size_t m, std::size_t q);

inline std::size_t half_count(std::size_t m) { return (m + 1) / 2; }

struct MuEstimate {
  std::size_t m = 0;
  std::size_t trials = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of E[F(X)]/sqrt(m) for X a standard normal m-vector.
// Trials are indexed random-access draws, so the result is independent of the
// thread count.
MuEstimate estimate_mu(std::size_t m, std::size_t trials, std::uint64_t seed, int threads = 1);

// Universal lower bound for the mu_m sequence:
// (1/(32e)) * sqrt(pi/2) * (1 - 1/(4 sqrt(pi))).
double nu0();

// Lower bound on the expected k-th smallest magnitude among m i.i.d. draws
// whose density near zero is bounded by alpha:
// c_alpha * max_{1<=j<=k} (k+1-j)/(m-j+1), c_alpha = (1/(2 e alpha)) (1 - 1/(4 sqrt(pi))).
double order_stat_lower_bound(std::size_t k, std::size_t m, double alpha);

}  // namespace phasecs
