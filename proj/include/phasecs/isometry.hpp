#pragma once

#include <cstdint>
#include <vector>

#include "phasecs/ensembles.hpp"

namespace phasecs {

enum class IsometryMethod { ExactSmall, Randomized };

const char* isometry_method_name(IsometryMethod m);

// Two-sided energy levels over k-sparse unit vectors where the lower side is
// taken after erasing the worst half of the rows. ExactSmall values are exact
// over all supports and all half-size row subsets. Randomized values are
// sampling bounds: theta_minus is an upper bound on the true lower level and
// theta_plus a lower bound on the true upper level.
struct SripEstimate {
  std::size_t k = 0;
  double theta_minus = 0.0;
  double theta_plus = 0.0;
  IsometryMethod method = IsometryMethod::ExactSmall;
  std::uint64_t supports_examined = 0;
  std::uint64_t samples_per_support = 0;
  std::uint64_t seed = 0;
};

struct RipEstimate {
  std::size_t k = 0;
  double delta = 0.0;
  IsometryMethod method = IsometryMethod::ExactSmall;
};

struct BernoulliWitness {
  std::vector<double> x;            // unit vector, exactly 2 nonzeros
  std::vector<std::size_t> rows;    // row set I with |I| >= ceil(m/2)
  double energy = 0.0;              // sum over I of <a_r, x>^2, exactly 0
};

// F(Ax)^2: the smallest achievable ||A_I x||^2 over row subsets keeping at
// least half the rows (the minimizer keeps the smallest-magnitude entries).
double min_subset_energy(const SensingMatrix& a, const std::vector<double>& x);

// Exact enumeration over all k-supports and all ceil(m/2)-row subsets.
// Supports are first scanned for sign-agreement certificates (two columns
// agreeing, or anti-agreeing, on at least half the rows force the lower level
// to exactly zero with no enumeration); the SVD budget counts only supports
// that survive the scan. Refuses with a cost estimate above `budget` SVDs.
SripEstimate srip_exact_small(const SensingMatrix& a, std::size_t k,
                              std::uint64_t budget = 100000000ULL);

// Sampling surrogate: random k-supports, random unit vectors on each support.
SripEstimate srip_randomized(const SensingMatrix& a, std::size_t k, std::size_t n_supports,
                             std::size_t n_vectors, std::uint64_t seed);

// Exact restricted-isometry constant over all k-column submatrices.
RipEstimate rip_exact_small(const SensingMatrix& a, std::size_t k,
                            std::uint64_t budget = 100000000ULL);

// For a sign matrix, the first two columns agree or anti-agree on at least
// half the rows; the corresponding two-sparse unit vector has exactly zero
// energy there. This is the constructive obstruction to the two-sided
// property at sparsity 2.
BernoulliWitness bernoulli_witness(const SensingMatrix& a);

// max{1/(2t_minus - t_minus^2), 1/(2t_plus - t_plus^2)} for levels in (0, 2).
double admissible_t(double theta_minus, double theta_plus);

// sqrt(1 - 1/t), the strict isometry-constant threshold for exact l1
// recovery at order t*k; valid for t > 4/3.
double cai_zhang_threshold(double t);

// log of the covering-number bound (12/eps)^(tk).
double net_cardinality_log_bound(std::size_t tk, double eps);

// (2/c) * t*k * (log(e*n/(t*k)) + log(12/eps)): the sufficient measurement
// count for the sampling argument with absolute constant c.
double measurement_count_bound(double t, std::size_t k, std::size_t n, double c, double eps);

}  // namespace phasecs
