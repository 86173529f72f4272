#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace phasecs {

enum class Ensemble { Gaussian, Bernoulli };

const char* ensemble_name(Ensemble e);

// Dense row-major measurement matrix. Gaussian entries are N(0, 1/m);
// Bernoulli entries are +-1/sqrt(m), with the magnitude computed once so
// opposite entries cancel exactly in floating point.
struct SensingMatrix {
  std::size_t m = 0;
  std::size_t n = 0;
  Ensemble ensemble = Ensemble::Gaussian;
  std::uint64_t seed = 0;
  std::vector<double> entries;  // row-major, m*n

  const double* row(std::size_t r) const { return entries.data() + r * n; }
  double at(std::size_t r, std::size_t c) const { return entries[r * n + c]; }
  std::vector<double> column(std::size_t c) const;
};

enum class ValueDist { UnitGaussian, Rademacher };

const char* value_dist_name(ValueDist d);

struct SparseSignal {
  std::size_t n = 0;
  std::vector<std::size_t> support;  // strictly increasing
  std::vector<double> values;        // aligned with support, never exactly zero

  std::size_t k() const { return support.size(); }
  std::vector<double> dense() const;
};

struct Measurements {
  std::vector<double> b;  // b_j = |<a_j, x>| >= 0
  std::string matrix_fingerprint;

  std::size_t m() const { return b.size(); }
};

struct SignPattern {
  std::vector<std::int8_t> eps;  // entries exactly +1 or -1

  std::size_t m() const { return eps.size(); }
};

// Regenerating with identical (m, n, ensemble, seed) reproduces entries
// bit-for-bit. Dimensions are capped at 2^20 each.
SensingMatrix gen_matrix(std::size_t m, std::size_t n, Ensemble ensemble, std::uint64_t seed);

// Support uniform over k-subsets; values i.i.d. from value_dist, resampled in
// the zero-probability event of an exact zero.
SparseSignal gen_sparse_signal(std::size_t n, std::size_t k, ValueDist value_dist,
                               std::uint64_t seed);

Measurements phaseless_measure(const SensingMatrix& a, const SparseSignal& x);

// Same contract for an already-dense vector (internal callers).
Measurements phaseless_measure_dense(const SensingMatrix& a, const std::vector<double>& x);

std::vector<double> apply_signs(const Measurements& b, const SignPattern& eps);

// Stable identity of a matrix: hashes the construction parameters plus the
// generator id, since those regenerate the entries exactly.
std::string matrix_fingerprint(const SensingMatrix& a);

}  // namespace phasecs
