#include "phasecs/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "phasecs/errors.hpp"
#include "phasecs/kernels.hpp"
#include "phasecs/rng.hpp"
#include "phasecs/version.hpp"

namespace phasecs {

namespace {

constexpr std::size_t kDimCap = 1u << 20;

void check_dims(std::size_t m, std::size_t n) {
  if (m < 1 || n < 1) fail_precondition("matrix dimensions must be positive");
  if (m > kDimCap || n > kDimCap) fail_precondition("matrix dimension exceeds 2^20 cap");
}

}  // namespace

const char* ensemble_name(Ensemble e) {
  return e == Ensemble::Gaussian ? "gaussian" : "bernoulli";
}

const char* value_dist_name(ValueDist d) {
  return d == ValueDist::UnitGaussian ? "unit_gaussian" : "rademacher";
}

std::vector<double> SensingMatrix::column(std::size_t c) const {
  std::vector<double> col(m);
  for (std::size_t r = 0; r < m; ++r) col[r] = entries[r * n + c];
  return col;
}

SensingMatrix gen_matrix(std::size_t m, std::size_t n, Ensemble ensemble, std::uint64_t seed) {
  check_dims(m, n);
  SensingMatrix a;
  a.m = m;
  a.n = n;
  a.ensemble = ensemble;
  a.seed = seed;
  a.entries.resize(m * n);
  const double s = 1.0 / std::sqrt(static_cast<double>(m));
  const std::uint64_t stream = rng::stream_id(rng::Domain::Matrix, 0);
  if (ensemble == Ensemble::Gaussian) {
    rng::GaussianStream g(seed, stream);
    for (std::size_t e = 0; e < a.entries.size(); ++e) a.entries[e] = s * g.at(e);
  } else {
    rng::UniformStream u(seed, stream);
    for (std::size_t e = 0; e < a.entries.size(); ++e) {
      a.entries[e] = (u.word(e) >> 63) ? s : -s;
    }
  }
  return a;
}

SparseSignal gen_sparse_signal(std::size_t n, std::size_t k, ValueDist value_dist,
                               std::uint64_t seed) {
  if (n < 1) fail_precondition("signal dimension must be positive");
  if (k < 1 || k > n) fail_precondition("sparsity must satisfy 1 <= k <= n");
  if (n > kDimCap) fail_precondition("signal dimension exceeds 2^20 cap");

  SparseSignal x;
  x.n = n;

  // partial Fisher-Yates: first k slots of a virtual shuffle of [0, n)
  rng::UniformStream u(seed, rng::stream_id(rng::Domain::SignalSupport, 0));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + u.below(n - i, i);
    std::swap(idx[i], idx[j]);
  }
  x.support.assign(idx.begin(), idx.begin() + k);
  std::sort(x.support.begin(), x.support.end());

  x.values.resize(k);
  if (value_dist == ValueDist::UnitGaussian) {
    rng::GaussianStream g(seed, rng::stream_id(rng::Domain::SignalValues, 0));
    for (std::size_t i = 0; i < k; ++i) {
      double v = g.next();
      while (v == 0.0) v = g.next();
      x.values[i] = v;
    }
  } else {
    rng::UniformStream bits(seed, rng::stream_id(rng::Domain::SignalValues, 0));
    for (std::size_t i = 0; i < k; ++i) x.values[i] = (bits.word(i) >> 63) ? 1.0 : -1.0;
  }
  return x;
}

std::vector<double> SparseSignal::dense() const {
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) v[support[i]] = values[i];
  return v;
}

Measurements phaseless_measure_dense(const SensingMatrix& a, const std::vector<double>& x) {
  if (x.size() != a.n) fail_precondition("measurement: signal dimension mismatch");
  Measurements out;
  out.b.resize(a.m);
  kernels::matvec(a.entries.data(), a.m, a.n, x.data(), out.b.data());
  kernels::abs_to(out.b.data(), out.b.data(), a.m);
  out.matrix_fingerprint = matrix_fingerprint(a);
  return out;
}

Measurements phaseless_measure(const SensingMatrix& a, const SparseSignal& x) {
  if (x.n != a.n) fail_precondition("measurement: signal dimension mismatch");
  return phaseless_measure_dense(a, x.dense());
}

std::vector<double> apply_signs(const Measurements& b, const SignPattern& eps) {
  if (b.b.size() != eps.eps.size()) fail_precondition("apply_signs: length mismatch");
  std::vector<double> y(b.b.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    y[j] = eps.eps[j] >= 0 ? b.b[j] : -b.b[j];
  }
  return y;
}

std::string matrix_fingerprint(const SensingMatrix& a) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "phasecs.matrix.v%d|%s|m=%zu|n=%zu|ensemble=%s|seed=%llu",
                kSchemaVersion, kRngId, a.m, a.n, ensemble_name(a.ensemble),
                static_cast<unsigned long long>(a.seed));
  // FNV-1a over the canonical description
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* p = buf; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 0x100000001b3ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return std::string(hex);
}

}  // namespace phasecs
