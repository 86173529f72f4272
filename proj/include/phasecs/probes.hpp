#pragma once

#include <cstdint>
#include <vector>

#include "phasecs/ensembles.hpp"

namespace phasecs {

// Monte Carlo check of one proved tail inequality. `passed` compares the
// empirical failure frequency against the analytic bound plus three binomial
// standard errors; a bound at or above 1 proves nothing and is flagged
// vacuous (such checks pass by construction).
struct TailReport {
  std::size_t m = 0;
  double epsilon_or_t = 0.0;
  std::size_t trials = 0;
  double empirical_prob = 0.0;
  double analytic_bound = 0.0;
  double std_error = 0.0;
  bool passed = false;
  bool vacuous = false;
  std::uint64_t seed = 0;
};

struct EmbeddingReport {
  std::size_t num_points = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  // min over pairs of (smallest-half energy of f(u)-f(v)) / ||u-v||^2: the
  // worst distance distortion after deleting the least favorable half of the
  // output coordinates
  double min_half_ratio = 0.0;
  // max over pairs of ||f(u)-f(v)||^2 / ||u-v||^2 (no erasure)
  double max_full_ratio = 0.0;
  std::size_t coincident_pairs = 0;  // u = v pairs, excluded from the ratios
  std::uint64_t seed = 0;
};

// Tail of | ||A e1||^2 - 1 | >= epsilon for Gaussian A with N(0,1/m) entries,
// against 2 exp(-m (eps^2/4 - eps^3/6)). One Gaussian matrix column is drawn
// per trial (the rest of A never touches e1).
TailReport conc_tail_mc(std::size_t m, double epsilon, std::size_t trials, std::uint64_t seed,
                        int threads = 1);

// Two-sided event (mu_m - t) <= F(X)/sqrt(m) <= (mu_m + t) for standard
// normal X, against 2 exp(-m t^2 / 2). mu_m itself is only known by Monte
// Carlo, so the event is evaluated at mu_hat +- 3 standard errors and the
// unfavorable end is reported.
TailReport half_conc_mc(std::size_t m, double t, std::size_t trials, std::uint64_t seed,
                        int threads = 1);

struct StrongConcReport {
  TailReport tail;
  double min_half_energy = 0.0;  // empirical minimum of F(A x)^2 across trials
};

// Event F(A x)^2 >= nu0()^2/4 for unit x and Gaussian A, against
// 2 exp(-nu0()^2 m / 8). The bound only bites for very large m; at practical
// sizes it is vacuous and the interesting output is the observed minimum,
// which sits orders of magnitude above the guarantee. n is carried as
// metadata (rotation invariance makes x = e1 representative).
StrongConcReport strong_conc_mc(std::size_t m, std::size_t n, std::size_t trials,
                                std::uint64_t seed, int threads = 1);

struct JlEmbedding {
  SensingMatrix map;  // Gaussian with N(0,1/m) entries
  std::vector<std::vector<double>> embedded;
};

// Linear random projection f(u) = A u of >= 2 points.
JlEmbedding jl_embed(const std::vector<std::vector<double>>& points, std::size_t m,
                     std::uint64_t seed);

// Distortion report over all pairs. The worst-case half-erasure energy of
// each difference is computed exactly through the smallest-half identity (no
// subset enumeration).
EmbeddingReport jl_verify(const std::vector<std::vector<double>>& points,
                          const std::vector<std::vector<double>>& embedded);

EmbeddingReport jl_verify(const std::vector<std::vector<double>>& points,
                          const JlEmbedding& embedding);

}  // namespace phasecs
