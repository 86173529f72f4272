#include "phasecs/probes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "phasecs/errors.hpp"
#include "phasecs/halfnorm.hpp"
#include "phasecs/kernels.hpp"
#include "phasecs/parallel.hpp"
#include "phasecs/rng.hpp"

namespace phasecs {

namespace {

void finish(TailReport& r, std::uint64_t failures) {
  double p = static_cast<double>(failures) / static_cast<double>(r.trials);
  r.empirical_prob = p;
  r.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(r.trials));
  r.vacuous = r.analytic_bound >= 1.0;
  r.passed = p <= r.analytic_bound + 3.0 * r.std_error;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t m, std::size_t trial) {
  return rng::derive_seed(seed, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(trial)});
}

}  // namespace

TailReport conc_tail_mc(std::size_t m, double epsilon, std::size_t trials, std::uint64_t seed,
                        int threads) {
  if (m == 0) fail_precondition("m must be positive");
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) fail_precondition("epsilon must lie in (0,1)");
  if (trials < 1000) fail_precondition("need at least 1000 trials");

  TailReport r;
  r.m = m;
  r.epsilon_or_t = epsilon;
  r.trials = trials;
  r.seed = seed;
  r.analytic_bound =
      2.0 * std::exp(-static_cast<double>(m) * (epsilon * epsilon / 4.0 -
                                                epsilon * epsilon * epsilon / 6.0));

  // || A e1 ||^2 is the squared norm of one N(0,1/m)^m column
  std::vector<std::uint8_t> fail(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    rng::GaussianStream g(trial_seed(seed, m, t), rng::stream_id(rng::Domain::Trial, t));
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double v = g.at(j);
      s += v * v;
    }
    s /= static_cast<double>(m);
    fail[t] = std::fabs(s - 1.0) >= epsilon ? 1 : 0;
  });
  std::uint64_t failures = 0;
  for (auto f : fail) failures += f;
  finish(r, failures);
  return r;
}

TailReport half_conc_mc(std::size_t m, double t, std::size_t trials, std::uint64_t seed,
                        int threads) {
  if (m == 0) fail_precondition("m must be positive");
  if (!(t >= 0.0)) fail_precondition("t must be nonnegative");
  if (trials < 1000) fail_precondition("need at least 1000 trials");

  // the event's center has no closed form; estimate it on an independent
  // substream and carry its uncertainty through the pass decision
  MuEstimate mu = estimate_mu(m, 100000, rng::derive_seed(seed, {0x6d75}), threads);
  if (t > mu.mean + 3.0 * mu.std_error) fail_precondition("t exceeds the estimated mu_m");

  TailReport r;
  r.m = m;
  r.epsilon_or_t = t;
  r.trials = trials;
  r.seed = seed;
  r.analytic_bound = 2.0 * std::exp(-static_cast<double>(m) * t * t / 2.0);

  const double lo_center = mu.mean - 3.0 * mu.std_error;
  const double hi_center = mu.mean + 3.0 * mu.std_error;
  std::vector<std::uint8_t> fail_lo(trials, 0), fail_hi(trials, 0);
  parallel_for(trials, threads, [&](std::size_t tr) {
    rng::GaussianStream g(trial_seed(seed, m, tr), rng::stream_id(rng::Domain::Trial, tr));
    std::vector<double> x(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = g.at(j);
    double s = std::sqrt(smallest_half_energy(x.data(), m) / static_cast<double>(m));
    fail_lo[tr] = std::fabs(s - lo_center) > t ? 1 : 0;
    fail_hi[tr] = std::fabs(s - hi_center) > t ? 1 : 0;
  });
  std::uint64_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    lo += fail_lo[i];
    hi += fail_hi[i];
  }
  finish(r, std::max(lo, hi));
  return r;
}

StrongConcReport strong_conc_mc(std::size_t m, std::size_t n, std::size_t trials,
                                std::uint64_t seed, int threads) {
  if (m == 0 || n == 0) fail_precondition("dimensions must be positive");
  if (trials < 1000) fail_precondition("need at least 1000 trials");

  StrongConcReport out;
  TailReport& r = out.tail;
  r.m = m;
  r.epsilon_or_t = 0.0;
  r.trials = trials;
  r.seed = seed;
  const double level = nu0() * nu0() / 4.0;
  r.analytic_bound = 2.0 * std::exp(-nu0() * nu0() * static_cast<double>(m) / 8.0);

  // A x for unit x is one N(0,1/m)^m column; n only labels the ambient space
  std::vector<std::uint8_t> fail(trials, 0);
  std::vector<double> mins(trials, 0.0);
  const double inv_m = 1.0 / static_cast<double>(m);
  parallel_for(trials, threads, [&](std::size_t t) {
    rng::GaussianStream g(trial_seed(seed, m, t), rng::stream_id(rng::Domain::Trial, t));
    std::vector<double> y(m);
    for (std::size_t j = 0; j < m; ++j) y[j] = g.at(j);
    double energy = smallest_half_energy(y.data(), m) * inv_m;
    mins[t] = energy;
    fail[t] = energy < level ? 1 : 0;
  });
  std::uint64_t failures = 0;
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trials; ++i) {
    failures += fail[i];
    lowest = std::min(lowest, mins[i]);
  }
  finish(r, failures);
  out.min_half_energy = lowest;
  return out;
}

JlEmbedding jl_embed(const std::vector<std::vector<double>>& points, std::size_t m,
                     std::uint64_t seed) {
  if (points.size() < 2) fail_precondition("need at least two points");
  if (m == 0) fail_precondition("m must be positive");
  const std::size_t n = points[0].size();
  if (n == 0) fail_precondition("points must have positive dimension");
  for (const auto& p : points)
    if (p.size() != n) fail_precondition("points must share one dimension");

  JlEmbedding out;
  out.map = gen_matrix(m, n, Ensemble::Gaussian, seed);
  out.embedded.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.embedded[i].resize(m);
    kernels::matvec(out.map.entries.data(), m, n, points[i].data(), out.embedded[i].data());
  }
  return out;
}

EmbeddingReport jl_verify(const std::vector<std::vector<double>>& points,
                          const std::vector<std::vector<double>>& embedded) {
  if (points.size() != embedded.size()) fail_precondition("point lists must match");
  if (points.size() < 2) fail_precondition("need at least two points");
  const std::size_t n = points[0].size();
  const std::size_t m = embedded[0].size();
  for (const auto& p : points)
    if (p.size() != n) fail_precondition("points must share one dimension");
  for (const auto& e : embedded)
    if (e.size() != m) fail_precondition("embedded points must share one dimension");

  EmbeddingReport rep;
  rep.num_points = points.size();
  rep.n = n;
  rep.m = m;
  rep.min_half_ratio = std::numeric_limits<double>::infinity();
  rep.max_full_ratio = 0.0;

  std::vector<double> du(n), dv(m);
  bool any = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      for (std::size_t c = 0; c < n; ++c) du[c] = points[i][c] - points[j][c];
      double dist2 = kernels::sumsq(du.data(), n);
      if (dist2 == 0.0) {
        ++rep.coincident_pairs;
        continue;
      }
      for (std::size_t c = 0; c < m; ++c) dv[c] = embedded[i][c] - embedded[j][c];
      double full = kernels::sumsq(dv.data(), m);
      double half = smallest_half_energy(dv.data(), m);
      rep.min_half_ratio = std::min(rep.min_half_ratio, half / dist2);
      rep.max_full_ratio = std::max(rep.max_full_ratio, full / dist2);
      any = true;
    }
  }
  if (!any) {
    // every pair coincided; ratios are undefined, report zeros
    rep.min_half_ratio = 0.0;
    rep.max_full_ratio = 0.0;
  }
  return rep;
}

EmbeddingReport jl_verify(const std::vector<std::vector<double>>& points,
                          const JlEmbedding& embedding) {
  EmbeddingReport rep = jl_verify(points, embedding.embedded);
  rep.seed = embedding.map.seed;
  return rep;
}

}  // namespace phasecs
