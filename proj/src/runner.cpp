#include "phasecs/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>

#include "phasecs/errors.hpp"
#include "phasecs/halfnorm.hpp"
#include "phasecs/isometry.hpp"
#include "phasecs/kernels.hpp"
#include "phasecs/parallel.hpp"
#include "phasecs/probes.hpp"
#include "phasecs/recovery.hpp"
#include "phasecs/rng.hpp"
#include "phasecs/serialize.hpp"
#include "phasecs/version.hpp"

namespace phasecs::runner {

namespace {

using serialize::format_double;
using serialize::json;

constexpr ExperimentKind kAllKinds[] = {
    ExperimentKind::Recover,       ExperimentKind::Oracle,  ExperimentKind::Srip,
    ExperimentKind::Rip,           ExperimentKind::Mu,      ExperimentKind::Concentration,
    ExperimentKind::Jl,            ExperimentKind::PhaseTransition,
    ExperimentKind::BernoulliWitness,
};

std::uint64_t tag_of(ExperimentKind k) { return static_cast<std::uint64_t>(k) + 1; }

std::size_t get_size(const json& p, const char* key) {
  return p.at(key).get<std::size_t>();
}

int get_int(const json& p, const char* key) { return p.at(key).get<int>(); }

double get_real(const json& p, const char* key) { return p.at(key).get<double>(); }

std::string get_str(const json& p, const char* key) {
  return p.at(key).get<std::string>();
}

std::vector<std::size_t> get_grid(const json& p, const char* key) {
  return p.at(key).get<std::vector<std::size_t>>();
}

Ensemble parse_ensemble(const std::string& s) {
  if (s == "gaussian") return Ensemble::Gaussian;
  if (s == "bernoulli") return Ensemble::Bernoulli;
  fail_precondition("unknown ensemble: " + s);
}

ValueDist parse_dist(const std::string& s) {
  if (s == "unit_gaussian") return ValueDist::UnitGaussian;
  if (s == "rademacher") return ValueDist::Rademacher;
  fail_precondition("unknown value distribution: " + s);
}

std::string dump_doc(const json& j) { return j.dump(2) + "\n"; }

// threads never change any emitted number, so they stay out of the echoed
// config to keep bytes identical across machines
json echo_params(const json& parameters) {
  json p = parameters;
  p.erase("threads");
  return p;
}

void emit(RunResult& rr, const std::string& dir, const std::string& name,
          const std::string& content) {
  std::filesystem::path p = std::filesystem::path(dir) / name;
  serialize::write_file(p.string(), content);
  rr.files.push_back(p.string());
}

// CSV files carry the same self-description as the JSON envelope, as a
// comment line most readers can skip
std::string csv_doc(const ExperimentConfig& cfg, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::string preamble = "# schema_version=" + std::to_string(kSchemaVersion) +
                         " kind=" + kind_name(cfg.kind) + " rng=" + kRngId +
                         " master_seed=" + std::to_string(cfg.master_seed) +
                         " parameters=" + echo_params(cfg.parameters).dump() + "\n";
  return preamble + serialize::csv_table(header, rows);
}

// shared sweep schema: one grid point per row
const std::vector<std::string> kSweepHeader = {"m",         "n",     "param",  "trials",
                                               "empirical", "bound", "passed", "seed"};

std::vector<std::string> sweep_row(std::size_t m, std::size_t n, double param,
                                   std::size_t trials, double empirical, double bound,
                                   bool passed, std::uint64_t seed) {
  return {std::to_string(m),        std::to_string(n),
          format_double(param),     std::to_string(trials),
          format_double(empirical), format_double(bound),
          passed ? "true" : "false", std::to_string(seed)};
}

void run_mu(const ExperimentConfig& cfg, const std::string& dir, RunResult& rr) {
  auto grid = get_grid(cfg.parameters, "m_grid");
  std::size_t trials = get_size(cfg.parameters, "trials");
  int threads = get_int(cfg.parameters, "threads");
  if (grid.empty()) fail_precondition("m_grid must be nonempty");

  const double bound = nu0();
  json estimates = json::array();
  std::vector<std::vector<std::string>> rows;
  bool all = true;
  for (std::size_t m : grid) {
    std::uint64_t seed = rng::derive_seed(cfg.master_seed, {tag_of(cfg.kind), m});
    MuEstimate e = estimate_mu(m, trials, seed, threads);
    double lower = e.mean - 3.0 * e.std_error;
    bool passed = lower >= bound;
    all = all && passed;
    json je = serialize::to_json(e);
    je["lower_3se"] = lower;
    je["passed"] = passed;
    estimates.push_back(je);
    rows.push_back(sweep_row(m, 0, 0.0, trials, lower, bound, passed, seed));
  }
  json results{{"bound", bound}, {"all_passed", all}, {"estimates", estimates}};
  emit(rr, dir, "mu.json",
       dump_doc(serialize::envelope(kind_name(cfg.kind), cfg.master_seed,
                                    echo_params(cfg.parameters), results)));
  emit(rr, dir, "mu.csv", csv_doc(cfg, kSweepHeader, rows));
  if (!all) {
    rr.exit_code = 3;
    rr.message = "smallest-half mean dropped below its proved lower bound";
  }
}

void run_conc(const ExperimentConfig& cfg, const std::string& dir, RunResult& rr) {
  const json& p = cfg.parameters;
  int threads = get_int(p, "threads");
  const std::uint64_t tag = tag_of(cfg.kind);
  bool all = true;

  json tail = json::array();
  std::vector<std::vector<std::string>> tail_rows;
  auto tail_ms = get_grid(p, "tail_ms");
  auto tail_eps = p.at("tail_epsilons").get<std::vector<double>>();
  std::size_t tail_trials = get_size(p, "tail_trials");
  for (std::size_t m : tail_ms) {
    for (std::size_t e = 0; e < tail_eps.size(); ++e) {
      std::uint64_t seed = rng::derive_seed(cfg.master_seed, {tag, 1, m, e});
      TailReport r = conc_tail_mc(m, tail_eps[e], tail_trials, seed, threads);
      all = all && r.passed;
      tail.push_back(serialize::to_json(r));
      tail_rows.push_back(sweep_row(m, 0, r.epsilon_or_t, r.trials, r.empirical_prob,
                                    r.analytic_bound, r.passed, seed));
    }
  }

  json half = json::array();
  std::vector<std::vector<std::string>> half_rows;
  auto half_ms = get_grid(p, "half_ms");
  auto half_ts = p.at("half_ts").get<std::vector<double>>();
  std::size_t half_trials = get_size(p, "half_trials");
  for (std::size_t m : half_ms) {
    for (std::size_t t = 0; t < half_ts.size(); ++t) {
      std::uint64_t seed = rng::derive_seed(cfg.master_seed, {tag, 2, m, t});
      TailReport r = half_conc_mc(m, half_ts[t], half_trials, seed, threads);
      all = all && r.passed;
      half.push_back(serialize::to_json(r));
      half_rows.push_back(sweep_row(m, 0, r.epsilon_or_t, r.trials, r.empirical_prob,
                                    r.analytic_bound, r.passed, seed));
    }
  }

  std::size_t strong_m = get_size(p, "strong_m");
  std::size_t strong_n = get_size(p, "strong_n");
  std::size_t strong_trials = get_size(p, "strong_trials");
  std::uint64_t strong_seed = rng::derive_seed(cfg.master_seed, {tag, 3, strong_m, 0});
  StrongConcReport sr = strong_conc_mc(strong_m, strong_n, strong_trials, strong_seed, threads);
  all = all && sr.tail.passed;
  std::vector<std::vector<std::string>> strong_rows{
      sweep_row(strong_m, strong_n, 0.0, strong_trials, sr.tail.empirical_prob,
                sr.tail.analytic_bound, sr.tail.passed, strong_seed)};

  json results{{"all_passed", all},
               {"tail", tail},
               {"half", half},
               {"strong", serialize::to_json(sr)}};
  emit(rr, dir, "conc.json",
       dump_doc(serialize::envelope(kind_name(cfg.kind), cfg.master_seed, echo_params(p),
                                    results)));
  emit(rr, dir, "conc_tail.csv", csv_doc(cfg, kSweepHeader, tail_rows));
  emit(rr, dir, "conc_half.csv", csv_doc(cfg, kSweepHeader, half_rows));
  emit(rr, dir, "conc_strong.csv", csv_doc(cfg, kSweepHeader, strong_rows));
  if (!all) {
    rr.exit_code = 3;
    rr.message = "a concentration inequality failed its statistical test";
  }
}

void run_jl(const ExperimentConfig& cfg, const std::string& dir, RunResult& rr) {
  const json& p = cfg.parameters;
  std::size_t num_points = get_size(p, "num_points");
  std::size_t n = get_size(p, "n");
  std::size_t m = get_size(p, "m");
  std::size_t runs = get_size(p, "runs");
  double level = get_real(p, "assert_level");
  int threads = get_int(p, "threads");
  if (runs == 0) fail_precondition("runs must be positive");
  if (num_points < 2) fail_precondition("need at least two points");
  const std::uint64_t tag = tag_of(cfg.kind);

  std::vector<EmbeddingReport> reports(runs);
  std::vector<std::uint64_t> run_seeds(runs);
  parallel_for(runs, threads, [&](std::size_t r) {
    std::uint64_t rs = rng::derive_seed(cfg.master_seed, {tag, m, r});
    run_seeds[r] = rs;
    rng::GaussianStream g(rng::derive_seed(rs, {1}),
                          rng::stream_id(rng::Domain::Points, 0));
    std::vector<std::vector<double>> points(num_points, std::vector<double>(n));
    for (std::size_t i = 0; i < num_points; ++i)
      for (std::size_t c = 0; c < n; ++c)
        points[i][c] = g.at(static_cast<std::uint64_t>(i) * n + c);
    JlEmbedding emb = jl_embed(points, m, rng::derive_seed(rs, {2}));
    reports[r] = jl_verify(points, emb);
  });

  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  bool all = true;
  std::size_t passes = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
  for (std::size_t r = 0; r < runs; ++r) {
    const EmbeddingReport& rep = reports[r];
    bool passed = rep.min_half_ratio >= level;
    all = all && passed;
    passes += passed ? 1 : 0;
    lo = std::min(lo, rep.min_half_ratio);
    hi = std::max(hi, rep.min_half_ratio);
    sum += rep.min_half_ratio;
    json jr = serialize::to_json(rep);
    jr["passed"] = passed;
    arr.push_back(jr);
    rows.push_back(sweep_row(m, n, static_cast<double>(r), num_points, rep.min_half_ratio,
                             level, passed, run_seeds[r]));
  }
  json summary{{"assert_level", level},
               {"runs", runs},
               {"passes", passes},
               {"min_half_ratio_min", lo},
               {"min_half_ratio_mean", sum / static_cast<double>(runs)},
               {"min_half_ratio_max", hi}};
  json results{{"all_passed", all}, {"summary", summary}, {"reports", arr}};
  emit(rr, dir, "jl.json",
       dump_doc(serialize::envelope(kind_name(cfg.kind), cfg.master_seed, echo_params(p),
                                    results)));
  emit(rr, dir, "jl.csv", csv_doc(cfg, kSweepHeader, rows));
  if (!all) {
    rr.exit_code = 3;
    rr.message = "an embedding fell below the asserted half-erasure level";
  }
}

void run_witness(const ExperimentConfig& cfg, const std::string& dir, RunResult& rr) {
  const json& p = cfg.parameters;
  std::size_t n = get_size(p, "n");
  auto grid = get_grid(p, "m_grid");
  std::size_t seeds = get_size(p, "seeds");
  std::uint64_t budget = p.at("budget").get<std::uint64_t>();
  int threads = get_int(p, "threads");
  if (grid.empty() || seeds == 0) fail_precondition("m_grid and seeds must be nonempty");
  const std::uint64_t tag = tag_of(cfg.kind);

  struct Case {
    std::size_t m = 0;
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double energy = 0.0;
    double theta_minus = 0.0;
    std::size_t rows_kept = 0;
    bool verified = false;
  };
  std::vector<Case> cases(grid.size() * seeds);
  parallel_for(cases.size(), threads, [&](std::size_t idx) {
    Case& c = cases[idx];
    c.m = grid[idx / seeds];
    c.index = idx % seeds;
    c.seed = rng::derive_seed(cfg.master_seed, {tag, c.m, c.index});
    SensingMatrix a = gen_matrix(c.m, n, Ensemble::Bernoulli, c.seed);
    BernoulliWitness w = bernoulli_witness(a);
    // re-derive the kept-row energy from the raw matrix instead of trusting
    // the construction
    double energy = 0.0;
    for (std::size_t r : w.rows) {
      double d = kernels::dot(a.row(r), w.x.data(), n);
      energy += d * d;
    }
    c.energy = energy;
    c.rows_kept = w.rows.size();
    SripEstimate est = srip_exact_small(a, 2, budget);
    c.theta_minus = est.theta_minus;
    double norm2 = kernels::sumsq(w.x.data(), n);
    c.verified = w.rows.size() >= half_count(c.m) && energy <= 1e-14 &&
                 std::fabs(norm2 - 1.0) <= 1e-12 && est.theta_minus == 0.0;
  });

  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  bool all = true;
  for (const Case& c : cases) {
    all = all && c.verified;
    arr.push_back(json{{"m", c.m},
                       {"trial", c.index},
                       {"seed", c.seed},
                       {"energy", c.energy},
                       {"rows_kept", c.rows_kept},
                       {"theta_minus_order2", c.theta_minus},
                       {"verified", c.verified}});
    rows.push_back(sweep_row(c.m, n, static_cast<double>(c.index), 1, c.energy, 1e-14,
                             c.verified, c.seed));
  }
  json results{{"all_verified", all}, {"cases", arr}};
  emit(rr, dir, "witness.json",
       dump_doc(serialize::envelope(kind_name(cfg.kind), cfg.master_seed, echo_params(p),
                                    results)));
  emit(rr, dir, "witness.csv", csv_doc(cfg, kSweepHeader, rows));
  if (!all) rr.message = "a sign-matrix witness failed verification";
}

void run_srip(const ExperimentConfig& cfg, const std::string& dir, RunResult& rr) {
  const json& p = cfg.parameters;
  std::size_t m = get_size(p, "m"), n = get_size(p, "n"), k = get_size(p, "k");
  Ensemble ens = parse_ensemble(get_str(p, "ensemble"));
  std::string method = get_str(p, "method");
  const std::uint64_t tag = tag_of(cfg.kind);

  SensingMatrix a = gen_matrix(m, n, ens, rng::derive_seed(cfg.master_seed, {tag, m, 0}));
  SripEstimate est;
  if (method == "exact") {
    est = srip_exact_small(a, k, p.at("budget").get<std::uint64_t>());
  } else if (method == "randomized") {
    est = srip_randomized(a, k, get_size(p, "n_supports"), get_size(p, "n_vectors"),
                          rng::derive_seed(cfg.master_seed, {tag, m, 1}));
  } else {
    fail_precondition("method must be exact or randomized");
  }

  json results = serialize::to_json(est);
  results["matrix_fingerprint"] = matrix_fingerprint(a);
  // recovery-order context where the levels admit it
  if (est.theta_minus > 0.0 && est.theta_plus < 2.0 && est.theta_minus <= est.theta_plus) {
    double t = admissible_t(est.theta_minus, est.theta_plus);
    results["admissible_t"] = t;
    if (t > 4.0 / 3.0) results["isometry_threshold_at_t"] = cai_zhang_threshold(t);
  }
  emit(rr, dir, "srip.json",
       dump_doc(serialize::envelope(kind_name(cfg.kind), cfg.master_seed, echo_params(p),
                                    results)));
}

void run_rip(const ExperimentConfig& cfg, const std::string& dir, RunResult& rr) {
  const json& p = cfg.parameters;
  std::size_t m = get_size(p, "m"), n = get_size(p, "n"), k = get_size(p, "k");
  Ensemble ens = parse_ensemble(get_str(p, "ensemble"));
  const std::uint64_t tag = tag_of(cfg.kind);
  SensingMatrix a = gen_matrix(m, n, ens, rng::derive_seed(cfg.master_seed, {tag, m, 0}));
  RipEstimate est = rip_exact_small(a, k, p.at("budget").get<std::uint64_t>());
  json results = serialize::to_json(est);
  results["matrix_fingerprint"] = matrix_fingerprint(a);
  emit(rr, dir, "rip.json",
       dump_doc(serialize::envelope(kind_name(cfg.kind), cfg.master_seed, echo_params(p),
                                    results)));
}

struct TrialRecord {
  std::uint64_t seed = 0;
  double error = 0.0;
  double l1_value = 0.0;
  double feasibility = 0.0;
  SolveStatus status = SolveStatus::MaxIters;
  int iterations = 0;
  int multiplicity = 1;
  bool success = false;
};

void run_recover(const ExperimentConfig& cfg, const std::string& dir, RunResult& rr) {
  const json& p = cfg.parameters;
  std::size_t n = get_size(p, "n"), k = get_size(p, "k"), m = get_size(p, "m");
  Ensemble ens = parse_ensemble(get_str(p, "ensemble"));
  ValueDist dist = parse_dist(get_str(p, "value_dist"));
  std::size_t trials = get_size(p, "trials");
  int restarts = get_int(p, "restarts");
  double threshold = get_real(p, "threshold");
  int threads = get_int(p, "threads");
  if (trials == 0) fail_precondition("trials must be positive");
  const std::uint64_t tag = tag_of(cfg.kind);

  std::vector<TrialRecord> recs(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    std::uint64_t ts = rng::derive_seed(cfg.master_seed, {tag, m, t});
    SensingMatrix a = gen_matrix(m, n, ens, rng::derive_seed(ts, {1}));
    SparseSignal x0 = gen_sparse_signal(n, k, dist, rng::derive_seed(ts, {2}));
    Measurements b = phaseless_measure(a, x0);
    AltMinOptions opts;
    opts.seed = rng::derive_seed(ts, {3});
    opts.threads = 1;  // trials are already parallel
    RecoveryResult res = alt_min_recover(a, b, restarts, opts);
    TrialRecord& rec = recs[t];
    rec.seed = ts;
    rec.error = recovery_error(res.x_hat, x0.dense());
    rec.l1_value = res.l1_value;
    rec.feasibility = res.feasibility_residual;
    rec.status = res.status;
    rec.iterations = res.iterations;
    rec.success = rec.error <= threshold;
  });

  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  std::size_t successes = 0;
  double err_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const TrialRecord& rec = recs[t];
    successes += rec.success ? 1 : 0;
    err_sum += rec.error;
    arr.push_back(json{{"trial", t},
                       {"seed", rec.seed},
                       {"error", rec.error},
                       {"l1_value", rec.l1_value},
                       {"feasibility_residual", rec.feasibility},
                       {"status", solve_status_name(rec.status)},
                       {"iterations", rec.iterations},
                       {"success", rec.success}});
    rows.push_back({std::to_string(t), std::to_string(rec.seed), format_double(rec.error),
                    format_double(rec.l1_value), format_double(rec.feasibility),
                    solve_status_name(rec.status), std::to_string(rec.iterations),
                    rec.success ? "true" : "false"});
  }
  json summary{{"trials", trials},
               {"successes", successes},
               {"success_rate", static_cast<double>(successes) / static_cast<double>(trials)},
               {"mean_error", err_sum / static_cast<double>(trials)},
               {"threshold", threshold}};
  json results{{"summary", summary}, {"trials", arr}};
  emit(rr, dir, "recover.json",
       dump_doc(serialize::envelope(kind_name(cfg.kind), cfg.master_seed, echo_params(p),
                                    results)));
  emit(rr, dir, "recover.csv",
       csv_doc(cfg,
               {"trial", "seed", "error", "l1_value", "feasibility_residual", "status",
                "iterations", "success"},
               rows));
}

void run_oracle(const ExperimentConfig& cfg, const std::string& dir, RunResult& rr) {
  const json& p = cfg.parameters;
  std::size_t n = get_size(p, "n"), k = get_size(p, "k"), m = get_size(p, "m");
  Ensemble ens = parse_ensemble(get_str(p, "ensemble"));
  ValueDist dist = parse_dist(get_str(p, "value_dist"));
  std::size_t trials = get_size(p, "trials");
  double threshold = get_real(p, "threshold");
  int threads = get_int(p, "threads");
  if (trials == 0) fail_precondition("trials must be positive");
  const std::uint64_t tag = tag_of(cfg.kind);

  std::vector<TrialRecord> recs(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    std::uint64_t ts = rng::derive_seed(cfg.master_seed, {tag, m, t});
    SensingMatrix a = gen_matrix(m, n, ens, rng::derive_seed(ts, {1}));
    SparseSignal x0 = gen_sparse_signal(n, k, dist, rng::derive_seed(ts, {2}));
    Measurements b = phaseless_measure(a, x0);
    RecoveryResult res = sign_enum_oracle(a, b);
    TrialRecord& rec = recs[t];
    rec.seed = ts;
    rec.error = recovery_error(res.x_hat, x0.dense());
    rec.l1_value = res.l1_value;
    rec.feasibility = res.feasibility_residual;
    rec.status = res.status;
    rec.iterations = res.iterations;
    rec.multiplicity = res.multiplicity;
    rec.success = rec.error <= threshold;
  });

  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  std::size_t successes = 0, unique = 0;
  double err_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const TrialRecord& rec = recs[t];
    successes += rec.success ? 1 : 0;
    unique += (rec.success && rec.multiplicity == 1) ? 1 : 0;
    err_sum += rec.error;
    arr.push_back(json{{"trial", t},
                       {"seed", rec.seed},
                       {"error", rec.error},
                       {"l1_value", rec.l1_value},
                       {"feasibility_residual", rec.feasibility},
                       {"multiplicity", rec.multiplicity},
                       {"status", solve_status_name(rec.status)},
                       {"success", rec.success}});
    rows.push_back({std::to_string(t), std::to_string(rec.seed), format_double(rec.error),
                    format_double(rec.l1_value), std::to_string(rec.multiplicity),
                    solve_status_name(rec.status), rec.success ? "true" : "false"});
  }
  json summary{{"trials", trials},
               {"successes", successes},
               {"success_rate", static_cast<double>(successes) / static_cast<double>(trials)},
               {"unique_optimum_successes", unique},
               {"mean_error", err_sum / static_cast<double>(trials)},
               {"threshold", threshold}};
  json results{{"summary", summary}, {"trials", arr}};
  emit(rr, dir, "oracle.json",
       dump_doc(serialize::envelope(kind_name(cfg.kind), cfg.master_seed, echo_params(p),
                                    results)));
  emit(rr, dir, "oracle.csv",
       csv_doc(cfg, {"trial", "seed", "error", "l1_value", "multiplicity", "status", "success"},
               rows));
}

void run_phase(const ExperimentConfig& cfg, const std::string& dir, RunResult& rr) {
  const json& p = cfg.parameters;
  std::size_t n = get_size(p, "n"), k = get_size(p, "k");
  auto grid = get_grid(p, "m_grid");
  std::size_t trials = get_size(p, "trials");
  std::string solver = get_str(p, "solver");
  int restarts = get_int(p, "restarts");
  double threshold = get_real(p, "threshold");
  int threads = get_int(p, "threads");

  auto cells = sweep_phase_transition(n, k, grid, trials, solver, cfg.master_seed, threshold,
                                      restarts, threads);
  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : cells) {
    arr.push_back(json{{"n", c.n},
                       {"k", c.k},
                       {"m", c.m},
                       {"trials", c.trials},
                       {"success_rate", c.success_rate},
                       {"mean_error", c.mean_error},
                       {"solver", c.solver}});
    rows.push_back({std::to_string(c.n), std::to_string(c.k), std::to_string(c.m),
                    std::to_string(c.trials), format_double(c.success_rate),
                    format_double(c.mean_error), c.solver});
  }
  json results{{"cells", arr}};
  emit(rr, dir, "phase.json",
       dump_doc(serialize::envelope(kind_name(cfg.kind), cfg.master_seed, echo_params(p),
                                    results)));
  emit(rr, dir, "phase.csv",
       csv_doc(cfg, {"n", "k", "m", "trials", "success_rate", "mean_error", "solver"}, rows));
}

}  // namespace

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Recover: return "recover";
    case ExperimentKind::Oracle: return "oracle";
    case ExperimentKind::Srip: return "srip";
    case ExperimentKind::Rip: return "rip";
    case ExperimentKind::Mu: return "mu";
    case ExperimentKind::Concentration: return "concentration";
    case ExperimentKind::Jl: return "jl";
    case ExperimentKind::PhaseTransition: return "phase_transition";
    case ExperimentKind::BernoulliWitness: return "bernoulli_witness";
  }
  return "unknown";
}

const char* kind_cli_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Concentration: return "conc";
    case ExperimentKind::PhaseTransition: return "phase";
    case ExperimentKind::BernoulliWitness: return "witness";
    default: return kind_name(k);
  }
}

bool parse_kind(const std::string& name, ExperimentKind* out) {
  for (ExperimentKind k : kAllKinds) {
    if (name == kind_name(k) || name == kind_cli_name(k)) {
      if (out) *out = k;
      return true;
    }
  }
  return false;
}

serialize::json default_parameters(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Recover:
      return json{{"n", 32},          {"k", 3},
                  {"m", 40},          {"ensemble", "gaussian"},
                  {"value_dist", "unit_gaussian"}, {"trials", 50},
                  {"restarts", 20},   {"threshold", 1e-4},
                  {"threads", 1}};
    case ExperimentKind::Oracle:
      return json{{"n", 8},           {"k", 2},
                  {"m", 10},          {"ensemble", "gaussian"},
                  {"value_dist", "unit_gaussian"}, {"trials", 20},
                  {"threshold", 1e-6}, {"threads", 1}};
    case ExperimentKind::Srip:
      return json{{"n", 10},
                  {"k", 2},
                  {"m", 20},
                  {"ensemble", "gaussian"},
                  {"method", "exact"},
                  {"n_supports", 200},
                  {"n_vectors", 50},
                  {"budget", 100000000},
                  {"threads", 1}};
    case ExperimentKind::Rip:
      return json{{"n", 10},       {"k", 2},
                  {"m", 20},       {"ensemble", "gaussian"},
                  {"budget", 100000000}, {"threads", 1}};
    case ExperimentKind::Mu:
      return json{{"m_grid", json::array({1, 2, 3, 4, 5, 6, 7, 8, 16, 64, 256})},
                  {"trials", 100000},
                  {"threads", 1}};
    case ExperimentKind::Concentration:
      return json{{"tail_ms", json::array({50, 100})},
                  {"tail_epsilons", json::array({0.3, 0.5, 0.8})},
                  {"tail_trials", 10000},
                  {"half_ms", json::array({64, 256})},
                  {"half_ts", json::array({0.1, 0.2})},
                  {"half_trials", 10000},
                  {"strong_m", 100},
                  {"strong_n", 16},
                  {"strong_trials", 100000},
                  {"threads", 1}};
    case ExperimentKind::Jl:
      return json{{"num_points", 20}, {"n", 100},
                  {"m", 80},          {"runs", 50},
                  {"assert_level", nu0() * nu0() / 4.0},
                  {"threads", 1}};
    case ExperimentKind::PhaseTransition:
      return json{{"n", 32},
                  {"k", 3},
                  {"m_grid", json::array({12, 16, 20, 24, 28, 32, 36, 40, 44, 48, 52, 56, 60, 64})},
                  {"trials", 20},
                  {"solver", "alt_min"},
                  {"restarts", 8},
                  {"threshold", 1e-4},
                  {"threads", 1}};
    case ExperimentKind::BernoulliWitness:
      return json{{"n", 8},
                  {"m_grid", json::array({8, 16, 64})},
                  {"seeds", 100},
                  {"budget", 100000000},
                  {"threads", 1}};
  }
  fail_precondition("unknown experiment kind");
}

namespace {

void merge_params(json& base, const json& user) {
  if (!user.is_object()) fail_precondition("parameters must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string& key = it.key();
    if (!base.contains(key)) fail_precondition("unknown parameter: " + key);
    const json& d = base[key];
    const json& v = it.value();
    if (d.is_number_integer() || d.is_number_unsigned()) {
      if (!v.is_number_integer() && !v.is_number_unsigned())
        fail_precondition("parameter " + key + " must be an integer");
      if (v.is_number_integer() && v.get<long long>() < 0)
        fail_precondition("parameter " + key + " must be nonnegative");
    } else if (d.is_number_float()) {
      if (!v.is_number()) fail_precondition("parameter " + key + " must be a number");
    } else if (d.is_string()) {
      if (!v.is_string()) fail_precondition("parameter " + key + " must be a string");
    } else if (d.is_array()) {
      if (!v.is_array()) fail_precondition("parameter " + key + " must be an array");
      for (const auto& e : v) {
        if (e.is_number_unsigned()) continue;
        if (e.is_number_integer() && e.get<long long>() >= 0) continue;
        if (e.is_number_float() && (key == "tail_epsilons" || key == "half_ts")) continue;
        fail_precondition("parameter " + key + " has an invalid element");
      }
    } else if (d.is_boolean()) {
      if (!v.is_boolean()) fail_precondition("parameter " + key + " must be a boolean");
    }
    base[key] = v;
  }
}

}  // namespace

ExperimentConfig resolve_config(ExperimentKind kind, const serialize::json& document,
                                const serialize::json& flag_overrides) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.parameters = default_parameters(kind);

  if (!document.is_null()) {
    if (!document.is_object()) fail_precondition("config document must be a JSON object");
    for (auto it = document.begin(); it != document.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      if (key == "kind") {
        ExperimentKind file_kind;
        if (!v.is_string() || !parse_kind(v.get<std::string>(), &file_kind))
          fail_precondition("config kind is not a known experiment");
        if (file_kind != kind)
          fail_precondition("config kind does not match the requested experiment");
      } else if (key == "master_seed") {
        if (!v.is_number_unsigned() && !v.is_number_integer())
          fail_precondition("master_seed must be an unsigned integer");
        cfg.master_seed = v.get<std::uint64_t>();
      } else if (key == "output_path") {
        if (!v.is_string()) fail_precondition("output_path must be a string");
        cfg.output_path = v.get<std::string>();
      } else if (key == "parameters") {
        merge_params(cfg.parameters, v);
      } else {
        fail_precondition("unknown config key: " + key);
      }
    }
  }

  if (!flag_overrides.is_null()) {
    for (auto it = flag_overrides.begin(); it != flag_overrides.end(); ++it) {
      const std::string& key = it.key();
      if (key == "master_seed") {
        cfg.master_seed = it.value().get<std::uint64_t>();
      } else if (key == "output_path") {
        cfg.output_path = it.value().get<std::string>();
      } else if (key == "threads") {
        int t = it.value().get<int>();
        if (t < 1) fail_precondition("threads must be positive");
        cfg.parameters["threads"] = t;
      } else {
        fail_precondition("unknown override: " + key);
      }
    }
  }
  return cfg;
}

std::string resolve_output_dir(const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (const char* env = std::getenv("PHASECS_OUT"); env && *env) return env;
  return "phasecs_out";
}

RunResult run(const ExperimentConfig& config) {
  RunResult rr;
  try {
    std::string dir = resolve_output_dir(config.output_path);
    switch (config.kind) {
      case ExperimentKind::Recover: run_recover(config, dir, rr); break;
      case ExperimentKind::Oracle: run_oracle(config, dir, rr); break;
      case ExperimentKind::Srip: run_srip(config, dir, rr); break;
      case ExperimentKind::Rip: run_rip(config, dir, rr); break;
      case ExperimentKind::Mu: run_mu(config, dir, rr); break;
      case ExperimentKind::Concentration: run_conc(config, dir, rr); break;
      case ExperimentKind::Jl: run_jl(config, dir, rr); break;
      case ExperimentKind::PhaseTransition: run_phase(config, dir, rr); break;
      case ExperimentKind::BernoulliWitness: run_witness(config, dir, rr); break;
    }
  } catch (const budget_error& e) {
    rr.exit_code = 2;
    rr.message = std::string("enumeration budget exceeded: ") + e.what();
  } catch (const io_error& e) {
    rr.exit_code = 4;
    rr.message = e.what();
  } catch (const nlohmann::json::exception& e) {
    rr.exit_code = 2;
    rr.message = std::string("config error: ") + e.what();
  } catch (const std::invalid_argument& e) {
    rr.exit_code = 2;
    rr.message = e.what();
  }
  return rr;
}

std::vector<PhaseTransitionCell> sweep_phase_transition(
    std::size_t n, std::size_t k, const std::vector<std::size_t>& m_grid, std::size_t trials,
    const std::string& solver, std::uint64_t master_seed, double threshold, int restarts,
    int threads) {
  if (solver != "oracle" && solver != "alt_min")
    fail_precondition("solver must be oracle or alt_min");
  if (m_grid.empty() || trials == 0) fail_precondition("m_grid and trials must be nonempty");
  if (solver == "oracle")
    for (std::size_t m : m_grid)
      if (m > 22) fail_precondition("oracle sweeps need every m <= 22");

  std::vector<PhaseTransitionCell> cells;
  cells.reserve(m_grid.size());
  for (std::size_t m : m_grid) {
    std::vector<double> errors(trials, 1.0);
    parallel_for(trials, threads, [&](std::size_t t) {
      std::uint64_t ts = rng::derive_seed(master_seed, {m, t});
      SensingMatrix a = gen_matrix(m, n, Ensemble::Gaussian, rng::derive_seed(ts, {1}));
      SparseSignal x0 = gen_sparse_signal(n, k, ValueDist::UnitGaussian,
                                          rng::derive_seed(ts, {2}));
      Measurements b = phaseless_measure(a, x0);
      try {
        RecoveryResult res;
        if (solver == "oracle") {
          res = sign_enum_oracle(a, b);
        } else {
          AltMinOptions opts;
          opts.seed = rng::derive_seed(ts, {3});
          opts.threads = 1;
          res = alt_min_recover(a, b, restarts, opts);
        }
        errors[t] = recovery_error(res.x_hat, x0.dense());
      } catch (const budget_error&) {
        // cell keeps running; the trial counts as a failure
        errors[t] = 1.0;
      }
    });
    PhaseTransitionCell cell;
    cell.n = n;
    cell.k = k;
    cell.m = m;
    cell.trials = trials;
    cell.solver = solver;
    std::size_t successes = 0;
    double sum = 0.0;
    for (double e : errors) {
      successes += e <= threshold ? 1 : 0;
      sum += e;
    }
    cell.success_rate = static_cast<double>(successes) / static_cast<double>(trials);
    cell.mean_error = sum / static_cast<double>(trials);
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace phasecs::runner
