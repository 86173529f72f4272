#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasecs/serialize.hpp"

namespace phasecs::runner {

enum class ExperimentKind {
  Recover,
  Oracle,
  Srip,
  Rip,
  Mu,
  Concentration,
  Jl,
  PhaseTransition,
  BernoulliWitness,
};

// Canonical name ("concentration", "phase_transition", ...), used in emitted
// documents.
const char* kind_name(ExperimentKind k);

// Short name used for subcommands and artifact filenames ("conc", "phase",
// "witness", ...).
const char* kind_cli_name(ExperimentKind k);

// Accepts canonical or short names.
bool parse_kind(const std::string& name, ExperimentKind* out);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Mu;
  serialize::json parameters;  // fully resolved, kind-specific
  std::uint64_t master_seed = 1;
  std::string output_path;  // artifact directory
};

serialize::json default_parameters(ExperimentKind kind);

// defaults <- config document <- flag overrides. The document may carry
// "kind", "master_seed", "output_path" and "parameters"; a "kind" that
// contradicts the requested kind, an unknown key anywhere, or a wrongly
// typed value is rejected with std::invalid_argument.
ExperimentConfig resolve_config(ExperimentKind kind, const serialize::json& document,
                                const serialize::json& flag_overrides);

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 config/usage, 3 proved bound failed, 4 io
  std::vector<std::string> files;
  std::string message;
};

// Executes one experiment and writes its artifacts (a JSON report, plus CSV
// tables for sweeps) under config.output_path. Identical configs produce
// byte-identical files. Exit code 3 is reserved for statistical failure of a
// proved inequality; estimate-style kinds never raise it.
RunResult run(const ExperimentConfig& config);

struct PhaseTransitionCell {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double mean_error = 0.0;
  std::string solver;  // "oracle" or "alt_min"
};

// Success-rate curve across a measurement grid. Per-trial seeds derive from
// (master_seed, m, trial), so cells are independent of evaluation order.
std::vector<PhaseTransitionCell> sweep_phase_transition(
    std::size_t n, std::size_t k, const std::vector<std::size_t>& m_grid, std::size_t trials,
    const std::string& solver, std::uint64_t master_seed, double threshold = 1e-4,
    int restarts = 8, int threads = 1);

// Explicit path if nonempty, else $PHASECS_OUT, else "phasecs_out".
std::string resolve_output_dir(const std::string& explicit_path);

}  // namespace phasecs::runner
