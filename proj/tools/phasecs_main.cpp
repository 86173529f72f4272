#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phasecs/errors.hpp"
#include "phasecs/runner.hpp"
#include "phasecs/serialize.hpp"
#include "phasecs/version.hpp"

namespace {

using phasecs::runner::ExperimentKind;

struct SubFlags {
  ExperimentKind kind = ExperimentKind::Recover;
  CLI::App* cmd = nullptr;
  std::uint64_t seed = 0;
  std::string out;
  std::string config_path;
  int threads = 1;
};

const char* describe(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Recover: return "alternating minimization recovery trials";
    case ExperimentKind::Oracle: return "exhaustive sign-enumeration recovery trials";
    case ExperimentKind::Srip: return "smallest-half isometry levels of one matrix";
    case ExperimentKind::Rip: return "classical restricted isometry constant of one matrix";
    case ExperimentKind::Mu: return "mean smallest-half norm over a grid of row counts";
    case ExperimentKind::Concentration: return "tail and deviation probes for the smallest-half norm";
    case ExperimentKind::Jl: return "erasure-robust random embeddings of a point set";
    case ExperimentKind::PhaseTransition: return "recovery success rates across measurement counts";
    case ExperimentKind::BernoulliWitness: return "sign matrices with a vanishing lower level at order 2";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phaseless sparse recovery experiments"};
  app.set_version_flag("--version", phasecs::kLibraryVersion);
  app.require_subcommand(1);

  const ExperimentKind kinds[] = {
      ExperimentKind::Recover,       ExperimentKind::Oracle,
      ExperimentKind::Srip,          ExperimentKind::Rip,
      ExperimentKind::Mu,            ExperimentKind::Concentration,
      ExperimentKind::Jl,            ExperimentKind::PhaseTransition,
      ExperimentKind::BernoulliWitness,
  };
  std::vector<SubFlags> subs(std::size(kinds));
  for (std::size_t i = 0; i < std::size(kinds); ++i) {
    SubFlags& s = subs[i];
    s.kind = kinds[i];
    s.cmd = app.add_subcommand(phasecs::runner::kind_cli_name(kinds[i]), describe(kinds[i]));
    s.cmd->add_option("--seed", s.seed, "master seed");
    s.cmd->add_option("--out", s.out, "output directory (default: $PHASECS_OUT or ./phasecs_out)");
    s.cmd->add_option("--config", s.config_path, "JSON config file");
    s.cmd->add_option("--threads", s.threads, "worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const SubFlags* chosen = nullptr;
  for (const SubFlags& s : subs)
    if (s.cmd->parsed()) chosen = &s;
  if (chosen == nullptr) {
    std::fprintf(stderr, "error: no experiment selected\n");
    return 2;
  }

  phasecs::runner::ExperimentConfig cfg;
  try {
    phasecs::serialize::json document;
    if (chosen->cmd->count("--config") > 0) {
      document = phasecs::serialize::json::parse(
          phasecs::serialize::read_file(chosen->config_path));
    }
    phasecs::serialize::json overrides = phasecs::serialize::json::object();
    if (chosen->cmd->count("--seed") > 0) overrides["master_seed"] = chosen->seed;
    if (chosen->cmd->count("--out") > 0) overrides["output_path"] = chosen->out;
    if (chosen->cmd->count("--threads") > 0) overrides["threads"] = chosen->threads;
    cfg = phasecs::runner::resolve_config(chosen->kind, document, overrides);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  phasecs::runner::RunResult rr = phasecs::runner::run(cfg);
  for (const std::string& f : rr.files) std::printf("%s\n", f.c_str());
  if (!rr.message.empty()) std::fprintf(stderr, "%s\n", rr.message.c_str());
  return rr.exit_code;
}
