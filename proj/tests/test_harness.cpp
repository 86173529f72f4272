#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "phasecs/runner.hpp"
#include "phasecs/serialize.hpp"
#include "phasecs/version.hpp"

using namespace phasecs;
using runner::ExperimentKind;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& leaf) {
  fs::path dir = fs::temp_directory_path() / "phasecs_harness_test" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

serialize::json small_mu_config() {
  serialize::json doc;
  doc["parameters"]["m_grid"] = {1, 2};
  doc["parameters"]["trials"] = 1000;
  return doc;
}

}  // namespace

TEST_CASE("kind names round trip") {
  const ExperimentKind kinds[] = {
      ExperimentKind::Recover,      ExperimentKind::Oracle,
      ExperimentKind::Srip,         ExperimentKind::Rip,
      ExperimentKind::Mu,           ExperimentKind::Concentration,
      ExperimentKind::Jl,           ExperimentKind::PhaseTransition,
      ExperimentKind::BernoulliWitness,
  };
  for (ExperimentKind k : kinds) {
    ExperimentKind parsed;
    REQUIRE(runner::parse_kind(runner::kind_name(k), &parsed));
    CHECK(parsed == k);
    REQUIRE(runner::parse_kind(runner::kind_cli_name(k), &parsed));
    CHECK(parsed == k);
  }
  ExperimentKind sink;
  CHECK(!runner::parse_kind("nonsense", &sink));
  CHECK(std::string(runner::kind_cli_name(ExperimentKind::Concentration)) == "conc");
  CHECK(std::string(runner::kind_name(ExperimentKind::PhaseTransition)) == "phase_transition");
}

TEST_CASE("defaults and merge precedence") {
  serialize::json defs = runner::default_parameters(ExperimentKind::Mu);
  CHECK(defs.contains("m_grid"));
  CHECK(defs.contains("trials"));
  CHECK(defs.contains("threads"));

  serialize::json doc = small_mu_config();
  serialize::json flags;
  flags["master_seed"] = 9;
  runner::ExperimentConfig cfg = runner::resolve_config(ExperimentKind::Mu, doc, flags);
  CHECK(cfg.master_seed == 9);
  CHECK(cfg.parameters["trials"] == 1000);
  CHECK(cfg.parameters["m_grid"] == serialize::json({1, 2}));

  // flags override the document
  serialize::json doc2 = small_mu_config();
  doc2["master_seed"] = 5;
  runner::ExperimentConfig cfg2 = runner::resolve_config(ExperimentKind::Mu, doc2, flags);
  CHECK(cfg2.master_seed == 9);

  // document kind must agree when present
  serialize::json doc3 = small_mu_config();
  doc3["kind"] = "mu";
  CHECK_NOTHROW(runner::resolve_config(ExperimentKind::Mu, doc3, {}));
  doc3["kind"] = "srip";
  CHECK_THROWS_AS(runner::resolve_config(ExperimentKind::Mu, doc3, {}),
                  std::invalid_argument);

  serialize::json bad = small_mu_config();
  bad["parameters"]["no_such_knob"] = 1;
  CHECK_THROWS_AS(runner::resolve_config(ExperimentKind::Mu, bad, {}), std::invalid_argument);

  serialize::json bad_type = small_mu_config();
  bad_type["parameters"]["trials"] = "many";
  CHECK_THROWS_AS(runner::resolve_config(ExperimentKind::Mu, bad_type, {}),
                  std::invalid_argument);

  serialize::json stray;
  stray["unknown_top_level"] = 1;
  CHECK_THROWS_AS(runner::resolve_config(ExperimentKind::Mu, stray, {}), std::invalid_argument);
}

TEST_CASE("runs are byte-identical across directories") {
  fs::path dir_a = fresh_dir("replay_a");
  fs::path dir_b = fresh_dir("replay_b");

  serialize::json flags;
  flags["master_seed"] = 77;
  runner::ExperimentConfig cfg =
      runner::resolve_config(ExperimentKind::Mu, small_mu_config(), flags);

  cfg.output_path = dir_a.string();
  runner::RunResult ra = runner::run(cfg);
  REQUIRE(ra.exit_code == 0);
  REQUIRE(!ra.files.empty());

  cfg.output_path = dir_b.string();
  runner::RunResult rb = runner::run(cfg);
  REQUIRE(rb.exit_code == 0);
  REQUIRE(ra.files.size() == rb.files.size());

  for (std::size_t i = 0; i < ra.files.size(); ++i) {
    CHECK(fs::path(ra.files[i]).filename() == fs::path(rb.files[i]).filename());
    CHECK(serialize::read_file(ra.files[i]) == serialize::read_file(rb.files[i]));
  }

  // emitted JSON carries the resolved config; location and threads do not
  // appear
  serialize::json doc = serialize::json::parse(serialize::read_file(ra.files[0]));
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["master_seed"] == 77);
  CHECK(doc["parameters"]["trials"] == 1000);
  CHECK(!doc["parameters"].contains("threads"));
  CHECK(!doc.contains("output_path"));

  fs::remove_all(dir_a.parent_path());
}

TEST_CASE("csv files start with a self-describing comment") {
  fs::path dir = fresh_dir("csv_preamble");
  serialize::json flags;
  flags["master_seed"] = 3;
  runner::ExperimentConfig cfg =
      runner::resolve_config(ExperimentKind::Mu, small_mu_config(), flags);
  cfg.output_path = dir.string();
  runner::RunResult r = runner::run(cfg);
  REQUIRE(r.exit_code == 0);

  bool saw_csv = false;
  for (const std::string& f : r.files) {
    if (fs::path(f).extension() != ".csv") continue;
    saw_csv = true;
    std::string body = serialize::read_file(f);
    CHECK(body.rfind("# schema_version=1 ", 0) == 0);
    CHECK(body.find("master_seed=3") != std::string::npos);
  }
  CHECK(saw_csv);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("environment variable picks the output directory") {
  fs::path dir = fresh_dir("env_out");
  CHECK(runner::resolve_output_dir("explicit") == "explicit");
  setenv("PHASECS_OUT", dir.string().c_str(), 1);
  CHECK(runner::resolve_output_dir("") == dir.string());
  unsetenv("PHASECS_OUT");
  CHECK(runner::resolve_output_dir("") == "phasecs_out");
  fs::remove_all(dir.parent_path());
}

TEST_CASE("io failures surface as exit code 4") {
  fs::path dir = fresh_dir("io_fail");
  fs::path blocker = dir / "blocker";
  serialize::write_file(blocker.string(), "occupied\n");

  serialize::json flags;
  runner::ExperimentConfig cfg =
      runner::resolve_config(ExperimentKind::Mu, small_mu_config(), flags);
  cfg.output_path = (blocker / "sub").string();  // parent is a regular file
  runner::RunResult r = runner::run(cfg);
  CHECK(r.exit_code == 4);
  CHECK(!r.message.empty());
  fs::remove_all(dir.parent_path());
}

TEST_CASE("a failed proved bound raises exit code 3 but still writes") {
  fs::path dir = fresh_dir("assert_fail");
  serialize::json doc;
  doc["parameters"]["num_points"] = 6;
  doc["parameters"]["n"] = 16;
  doc["parameters"]["m"] = 12;
  doc["parameters"]["runs"] = 3;
  doc["parameters"]["assert_level"] = 0.5;  // far above any real embedding
  runner::ExperimentConfig cfg = runner::resolve_config(ExperimentKind::Jl, doc, {});
  cfg.output_path = dir.string();
  runner::RunResult r = runner::run(cfg);
  CHECK(r.exit_code == 3);
  CHECK(!r.files.empty());
  CHECK(!r.message.empty());
  for (const std::string& f : r.files) CHECK(fs::exists(f));
  fs::remove_all(dir.parent_path());
}

TEST_CASE("phase transition sweep") {
  std::vector<runner::PhaseTransitionCell> cells =
      runner::sweep_phase_transition(8, 1, {4, 12}, 4, "oracle", 17);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].m == 4);
  CHECK(cells[1].m == 12);
  CHECK(cells[0].solver == "oracle");
  CHECK(cells[1].success_rate >= cells[0].success_rate);
  CHECK(cells[1].success_rate == 1.0);

  // rerun matches cell by cell
  std::vector<runner::PhaseTransitionCell> again =
      runner::sweep_phase_transition(8, 1, {4, 12}, 4, "oracle", 17);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK(cells[i].success_rate == again[i].success_rate);
    CHECK(cells[i].mean_error == again[i].mean_error);
  }

  // the enumeration solver refuses grids it cannot enumerate
  CHECK_THROWS_AS(runner::sweep_phase_transition(8, 1, {4, 23}, 2, "oracle", 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(runner::sweep_phase_transition(8, 1, {4}, 2, "no_such_solver", 1),
                  std::invalid_argument);
}
