#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>

#include "phasecs/errors.hpp"
#include "phasecs/serialize.hpp"
#include "phasecs/version.hpp"

using namespace phasecs;
namespace fs = std::filesystem;

TEST_CASE("doubles render with 17 significant digits") {
  CHECK(serialize::format_double(0.1) == "0.10000000000000001");
  CHECK(serialize::format_double(1.0) == "1");
  CHECK(serialize::format_double(0.0) == "0");
  CHECK(serialize::format_double(-2.5) == "-2.5");
  // round trip: the printed form parses back to the identical bit pattern
  double v = 0.67448975019608171;
  CHECK(std::stod(serialize::format_double(v)) == v);
}

TEST_CASE("csv assembly") {
  std::string doc = serialize::csv_table({"a", "b"}, {{"1", "2"}, {"3", "4"}});
  CHECK(doc == "a,b\n1,2\n3,4\n");
  CHECK(serialize::csv_table({"only"}, {}) == "only\n");
  CHECK_THROWS_AS(serialize::csv_table({"a", "b"}, {{"1"}}), std::invalid_argument);
}

TEST_CASE("envelope layout") {
  serialize::json params;
  params["m"] = 4;
  serialize::json results;
  results["value"] = 1.5;
  serialize::json doc = serialize::envelope("mu", 42, params, results);

  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"schema_version", "kind", "master_seed", "rng",
                                         "parameters", "results"});
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["kind"] == "mu");
  CHECK(doc["master_seed"] == 42);
  CHECK(doc["rng"] == std::string(kRngId));
  CHECK(doc["parameters"]["m"] == 4);
  CHECK(doc["results"]["value"] == 1.5);
}

TEST_CASE("report serialization carries every field") {
  MuEstimate e;
  e.m = 8;
  e.trials = 100;
  e.mean = 0.5;
  e.std_error = 0.01;
  e.seed = 7;
  serialize::json j = serialize::to_json(e);
  CHECK(j["m"] == 8);
  CHECK(j["trials"] == 100);
  CHECK(j["mean"] == 0.5);
  CHECK(j["std_error"] == 0.01);
  CHECK(j["seed"] == 7);

  TailReport t;
  t.m = 50;
  t.epsilon_or_t = 0.5;
  t.trials = 1000;
  t.empirical_prob = 0.2;
  t.analytic_bound = 0.25;
  t.std_error = 0.01;
  t.passed = true;
  t.vacuous = false;
  serialize::json jt = serialize::to_json(t);
  CHECK(jt["passed"] == true);
  CHECK(jt["vacuous"] == false);
  CHECK(jt["analytic_bound"] == 0.25);
}

TEST_CASE("file round trip and failure modes") {
  fs::path dir = fs::temp_directory_path() / "phasecs_serialize_test";
  fs::remove_all(dir);
  fs::path file = dir / "nested" / "doc.json";

  std::string content = "{\"x\": 1}\n";
  serialize::write_file(file.string(), content);  // creates parents
  CHECK(serialize::read_file(file.string()) == content);

  // overwrite is whole-file
  serialize::write_file(file.string(), "second\n");
  CHECK(serialize::read_file(file.string()) == "second\n");

  CHECK_THROWS_AS(serialize::read_file((dir / "missing.txt").string()), io_error);
  // a regular file where a directory is needed
  CHECK_THROWS_AS(serialize::write_file((file / "under_file.txt").string(), "x"), io_error);

  fs::remove_all(dir);
}
