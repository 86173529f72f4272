#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "phasecs/halfnorm.hpp"
#include "phasecs/isometry.hpp"
#include "phasecs/probes.hpp"
#include "phasecs/recovery.hpp"

namespace phasecs::serialize {

// Insertion-ordered documents keep emitted files byte-stable.
using json = nlohmann::ordered_json;

json to_json(const MuEstimate& e);
json to_json(const TailReport& r);
json to_json(const StrongConcReport& r);
json to_json(const EmbeddingReport& r);
json to_json(const SripEstimate& e);
json to_json(const RipEstimate& e);
json to_json(const BernoulliWitness& w);
json to_json(const RecoveryResult& r);

// Every artifact document carries the schema version, the kind, the master
// seed, and the fully resolved parameters, so a file alone reproduces its
// run. Output locations are deliberately not embedded: the same config must
// produce the same bytes wherever it lands.
json envelope(const std::string& kind, std::uint64_t master_seed, const json& parameters,
              const json& results);

// 17 significant digits: shortest form that survives a parse round trip for
// every double.
std::string format_double(double v);

// One CSV document: header plus rows, every line "\n"-terminated.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

// Throws io_error on failure. Write is whole-file: either the previous
// content survives or the new content lands completely.
void write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace phasecs::serialize
