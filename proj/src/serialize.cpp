#include "phasecs/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phasecs/errors.hpp"
#include "phasecs/version.hpp"

namespace phasecs::serialize {

json to_json(const MuEstimate& e) {
  return json{{"m", e.m},
              {"trials", e.trials},
              {"mean", e.mean},
              {"std_error", e.std_error},
              {"seed", e.seed}};
}

json to_json(const TailReport& r) {
  return json{{"m", r.m},
              {"epsilon_or_t", r.epsilon_or_t},
              {"trials", r.trials},
              {"empirical_prob", r.empirical_prob},
              {"analytic_bound", r.analytic_bound},
              {"std_error", r.std_error},
              {"passed", r.passed},
              {"vacuous", r.vacuous},
              {"seed", r.seed}};
}

json to_json(const StrongConcReport& r) {
  json j = to_json(r.tail);
  j["min_half_energy"] = r.min_half_energy;
  return j;
}

json to_json(const EmbeddingReport& r) {
  return json{{"num_points", r.num_points},
              {"n", r.n},
              {"m", r.m},
              {"min_half_ratio", r.min_half_ratio},
              {"max_full_ratio", r.max_full_ratio},
              {"coincident_pairs", r.coincident_pairs},
              {"seed", r.seed}};
}

json to_json(const SripEstimate& e) {
  return json{{"k", e.k},
              {"theta_minus", e.theta_minus},
              {"theta_plus", e.theta_plus},
              {"method", isometry_method_name(e.method)},
              {"supports_examined", e.supports_examined},
              {"samples_per_support", e.samples_per_support},
              {"seed", e.seed}};
}

json to_json(const RipEstimate& e) {
  return json{{"k", e.k}, {"delta", e.delta}, {"method", isometry_method_name(e.method)}};
}

json to_json(const BernoulliWitness& w) {
  return json{{"x", w.x}, {"rows", w.rows}, {"energy", w.energy}};
}

json to_json(const RecoveryResult& r) {
  std::vector<int> eps(r.eps.eps.begin(), r.eps.eps.end());
  return json{{"x_hat", r.x_hat},
              {"eps", eps},
              {"l1_value", r.l1_value},
              {"feasibility_residual", r.feasibility_residual},
              {"status", solve_status_name(r.status)},
              {"iterations", r.iterations},
              {"restarts_used", r.restarts_used},
              {"multiplicity", r.multiplicity}};
}

json envelope(const std::string& kind, std::uint64_t master_seed, const json& parameters,
              const json& results) {
  return json{{"schema_version", kSchemaVersion},
              {"kind", kind},
              {"master_seed", master_seed},
              {"rng", kRngId},
              {"parameters", parameters},
              {"results", results}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) fail_precondition("csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw io_error("cannot create directory " + p.parent_path().string());
  }
  // write to a sibling then rename, so a crash never leaves a torn file
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw io_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, p, ec);
  if (ec) throw io_error("cannot move " + tmp.string() + " into place");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw io_error("read failed for " + path);
  return buf.str();
}

}  // namespace phasecs::serialize
