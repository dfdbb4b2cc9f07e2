#include "asep/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace asep {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json to_json(const ModelParams& p) {
  nlohmann::json j;
  if (p.exact) {
    j["q"] = to_string(p.exact->q);
    j["alpha"] = to_string(p.exact->alpha);
    j["gamma"] = to_string(p.exact->gamma);
  } else {
    j["q"] = p.q;
    j["alpha"] = p.alpha;
    j["gamma"] = p.gamma;
  }
  j["N"] = p.N;
  return j;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["params"] = to_json(c.params);
  j["c_grid"] = c.c_grid;
  j["t_grid"] = c.t_grid;
  j["x_grid"] = c.x_grid;
  j["trials"] = c.trials;
  j["seed"] = c.master_seed;
  j["m"] = effective_threshold(c);
  j["reference"] = c.reference;
  j["interval"] = {c.interval.a, c.interval.b};
  j["k"] = c.k;
  j["S"] = c.S;
  j["t"] = c.t;
  j["epsilon"] = c.epsilon;
  j["mixing_step"] = c.mixing_step;
  j["exact"] = c.exact;
  j["time_constants"] = {c.constants.gse_speed, c.constants.gse_window, c.constants.goe_speed,
                         c.constants.goe_window};
  return j;
}

nlohmann::json to_json(const StatReport& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  nlohmann::json rows = nlohmann::json::array();
  for (const StatRow& row : r.rows) {
    rows.push_back({{"series", row.series}, {"x", row.x}, {"estimate", row.estimate},
                    {"std_error", row.std_error}, {"samples", row.samples}});
  }
  j["rows"] = rows;
  j["scalars"] = r.scalars;
  j["notes"] = r.notes;
  return j;
}

std::string report_json(const StatReport& report, const nlohmann::json& config) {
  nlohmann::json j;
  j["version"] = ASEP_VERSION;
  j["config"] = config;
  j["report"] = to_json(report);
  return j.dump(2) + "\n";
}

std::string report_csv(const StatReport& report, const nlohmann::json& config) {
  std::string out;
  out += "# version " ASEP_VERSION "\n";
  out += "# config " + config.dump() + "\n";
  out += "series,x,estimate,std_error,samples\n";
  for (const StatRow& row : report.rows) {
    out += row.series + "," + format_double(row.x) + "," + format_double(row.estimate) + "," +
           format_double(row.std_error) + "," + std::to_string(row.samples) + "\n";
  }
  for (const auto& [name, value] : report.scalars) out += "scalar," + name + "," + format_double(value) + ",,\n";
  return out;
}

std::string config_hash(const nlohmann::json& config) {
  const std::string text = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::filesystem::path write_run(const std::filesystem::path& root, const nlohmann::json& config,
                                const std::vector<std::pair<std::string, std::string>>& files) {
  const std::filesystem::path dir = root / ("run-" + config_hash(config));
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["version"] = ASEP_VERSION;
  manifest["config"] = config;
  nlohmann::json listed = nlohmann::json::array();
  for (const auto& [name, content] : files) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << content;
    listed.push_back({{"file", name}, {"bytes", content.size()}});
  }
  manifest["files"] = listed;
  std::ofstream m(dir / "manifest.json", std::ios::binary);
  m << manifest.dump(2) << "\n";
  return dir;
}

}  // namespace asep
