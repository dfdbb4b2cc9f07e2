#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "asep/experiments.hpp"
#include "asep/model_params.hpp"

namespace asep {

nlohmann::json to_json(const ModelParams& params);
nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const StatReport& report);

/// Machine-readable report: {"version", "config", "report"}.
std::string report_json(const StatReport& report, const nlohmann::json& config);

/// "series,x,estimate,std_error,samples" rows preceded by '#' lines holding
/// the version and the config as one-line JSON; scalars follow as
/// "scalar,<name>,<value>,," rows.
std::string report_csv(const StatReport& report, const nlohmann::json& config);

/// 16 hex digits of FNV-1a over the canonical config dump.
std::string config_hash(const nlohmann::json& config);

/// Writes `files` into <root>/run-<config hash>/ together with manifest.json
/// (version, config, file names and byte sizes). Returns the directory.
std::filesystem::path write_run(const std::filesystem::path& root, const nlohmann::json& config,
                                const std::vector<std::pair<std::string, std::string>>& files);

std::string format_double(double x);

}  // namespace asep
