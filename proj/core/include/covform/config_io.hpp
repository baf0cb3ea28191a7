#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "covform/sim.hpp"

namespace covform {

// Mission configuration document, JSON, UTF-8, with a versioned "schema"
// field. Top-level keys: mission_rect, obstacles, trajectory, n_followers,
// C, delta, sensing, density, side_constraint, cpa, grid_cell, seed,
// occlusion. The last four (and side_constraint) are optional with defaults.
MissionConfig load_config(const std::filesystem::path& path);
MissionConfig parse_config(const std::string& json_text);

std::string config_to_json(const MissionConfig& config);

std::string log_to_json(const MissionLog& log, const MissionConfig& config);
std::string log_to_csv(const MissionLog& log);
MissionLog log_from_json(const std::string& json_text);

enum class OutputFormat { JsonLog, Svg, CsvTrace };

struct RunManifest {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::vector<int> snapshot_times;
  std::vector<OutputFormat> formats{OutputFormat::JsonLog, OutputFormat::Svg,
                                    OutputFormat::CsvTrace};
};

// Writes the requested artifacts (mission_log.json, trace.csv, one
// snap_t{k}.svg per snapshot time) and returns the written paths.
std::vector<std::filesystem::path> emit_outputs(const MissionLog& log,
                                                const MissionConfig& config,
                                                const RunManifest& manifest);

}  // namespace covform
