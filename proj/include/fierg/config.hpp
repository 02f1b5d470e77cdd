#pragma once

// Resolved run configuration; serializes to JSON for manifests and --config.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fierg/diagnostics.hpp"
#include "fierg/dmh.hpp"
#include "fierg/scenario.hpp"

namespace fierg {

inline constexpr const char* kVersion = "1.0.0";

struct BasisSettings {
  std::optional<int> k_n;     // default: default_kn(T)
  std::optional<int> degree;  // default: default_degree(k_n)
};

struct RunConfig {
  std::string command;
  ChainConfig chain;
  ScenarioSpec scenario;
  BasisSettings basis;
  PpcConfig ppc;
  std::string format = "long";
  std::vector<int> bench_multipliers{1, 2, 4, 8};

  std::string input;
  std::string output;
  std::string chain_path;
  std::string truth_dir;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

// Manifest: resolved config plus seed and code version.
nlohmann::json make_manifest(const RunConfig& cfg);
void write_manifest(const std::filesystem::path& path, const RunConfig& cfg);

std::string to_string(UpdateMode m);
UpdateMode parse_update_mode(const std::string& s);
std::string to_string(TimeGrid g);
TimeGrid parse_time_grid(const std::string& s);

}  // namespace fierg
