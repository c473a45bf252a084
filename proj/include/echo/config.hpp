#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "echo/graph.hpp"
#include "echo/interventions.hpp"
#include "echo/llm_dynamics.hpp"
#include "echo/numeric_dynamics.hpp"
#include "echo/population.hpp"
#include "echo/recommendation.hpp"
#include "echo/remote_backend.hpp"

namespace echo {

enum class EngineKind { bcm, fj, ssf };
enum class BackendKind { mock, remote };

std::string to_string(EngineKind kind);
EngineKind engine_kind_from_string(const std::string& name);
std::string to_string(BackendKind kind);
BackendKind backend_kind_from_string(const std::string& name);

// One experiment. Engine-specific parameter blocks are only serialized for
// the selected engine, graph parameters only for the selected graph kind.
struct RunConfig {
  std::size_t n = 50;
  std::size_t days = 30;
  std::uint64_t seed = 1;
  std::string topic{kDefaultTopic};

  GraphSpec graph;  // graph.n mirrors n
  EngineKind engine = EngineKind::bcm;
  BcmParams bcm;
  FjParams fj;
  SsfParams ssf;

  ExposureMode exposure = ExposureMode::recommended;
  double threshold = kRecommendationThreshold;

  NudgePolicy nudge;
  BackendKind backend = BackendKind::mock;
  RemoteSettings remote;

  std::string output_dir = "runs/default";

  // Throws ConfigError.
  void validate() const;

  // Engine parameter blocks with the shared exposure settings applied.
  BcmParams bcm_params() const;
  FjParams fj_params() const;
  SsfParams ssf_params() const;

  // Output depends only on the config (no remote model in the loop).
  bool reproducible() const { return engine != EngineKind::ssf || backend == BackendKind::mock; }
};

nlohmann::ordered_json to_json(const RunConfig& config, bool include_output_dir = true);

// Missing keys take defaults; unknown keys, wrong types and invalid values
// throw ConfigError.
RunConfig config_from_json(const nlohmann::json& j);

// IoError when the file cannot be read, ConfigError when it does not parse.
nlohmann::json read_config_json(const std::filesystem::path& path);
RunConfig load_config(const std::filesystem::path& path);

// Applies a CLI-style override ("seed", "graph", "engine", ...) onto raw
// config JSON. Switching graph or engine kind drops the other kind's
// parameters.
void apply_override(nlohmann::json& j, const std::string& key, const std::string& value);

// 16 hex digits over every experiment field; output_dir is a location, not
// an experiment field, and is excluded.
std::string config_hash(const RunConfig& config);

// Human-readable listing of every key and its default.
std::string defaults_reference();

}  // namespace echo
