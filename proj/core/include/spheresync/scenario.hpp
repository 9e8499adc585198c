#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spheresync/analysis.hpp"

namespace spheresync {

/// How the initial ensemble is produced.
struct InitialSpec {
  enum class Kind { cap, explicit_sphere, explicit_lifted };
  Kind kind = Kind::cap;

  // kind == cap
  Vec cap_axis;
  double cap_radius = 0.0;
  std::optional<std::uint64_t> cap_seed;

  // kind == explicit_*: d x n columns
  Mat points;

  /// Optional per-agent radial scales turning sphere initial data into
  /// lifted initial data (z_i = scale_i * x_i).
  std::optional<Vec> scales;
};

/// Which flow a scenario integrates.
enum class SystemKind { sphere, lifted };

/// A fully parsed experiment description. Optional members with no
/// in-config default are resolved against `master_seed` at run time.
struct ScenarioConfig {
  std::string name = "scenario";
  int d = 3;
  int n = 0;
  SystemKind system = SystemKind::sphere;
  std::uint64_t master_seed = 0;

  InitialSpec initial;
  std::optional<GraphSchedule> schedule;
  std::optional<WeightFamily> weights;
  IntegrationConfig integration;
  std::vector<std::string> monitors;

  /// Ball for the hemisphere monitor; defaults to the initial cap.
  std::optional<Vec> ball_axis;
  std::optional<double> ball_radius;

  /// The config with every omitted default filled in, for the manifest.
  std::string resolved_json;

  std::uint64_t effective_initial_seed() const;
};

/// Parse a scenario config. `base_dir` anchors relative schedule file
/// references. Throws ConfigError on malformed input.
ScenarioConfig parse_scenario(const std::string& json_text,
                              const std::string& base_dir);

/// Apply dotted-path overrides ("integration.dt=1e-4", "seed=7") to raw
/// config text, returning the rewritten JSON.
std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides);

struct RunArtifacts {
  std::string directory;  // empty for in-memory runs
  bool integration_ok = true;
  /// True when no monitor verdict is `fail` (not-applicable monitors do
  /// not fail a run; their verdicts are still reported).
  bool monitors_passed = true;
  std::vector<MetricSeries> verdicts;
  Trajectory trajectory;
};

/// Integrate and monitor without touching the filesystem.
RunArtifacts run_scenario_in_memory(const ScenarioConfig& config);

/// Full run: writes trajectory.csv, metrics.csv, verdicts.json, and
/// manifest.json (config hash, resolved config, seeds; no timestamps)
/// into out_dir, creating it if needed.
RunArtifacts run_scenario(const ScenarioConfig& config,
                          const std::string& out_dir);

/// FNV-1a 64-bit hash of a byte string, as fixed-width hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace spheresync
