#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mrsearch/action_model.hpp"
#include "mrsearch/comms.hpp"
#include "mrsearch/grid.hpp"
#include "mrsearch/guts_planner.hpp"

namespace mrsearch {

enum class PlannerKind { Guts, Coverage };

const char* to_string(PlannerKind kind);

struct RobotConfig {
  int id = 0;
  Point2 start{};
  double v_max = 10.0;
  double a_max = 5.0;
  PlannerKind planner = PlannerKind::Guts;
  double launch_delay = 0.0;
};

struct TargetConfig {
  int cell = 0;
  double confidence = 1.0;
};

/// Arms and sweeps run by `batch`.
struct BatchSettings {
  std::vector<PlannerKind> planners;
  std::vector<bool> channels;  // enabled flags
  std::vector<double> confidence_sweep;
};

struct ScenarioConfig {
  GridSpec grid{};
  ZonePolygon zone{};
  std::vector<RobotConfig> robots;
  std::vector<TargetConfig> targets;
  ChannelConfig channel{};
  FusionConfig fusion{};
  GutsConfig guts{};
  double duration = 800.0;
  double tick = 0.1;
  double replan_lead = 0.5;
  double metrics_interval = 1.0;
  int trials = 5;
  std::uint64_t seed = 1;
  BatchSettings batch{};
};

/// Throws InvalidConfig naming the offending field.
void validate(const ScenarioConfig& cfg);

ScenarioConfig parse_scenario(const std::string& yaml_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical YAML rendering; parse_scenario(emit_scenario(c)) reproduces c.
std::string emit_scenario(const ScenarioConfig& cfg);

}  // namespace mrsearch
