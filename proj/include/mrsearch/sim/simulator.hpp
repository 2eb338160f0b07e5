#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mrsearch/action_model.hpp"
#include "mrsearch/belief.hpp"
#include "mrsearch/comms.hpp"
#include "mrsearch/coverage_planner.hpp"
#include "mrsearch/random.hpp"
#include "mrsearch/sim/scenario.hpp"
#include "mrsearch/trajectory.hpp"

namespace mrsearch {

struct Target {
  int cell = 0;
  double confidence = 1.0;
  int view_count = 0;
};

/// Detector model: a target cell yields (y=1, c=target confidence) and counts a
/// view; any other cell yields (y=y_empty, c=1). Detection is certain on entry.
SensingRecord sense(int cell, std::vector<Target>& targets, int robot_id, double y_empty,
                    std::vector<int>* robot_views = nullptr);

/// One row per robot per metrics interval, plus a team row (robot == kTeamRow)
/// whose counts are over the union of all robots.
struct MetricsRow {
  double time = 0.0;
  int robot = 0;
  Point2 position{};
  std::size_t cells_visited = 0;
  double pct_unknown = 0.0;
  std::vector<int> views;
};

inline constexpr int kTeamRow = -1;

struct MessageLogEntry {
  long tick = 0;
  PeerMessage msg;
  bool delivered = false;
};

/// Recorded delivery outcomes keyed by (receiver, sender, seq). When supplied,
/// they replace the channel's drop rolls.
using DeliveryOverride = std::map<std::tuple<int, int, std::uint64_t>, bool>;

struct TrialOptions {
  bool record_messages = true;
  const DeliveryOverride* replay = nullptr;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::vector<MetricsRow> metrics;
  std::vector<MessageLogEntry> messages;
  std::vector<SensingDataset> datasets;
  std::vector<Target> targets;
  std::vector<int> plans_per_robot;
  std::optional<std::string> abort_cause;
};

struct ActiveMotion {
  CandidateAction action;
  TrajectorySegment x, y, heading;
  double elapsed = 0.0;
};

struct RobotState {
  RobotState(const RobotConfig& c, const ZoneMap& map, std::uint64_t seed, std::size_t num_targets);

  RobotConfig cfg;
  Point2 position{};
  double heading = 0.0;
  bool launched = false;
  bool done = false;  // coverage planner exhausted its goals
  std::optional<ActiveMotion> motion;
  std::optional<CandidateAction> next_action;
  SensingDataset dataset;
  VisitedMask sensed;  // cells this robot sensed itself
  VisitedMask known;   // sensed plus everything fused from peers
  Rng rng;
  std::vector<int> views;
  std::vector<PeerMessage> inbox;
  std::map<int, int> last_peer_cell;  // sender -> cell of its last fused pose or track
  Rng channel_rng;
  std::uint64_t send_seq = 0;
  int plans = 0;
};

/// What one step_robot call did.
struct StepEvents {
  std::vector<SensingRecord> sensed;
  bool replanned = false;
  bool arrived = false;
};

/// Fixed-tick multi-robot simulation, fully determined by (config, seed).
class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed, TrialOptions opts = {});
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// deliver -> fuse -> step every robot -> broadcast poses -> metrics.
  void advance();
  bool finished() const { return tick_ >= total_ticks_ || abort_cause_.has_value(); }
  void run();

  /// Launches (if due), moves, senses and replans one robot for one tick.
  StepEvents step_robot(std::size_t index);

  /// Replaces the robot's motion with a straight move to `goal_cell`.
  void command(std::size_t index, int goal_cell);

  const ZoneMap& zone_map() const { return map_; }
  const std::vector<RobotState>& robots() const { return robots_; }
  RobotState& robot(std::size_t index) { return robots_[index]; }
  const std::vector<Target>& targets() const { return targets_; }
  double now() const { return static_cast<double>(tick_) * cfg_.tick; }
  long tick() const { return tick_; }
  double team_pct_unknown() const;

  TrialResult take_result();

 private:
  void launch(RobotState& r, StepEvents& ev);
  void start_motion(RobotState& r, CandidateAction action, StepEvents& ev);
  std::optional<CandidateAction> plan(RobotState& r, Point2 from);
  void record_sensing(RobotState& r, int cell, StepEvents& ev);
  void broadcast(RobotState& r, MessageKind kind, std::vector<int> cells, double y, double c);
  void deliver_all();
  void record_metrics();

  ScenarioConfig cfg_;
  std::uint64_t seed_;
  TrialOptions opts_;
  ZoneMap map_;
  std::vector<RobotState> robots_;
  std::vector<Target> targets_;
  std::vector<MetricsRow> metrics_;
  std::vector<MessageLogEntry> log_;
  long tick_ = 0;
  long total_ticks_ = 0;
  long metrics_every_ = 1;
  std::optional<std::string> abort_cause_;
};

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed, TrialOptions opts = {});

/// Team pct_unknown column of a trial, one entry per metrics sample.
std::vector<double> team_coverage_series(const TrialResult& result);

}  // namespace mrsearch
