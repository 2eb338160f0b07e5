#pragma once

#include <string>
#include <vector>

#include "mrsearch/sim/scenario.hpp"
#include "mrsearch/sim/simulator.hpp"

namespace mrsearch {

struct ArmKey {
  PlannerKind planner = PlannerKind::Guts;
  bool channel_enabled = true;
};

std::string arm_label(const ArmKey& arm);

struct CoverageBin {
  double time = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
};

struct ArmSummary {
  ArmKey arm;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> team_pct;  // [trial][time bin]
  std::vector<CoverageBin> bins;
  std::vector<std::string> abort_causes;
};

struct ViewSweepRow {
  double confidence = 0.0;
  std::vector<std::vector<int>> views;  // [trial][target]
  double mean_views = 0.0;              // per target, averaged over trials
};

struct BatchReport {
  std::vector<double> times;
  std::vector<ArmSummary> arms;
  std::vector<ViewSweepRow> sweep;
  std::size_t trial_records = 0;
};

/// Per-bin mean/min/max/median across trials.
std::vector<CoverageBin> aggregate_bins(const std::vector<double>& times,
                                        const std::vector<std::vector<double>>& series);

/// Coverage arms (planner x channel, trials each, seeds seed+k) followed by
/// the confidence sweep (every target set to each c). Trials are independent
/// and run in parallel; results do not depend on the thread count.
BatchReport run_batch(const ScenarioConfig& cfg);

/// Only the confidence sweep part of run_batch.
std::vector<ViewSweepRow> run_confidence_sweep(const ScenarioConfig& cfg);

}  // namespace mrsearch
