#include "mrsearch/sim/batch.hpp"

#include <algorithm>
#include <numeric>

namespace mrsearch {

namespace {

struct Job {
  std::size_t arm;
  std::uint64_t seed;
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string arm_label(const ArmKey& arm) {
  return std::string(to_string(arm.planner)) + (arm.channel_enabled ? "/comms-enabled" : "/comms-disabled");
}

std::vector<CoverageBin> aggregate_bins(const std::vector<double>& times,
                                        const std::vector<std::vector<double>>& series) {
  std::vector<CoverageBin> out;
  if (series.empty()) return out;
  for (std::size_t b = 0; b < times.size(); ++b) {
    std::vector<double> col;
    col.reserve(series.size());
    for (const auto& s : series) col.push_back(s.empty() ? 0.0 : s[std::min(b, s.size() - 1)]);
    CoverageBin bin;
    bin.time = times[b];
    bin.mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
    bin.min = *std::min_element(col.begin(), col.end());
    bin.max = *std::max_element(col.begin(), col.end());
    bin.median = median_of(col);
    out.push_back(bin);
  }
  return out;
}

std::vector<ViewSweepRow> run_confidence_sweep(const ScenarioConfig& cfg) {
  std::vector<ViewSweepRow> rows;
  if (cfg.targets.empty()) return rows;
  for (double c : cfg.batch.confidence_sweep) rows.push_back({c, std::vector<std::vector<int>>(cfg.trials), 0.0});

  const auto total = static_cast<std::ptrdiff_t>(rows.size() * static_cast<std::size_t>(cfg.trials));
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < total; ++j) {
    const auto row = static_cast<std::size_t>(j) / static_cast<std::size_t>(cfg.trials);
    const auto k = static_cast<std::size_t>(j) % static_cast<std::size_t>(cfg.trials);
    ScenarioConfig trial_cfg = cfg;
    for (auto& t : trial_cfg.targets) t.confidence = rows[row].confidence;
    const auto result = run_trial(trial_cfg, cfg.seed + k, {.record_messages = false});
    std::vector<int> views;
    for (const auto& t : result.targets) views.push_back(t.view_count);
    rows[row].views[k] = std::move(views);
  }
  for (auto& r : rows) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : r.views)
      for (int x : v) {
        sum += x;
        ++n;
      }
    r.mean_views = n ? sum / static_cast<double>(n) : 0.0;
  }
  return rows;
}

BatchReport run_batch(const ScenarioConfig& cfg) {
  auto planners = cfg.batch.planners;
  if (planners.empty()) planners = {PlannerKind::Guts, PlannerKind::Coverage};
  auto channels = cfg.batch.channels;
  if (channels.empty()) channels = {false, true};

  BatchReport report;
  for (auto p : planners)
    for (bool ch : channels) report.arms.push_back({{p, ch}, {}, {}, {}, {}});

  std::vector<Job> jobs;
  for (std::size_t a = 0; a < report.arms.size(); ++a)
    for (int k = 0; k < cfg.trials; ++k) jobs.push_back({a, cfg.seed + static_cast<std::uint64_t>(k)});

  std::vector<std::vector<double>> series(jobs.size());
  std::vector<std::vector<double>> times(jobs.size());
  std::vector<std::string> causes(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const auto& job = jobs[static_cast<std::size_t>(j)];
    const auto& arm = report.arms[job.arm].arm;
    ScenarioConfig trial_cfg = cfg;
    for (auto& r : trial_cfg.robots) r.planner = arm.planner;
    trial_cfg.channel.enabled = arm.channel_enabled;
    const auto result = run_trial(trial_cfg, job.seed, {.record_messages = false});
    for (const auto& row : result.metrics)
      if (row.robot == kTeamRow) {
        series[static_cast<std::size_t>(j)].push_back(row.pct_unknown);
        times[static_cast<std::size_t>(j)].push_back(row.time);
      }
    if (result.abort_cause) causes[static_cast<std::size_t>(j)] = *result.abort_cause;
  }

  for (const auto& t : times)
    if (t.size() > report.times.size()) report.times = t;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& arm = report.arms[jobs[j].arm];
    arm.seeds.push_back(jobs[j].seed);
    arm.team_pct.push_back(std::move(series[j]));
    if (!causes[j].empty()) arm.abort_causes.push_back(causes[j]);
  }
  for (auto& arm : report.arms) arm.bins = aggregate_bins(report.times, arm.team_pct);
  report.trial_records = jobs.size();
  report.sweep = run_confidence_sweep(cfg);
  return report;
}

}  // namespace mrsearch
