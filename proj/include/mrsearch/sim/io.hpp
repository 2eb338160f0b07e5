#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mrsearch/sim/batch.hpp"
#include "mrsearch/sim/simulator.hpp"

namespace mrsearch {

/// Header: time,robot,x,y,cells_visited,pct_unknown,views_t0,... ; the team
/// row uses "team" in the robot column.
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows,
                       std::size_t num_targets);

/// One JSON object per line:
/// {"tick","sender","receiver","kind","payload":{...},"delivered"}.
void write_message_log(std::ostream& os, const std::vector<MessageLogEntry>& log);
std::vector<MessageLogEntry> read_message_log(std::istream& is);
DeliveryOverride delivery_outcomes(const std::vector<MessageLogEntry>& log);

struct RunManifest {
  std::string config_text;  // canonical YAML
  std::string config_hash;  // sha256 of config_text
  std::uint64_t seed = 0;
  std::string metrics_file = "metrics.csv";
  std::string message_log_file = "messages.jsonl";
};

std::string sha256_hex(const std::string& data);
RunManifest make_manifest(const ScenarioConfig& cfg, std::uint64_t seed);
void write_manifest(std::ostream& os, const RunManifest& m);
RunManifest read_manifest(std::istream& is);

/// Writes metrics.csv, messages.jsonl and manifest.json into `dir`.
void write_run(const std::filesystem::path& dir, const ScenarioConfig& cfg,
               const TrialResult& result);

void write_batch_coverage_csv(std::ostream& os, const BatchReport& report);
void write_batch_views_csv(std::ostream& os, const BatchReport& report);

/// Reads a metrics.csv back (for plotting).
std::vector<MetricsRow> read_metrics_csv(std::istream& is);

/// Static SVG figures.
std::string coverage_svg(const std::vector<MetricsRow>& rows);
std::string trajectory_svg(const std::vector<MetricsRow>& rows, const ZoneMap& map,
                           const std::vector<TargetConfig>& targets);

}  // namespace mrsearch
