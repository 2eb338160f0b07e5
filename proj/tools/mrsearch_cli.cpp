// Command-line front end: run, batch, replay, plot.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mrsearch/error.hpp"
#include "mrsearch/sim/batch.hpp"
#include "mrsearch/sim/io.hpp"
#include "mrsearch/sim/scenario.hpp"
#include "mrsearch/sim/simulator.hpp"

namespace fs = std::filesystem;
using namespace mrsearch;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out) {
  const auto cfg = load_scenario(config);
  const auto s = seed.value_or(cfg.seed);
  const auto result = run_trial(cfg, s);
  write_run(out, cfg, result);
  const auto series = team_coverage_series(result);
  std::printf("seed %llu: final unknown-area reduction %.2f%%, %zu messages, output in %s\n",
              static_cast<unsigned long long>(s), series.empty() ? 0.0 : series.back(), result.messages.size(),
              out.c_str());
  for (std::size_t i = 0; i < result.targets.size(); ++i)
    std::printf("  target %zu (cell %d, c=%g): %d views\n", i, result.targets[i].cell,
                result.targets[i].confidence, result.targets[i].view_count);
  if (result.abort_cause) {
    std::fprintf(stderr, "trial aborted: %s\n", result.abort_cause->c_str());
    return 2;
  }
  return 0;
}

int cmd_batch(const std::string& config, const std::string& out) {
  const auto cfg = load_scenario(config);
  const auto report = run_batch(cfg);
  fs::create_directories(out);
  {
    std::ofstream f(fs::path(out) / "batch_coverage.csv");
    write_batch_coverage_csv(f, report);
  }
  {
    std::ofstream f(fs::path(out) / "batch_views.csv");
    write_batch_views_csv(f, report);
  }
  std::printf("%zu trial records\n", report.trial_records);
  std::printf("%-26s %10s %10s %10s\n", "arm", "mid-run", "final", "final-min");
  for (const auto& arm : report.arms) {
    if (arm.bins.empty()) continue;
    const auto& mid = arm.bins[arm.bins.size() / 2];
    std::printf("%-26s %9.2f%% %9.2f%% %9.2f%%\n", arm_label(arm.arm).c_str(), mid.median, arm.bins.back().median,
                arm.bins.back().min);
    for (const auto& c : arm.abort_causes) std::fprintf(stderr, "  aborted trial: %s\n", c.c_str());
  }
  for (const auto& row : report.sweep) std::printf("c=%-8g mean views per target %.2f\n", row.confidence, row.mean_views);
  return 0;
}

int cmd_replay(const std::string& log_path) {
  const fs::path log_file(log_path);
  const fs::path dir = log_file.parent_path().empty() ? fs::path(".") : log_file.parent_path();
  std::ifstream man_in(dir / "manifest.json");
  if (!man_in) throw Error(ErrorCode::InvalidConfig, "no manifest.json next to " + log_path);
  const auto manifest = read_manifest(man_in);
  if (sha256_hex(manifest.config_text) != manifest.config_hash)
    throw Error(ErrorCode::InvalidConfig, "manifest config hash mismatch");

  const std::string recorded_log = slurp(log_file);
  std::istringstream log_in(recorded_log);
  const auto outcomes = delivery_outcomes(read_message_log(log_in));

  const auto cfg = parse_scenario(manifest.config_text);
  const auto result = run_trial(cfg, manifest.seed, {.record_messages = true, .replay = &outcomes});

  std::ostringstream metrics, log;
  write_metrics_csv(metrics, result.metrics, cfg.targets.size());
  write_message_log(log, result.messages);
  const bool metrics_ok = metrics.str() == slurp(dir / manifest.metrics_file);
  const bool log_ok = log.str() == recorded_log;
  std::printf("metrics: %s\nmessage log: %s\n", metrics_ok ? "identical" : "DIFFERENT", log_ok ? "identical" : "DIFFERENT");
  return metrics_ok && log_ok ? 0 : 1;
}

int cmd_plot(const std::string& in_dir) {
  const fs::path dir(in_dir);
  std::ifstream man_in(dir / "manifest.json");
  if (!man_in) throw Error(ErrorCode::InvalidConfig, "no manifest.json in " + in_dir);
  const auto manifest = read_manifest(man_in);
  const auto cfg = parse_scenario(manifest.config_text);
  std::ifstream metrics_in(dir / manifest.metrics_file);
  const auto rows = read_metrics_csv(metrics_in);
  const ZoneMap map(cfg.grid, cfg.zone);
  std::ofstream(dir / "coverage.svg") << coverage_svg(rows);
  std::ofstream(dir / "trajectories.svg") << trajectory_svg(rows, map, cfg.targets);
  std::printf("wrote %s and %s\n", (dir / "coverage.svg").c_str(), (dir / "trajectories.svg").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized multi-robot active search simulator"};
  app.require_subcommand(1);

  std::string config, out = "out", log_path, in_dir;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run one trial and write metrics, message log and manifest");
  run->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Trial seed (defaults to sim.seed)");
  run->add_option("--out", out, "Output directory");

  auto* batch = app.add_subcommand("batch", "Run the planner x channel arms and the confidence sweep");
  batch->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  batch->add_option("--out", out, "Output directory");

  auto* replay = app.add_subcommand("replay", "Re-run a recorded trial and compare outputs byte for byte");
  replay->add_option("--log", log_path, "messages.jsonl of a recorded run")->required()->check(CLI::ExistingFile);

  auto* plot = app.add_subcommand("plot", "Write coverage and trajectory SVG figures for a run directory");
  plot->add_option("--in", in_dir, "Run output directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, seed, out);
    if (*batch) return cmd_batch(config, out);
    if (*replay) return cmd_replay(log_path);
    if (*plot) return cmd_plot(in_dir);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(e.name()).c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
