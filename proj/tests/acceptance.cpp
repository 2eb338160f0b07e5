// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "mrsearch/belief.hpp"
#include "mrsearch/guts_planner.hpp"
#include "mrsearch/sim/batch.hpp"
#include "mrsearch/sim/io.hpp"
#include "mrsearch/sim/scenario.hpp"
#include "mrsearch/sim/simulator.hpp"
#include "mrsearch/trajectory.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mrsearch;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path scenario(const char* name) { return fs::path(MRSEARCH_SOURCE_DIR) / "scenarios" / name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& ref) {
  return (got - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.cwiseAbs().maxCoeff());
}

void em_against_dense_oracle() {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> msz(1, 20), nsz(0, 40);
  std::uniform_real_distribution<double> conf(0.005, 2.0), obs(-1.0, 2.0);
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int inst = 0; inst < 100; ++inst) {
    const int m = msz(gen), n = nsz(gen);
    std::uniform_int_distribution<int> cell(0, m - 1);
    SensingDataset d;
    for (int i = 0; i < n; ++i) d.append({cell(gen), obs(gen), conf(gen), 0, RecordKind::SelfPosition});
    const auto post = em_posterior(d, GridSpec{m, 1, 1.0, {}});
    Eigen::VectorXd gamma;
    const auto ref = oracle::dense_em(d, m, 100, 1e-6, 0.1, 1.0, &gamma);
    worst = std::max({worst, rel_err(post.mean, ref.mean), rel_err(post.covariance, ref.cov),
                      rel_err(post.responsibilities, gamma)});
  }
  const double secs = seconds_since(t0);
  report(worst < 1e-8 && secs < 5.0, "EM matches dense oracle",
         fmt("100 instances, worst relative error %.2e, %.2f s", worst, secs));
}

void quintic_accuracy() {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> p(-50.0, 50.0), v(-5.0, 5.0), a(-3.0, 3.0), T(0.1, 30.0);
  double residual = 0.0, fd = 0.0;
  const double h = 1e-6;
  for (int i = 0; i < 10000; ++i) {
    const AxisBoundary b{p(gen), v(gen), a(gen), p(gen), v(gen), a(gen), T(gen)};
    const auto s = solve_quintic(b);
    const auto e0 = eval(s, 0.0), eT = eval(s, b.T);
    residual = std::max({residual, std::abs(e0.position - b.p0), std::abs(e0.velocity - b.v0),
                         std::abs(e0.acceleration - b.a0), std::abs(eT.position - b.pf),
                         std::abs(eT.velocity - b.vf), std::abs(eT.acceleration - b.af)});
    for (int k = 1; k < 20; ++k) {
      const double t = b.T * k / 20.0;
      const auto st = eval(s, t), lo = eval(s, t - h), hi = eval(s, t + h);
      fd = std::max({fd, std::abs((hi.position - lo.position) / (2 * h) - st.velocity) / std::max(1.0, std::abs(st.velocity)),
                     std::abs((hi.velocity - lo.velocity) / (2 * h) - st.acceleration) / std::max(1.0, std::abs(st.acceleration)),
                     std::abs((hi.acceleration - lo.acceleration) / (2 * h) - st.jerk) / std::max(1.0, std::abs(st.jerk))});
    }
  }
  const auto unit = solve_quintic({0, 0, 0, 1, 0, 0, 1.0});
  const double coef = std::max({std::abs(unit.alpha - 720.0), std::abs(unit.kappa + 360.0), std::abs(unit.eta - 60.0)});
  const double peak = std::abs(check_limits(unit, 2.0, 100.0).worst_v - 1.875);
  report(residual < 1e-6 && fd < 1e-4 && coef < 1e-9 && peak < 1e-9, "quintic trajectories",
         fmt("10000 segments, boundary residual %.2e, derivative mismatch %.2e, unit-move coefficients off by %.1e, "
             "peak speed off by %.1e",
             residual, fd, coef, peak));
}

const ArmSummary& arm(const BatchReport& r, PlannerKind p, bool enabled) {
  for (const auto& a : r.arms)
    if (a.arm.planner == p && a.arm.channel_enabled == enabled) return a;
  throw std::runtime_error("missing arm " + arm_label({p, enabled}));
}

double median_at(const BatchReport& r, const ArmSummary& a, double t) {
  for (std::size_t i = 0; i < r.times.size(); ++i)
    if (std::abs(r.times[i] - t) < 1e-9) return a.bins[i].median;
  throw std::runtime_error("no bin at t=" + std::to_string(t));
}

void coverage_arms() {
  const auto cfg = load_scenario(scenario("rotated_square_search.yaml"));
  const auto t0 = Clock::now();
  const auto r = run_batch(cfg);
  const double secs = seconds_since(t0);
  const double mid = cfg.duration / 2.0;

  const auto& gd = arm(r, PlannerKind::Guts, false);
  const auto& cd = arm(r, PlannerKind::Coverage, false);
  const double g_mid = median_at(r, gd, mid), c_mid = median_at(r, cd, mid);
  report(g_mid > c_mid, "comm-denied advantage",
         fmt("%d robots, %d seeds, median unknown-area reduction at %.0f s: GUTS %.2f%% vs coverage %.2f%% (%.1f s)",
             static_cast<int>(cfg.robots.size()), cfg.trials, mid, g_mid, c_mid, secs));

  const auto& ge = arm(r, PlannerKind::Guts, true);
  const auto& ce = arm(r, PlannerKind::Coverage, true);
  const double g_end = ge.bins.back().median, c_end = ce.bins.back().median;
  report(std::abs(g_end - c_end) <= 5.0 && g_end >= c_end, "comm-enabled parity",
         fmt("final median: GUTS %.2f%% vs coverage %.2f%%", g_end, c_end));
}

std::string sweep_line(const std::vector<ViewSweepRow>& rows, bool& ordered, double& ratio) {
  std::string s;
  ordered = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s += fmt("%sc=%g: %.2f", i ? ", " : "", rows[i].confidence, rows[i].mean_views);
    if (i && !(rows[i].confidence < rows[i - 1].confidence && rows[i].mean_views > rows[i - 1].mean_views)) ordered = false;
  }
  ratio = rows.empty() ? 0.0 : rows.back().mean_views / std::max(1e-12, rows.front().mean_views);
  return s;
}

void confidence_sweep() {
  bool all_ok = true;
  std::string detail, info;
  for (const char* name : {"confidence_one_target.yaml", "confidence_two_targets.yaml"}) {
    auto cfg = load_scenario(scenario(name));
    bool ordered = false;
    double ratio = 0.0;
    auto line = sweep_line(run_confidence_sweep(cfg), ordered, ratio);
    all_ok = all_ok && ordered && ratio >= 1.5;
    detail += fmt("%s%zu target(s) [%s] ratio %.2f", detail.empty() ? "" : "; ", cfg.targets.size(), line.c_str(), ratio);

    cfg.channel.enabled = true;
    line = sweep_line(run_confidence_sweep(cfg), ordered, ratio);
    info += fmt("%s%zu target(s) [%s] ratio %.2f%s", info.empty() ? "" : "; ", cfg.targets.size(), line.c_str(), ratio,
                ordered ? "" : " (not ordered)");
  }
  report(all_ok, "confidence sweep", "mean views per target, channel disabled: " + detail);
  std::printf("[INFO] confidence sweep with the channel enabled: %s\n", info.c_str());
}

bool replay_identical(const ScenarioConfig& cfg, std::uint64_t seed, const fs::path& dir) {
  fs::remove_all(dir);
  write_run(dir, cfg, run_trial(cfg, seed));

  std::ifstream man_in(dir / "manifest.json");
  const auto manifest = read_manifest(man_in);
  if (sha256_hex(manifest.config_text) != manifest.config_hash) return false;
  const std::string recorded_log = slurp(dir / manifest.message_log_file);
  std::istringstream log_in(recorded_log);
  const auto outcomes = delivery_outcomes(read_message_log(log_in));
  const auto again_cfg = parse_scenario(manifest.config_text);
  const auto again = run_trial(again_cfg, manifest.seed, {.record_messages = true, .replay = &outcomes});
  std::ostringstream metrics, log;
  write_metrics_csv(metrics, again.metrics, again_cfg.targets.size());
  write_message_log(log, again.messages);
  return metrics.str() == slurp(dir / manifest.metrics_file) && log.str() == recorded_log;
}

void determinism_and_replay() {
  const fs::path root = fs::temp_directory_path() / "mrsearch_acceptance";
  auto lossy = load_scenario(scenario("rotated_square_search.yaml"));
  lossy.duration = 150.0;
  lossy.channel.drop_probability = 0.3;
  lossy.channel.latency = 0.2;
  auto mixed = lossy;
  mixed.robots[2].planner = PlannerKind::Coverage;
  const auto targets = load_scenario(scenario("confidence_two_targets.yaml"));
  auto targets_on = targets;
  targets_on.channel = {true, 0.25, 0.0};

  int ok = 0, total = 0;
  for (const auto& [cfg, seed] : {std::pair{lossy, std::uint64_t{11}}, std::pair{mixed, std::uint64_t{12}},
                                  std::pair{targets, std::uint64_t{13}}, std::pair{targets_on, std::uint64_t{14}}}) {
    ok += replay_identical(cfg, seed, root / std::to_string(total));
    ++total;
  }
  fs::remove_all(root);
  report(ok == total, "determinism and replay",
         fmt("%d of %d recorded trials re-ran from manifest and message log with byte-identical outputs", ok, total));
}

void fusion_noop() {
  auto cfg = load_scenario(scenario("rotated_square_search.yaml"));
  cfg.duration = 300.0;
  cfg.channel.enabled = false;
  cfg.robots[1].start = {150.0, 150.0};
  cfg.robots[2].planner = PlannerKind::Coverage;
  cfg.targets = {{200, 0.2}, {350, 0.5}};
  const auto team = run_trial(cfg, 5);
  bool same = true;
  for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
    auto solo_cfg = cfg;
    solo_cfg.robots = {cfg.robots[i]};
    const auto solo = run_trial(solo_cfg, 5);
    std::vector<const MetricsRow*> mine, alone;
    for (const auto& r : team.metrics)
      if (r.robot == cfg.robots[i].id) mine.push_back(&r);
    for (const auto& r : solo.metrics)
      if (r.robot == cfg.robots[i].id) alone.push_back(&r);
    same = same && mine.size() == alone.size() && team.datasets[i] == solo.datasets[0] &&
           team.plans_per_robot[i] == solo.plans_per_robot[0];
    for (std::size_t k = 0; same && k < mine.size(); ++k)
      same = mine[k]->position == alone[k]->position && mine[k]->cells_visited == alone[k]->cells_visited &&
             mine[k]->pct_unknown == alone[k]->pct_unknown && mine[k]->views == alone[k]->views;
  }
  report(same, "fusion no-op without a channel",
         fmt("%zu robots in a team vs alone: trajectories, datasets and metrics %s", cfg.robots.size(),
             same ? "identical" : "differ"));
}

void throughput() {
  omp_set_num_threads(1);
  const GridSpec g{20, 20, 15.0, {}};
  const ZoneMap map(g, ZonePolygon{{{0, 0}, {300, 0}, {300, 300}, {0, 300}}});
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> cell(0, 399);
  SensingDataset d;
  for (int i = 0; i < 800; ++i) d.append({cell(gen), i % 97 == 0 ? 1.0 : 0.0, i % 97 == 0 ? 0.2 : 1.0, 0, RecordKind::SelfPosition});
  Rng rng = make_stream(1, {0, 1});
  const GutsConfig gcfg;
  const int rounds = 5;
  auto t0 = Clock::now();
  for (int i = 0; i < rounds; ++i) {
    const auto post = em_posterior(d, g, gcfg.em);
    select_action(accumulate_evidence(d, g.num_cells()), map, g.center(cell(gen)), post, rng, gcfg);
  }
  const double per_round = seconds_since(t0) / rounds;

  std::uniform_real_distribution<double> p(-150.0, 150.0), v(-5.0, 5.0), T(1.0, 40.0);
  const int n = 20000;
  int feasible = 0;
  t0 = Clock::now();
  for (int i = 0; i < n; ++i) {
    const auto s = solve_quintic({p(gen), v(gen), 0.0, p(gen), v(gen), 0.0, T(gen)});
    feasible += check_limits(s, 10.0, 5.0).feasible;
  }
  const double rate = n / seconds_since(t0);
  omp_set_num_threads(omp_get_num_procs());
  report(per_round < 1.0 && rate > 10000.0, "throughput",
         fmt("20x20 planning round %.1f ms on one thread; %.0f segments/s solved and limit-checked (%d feasible)",
             per_round * 1e3, rate, feasible));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks{em_against_dense_oracle, quintic_accuracy, coverage_arms,
                                                  confidence_sweep,        determinism_and_replay, fusion_noop,
                                                  throughput};
  for (const auto& c : checks) {
    try {
      c();
    } catch (const std::exception& e) {
      report(false, "error", e.what());
    }
  }
  std::printf("%s\n", failures ? "acceptance: FAILED" : "acceptance: all criteria passed");
  return failures ? 1 : 0;
}
