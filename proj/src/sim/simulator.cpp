#include "mrsearch/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrsearch/error.hpp"
#include "mrsearch/guts_planner.hpp"

namespace mrsearch {

namespace {

constexpr double kDwellLength = 1e-9;

bool contains_cell(const std::vector<int>& cells, int c) {
  return std::find(cells.begin(), cells.end(), c) != cells.end();
}

}  // namespace

SensingRecord sense(int cell, std::vector<Target>& targets, int robot_id, double y_empty,
                    std::vector<int>* robot_views) {
  SensingRecord rec{cell, y_empty, 1.0, robot_id, RecordKind::SelfPosition};
  bool hit = false;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].cell != cell) continue;
    if (!hit) {
      rec.y = 1.0;
      rec.confidence = targets[i].confidence;
      rec.kind = RecordKind::SelfDetection;
      hit = true;
    }
    ++targets[i].view_count;
    if (robot_views) ++(*robot_views)[i];
  }
  return rec;
}

RobotState::RobotState(const RobotConfig& c, const ZoneMap& map, std::uint64_t seed, std::size_t num_targets)
    : cfg(c),
      position(c.start),
      sensed(map),
      known(map),
      rng(make_stream(seed, {static_cast<std::uint64_t>(c.id), 1})),
      views(num_targets, 0),
      channel_rng(make_stream(seed, {static_cast<std::uint64_t>(c.id), 2})) {}

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed, TrialOptions opts)
    : cfg_(cfg), seed_(seed), opts_(opts), map_(cfg.grid, cfg.zone) {
  validate(cfg_);
  for (const auto& t : cfg_.targets) targets_.push_back({t.cell, t.confidence, 0});
  robots_.reserve(cfg_.robots.size());
  for (const auto& rc : cfg_.robots) robots_.emplace_back(rc, map_, seed_, targets_.size());
  total_ticks_ = std::llround(cfg_.duration / cfg_.tick);
  metrics_every_ = std::max<long>(1, std::llround(cfg_.metrics_interval / cfg_.tick));
  record_metrics();
}

void Simulation::run() {
  while (!finished()) advance();
}

void Simulation::advance() {
  if (finished()) return;
  try {
    deliver_all();
    for (std::size_t i = 0; i < robots_.size(); ++i) step_robot(i);
    for (auto& r : robots_) {
      if (!r.launched) continue;
      if (auto cell = map_.grid().cell_at(r.position)) broadcast(r, MessageKind::Pose, {*cell}, 0.0, 1.0);
    }
  } catch (const Error& e) {
    abort_cause_ = e.what();
  }
  ++tick_;
  if (tick_ % metrics_every_ == 0 || abort_cause_) record_metrics();
}

StepEvents Simulation::step_robot(std::size_t index) {
  StepEvents ev;
  auto& r = robots_[index];
  if (!r.launched) {
    if (now() + 1e-9 >= r.cfg.launch_delay) launch(r, ev);
    return ev;
  }
  if (!r.motion) {
    if (!r.done) {
      ev.replanned = true;
      if (auto a = plan(r, r.position)) start_motion(r, std::move(*a), ev);
      else r.done = true;
    }
    return ev;
  }

  auto& m = *r.motion;
  const Point2 old = r.position;
  m.elapsed = std::min(m.elapsed + cfg_.tick, m.x.T);
  r.position = {eval(m.x, m.elapsed).position, eval(m.y, m.elapsed).position};
  r.heading = wrap_angle(eval(m.heading, m.elapsed).position);

  const auto& grid = map_.grid();
  const auto here = supercover_trace(grid, old, old);
  for (int cell : supercover_trace(grid, old, r.position))
    if (!contains_cell(here, cell)) record_sensing(r, cell, ev);

  if (!r.next_action && !r.done && m.x.T - m.elapsed <= cfg_.replan_lead + 1e-12) {
    ev.replanned = true;
    if (auto a = plan(r, m.action.goal)) r.next_action = std::move(a);
    else r.done = true;
  }
  if (m.elapsed >= m.x.T) {
    r.position = m.action.goal;
    r.motion.reset();
    ev.arrived = true;
    if (r.next_action) {
      auto next = std::move(*r.next_action);
      r.next_action.reset();
      start_motion(r, std::move(next), ev);
    }
  }
  return ev;
}

void Simulation::command(std::size_t index, int goal_cell) {
  auto& r = robots_[index];
  r.launched = true;
  r.next_action.reset();
  r.motion.reset();
  StepEvents ev;
  start_motion(r, make_candidate(map_, r.position, goal_cell, cfg_.guts.c_plan), ev);
}

void Simulation::launch(RobotState& r, StepEvents& ev) {
  r.launched = true;
  if (auto cell = map_.grid().cell_at(r.position)) record_sensing(r, *cell, ev);
  ev.replanned = true;
  if (auto a = plan(r, r.position)) start_motion(r, std::move(*a), ev);
  else r.done = true;
}

void Simulation::start_motion(RobotState& r, CandidateAction action, StepEvents& ev) {
  const Point2 delta = action.goal - r.position;
  const double dist = norm(delta);
  if (dist < kDwellLength) {
    // Zero-length action: sense the current cell once and replan next tick.
    if (auto cell = map_.grid().cell_at(r.position)) record_sensing(r, *cell, ev);
    r.motion.reset();
    return;
  }
  const double v = r.cfg.v_max, a = r.cfg.a_max;
  AxisBoundary path{0.0, 0.0, 0.0, dist, 0.0, 0.0, std::max(dist / v, std::sqrt(dist / a))};
  const double T = rescale_time(path, v, a).T;

  ActiveMotion m;
  m.x = solve_quintic({r.position.x, 0.0, 0.0, action.goal.x, 0.0, 0.0, T});
  m.y = solve_quintic({r.position.y, 0.0, 0.0, action.goal.y, 0.0, 0.0, T});
  const double psi_goal = r.heading + wrap_angle(std::atan2(delta.y, delta.x) - r.heading);
  m.heading = solve_quintic({r.heading, 0.0, 0.0, psi_goal, 0.0, 0.0, T});
  m.action = std::move(action);
  r.motion = std::move(m);
}

std::optional<CandidateAction> Simulation::plan(RobotState& r, Point2 from) {
  ++r.plans;
  std::optional<CandidateAction> action;
  if (r.cfg.planner == PlannerKind::Guts) {
    const auto evidence = accumulate_evidence(r.dataset, map_.grid().num_cells());
    const auto posterior = em_posterior(evidence, cfg_.guts.em);
    action = select_action(evidence, map_, from, posterior, r.rng, cfg_.guts).action;
  } else {
    // The committed action will be flown before the new one starts.
    VisitedMask mask = r.known;
    if (r.motion)
      for (int c : r.motion->action.traversed_cells) mask.mark(c);
    action = select_coverage_action(mask, map_, from);
  }
  if (action && !action->traversed_cells.empty())
    broadcast(r, MessageKind::Goal, action->traversed_cells, 0.0, 1.0);
  return action;
}

void Simulation::record_sensing(RobotState& r, int cell, StepEvents& ev) {
  if (!map_.in_zone(cell)) return;
  const auto rec = sense(cell, targets_, r.cfg.id, cfg_.fusion.y_empty, &r.views);
  r.dataset.append(rec);
  r.sensed.mark(cell);
  r.known.mark(cell);
  ev.sensed.push_back(rec);
  if (rec.kind == RecordKind::SelfDetection) broadcast(r, MessageKind::Track, {cell}, rec.y, rec.confidence);
}

void Simulation::broadcast(RobotState& r, MessageKind kind, std::vector<int> cells, double y, double c) {
  if (robots_.size() < 2) return;
  const double stamp = static_cast<double>(tick_ + 1) * cfg_.tick;
  const std::uint64_t seq = r.send_seq++;
  for (auto& other : robots_) {
    if (other.cfg.id == r.cfg.id) continue;
    other.inbox.push_back({kind, r.cfg.id, other.cfg.id, stamp, seq, cells, y, c});
  }
}

void Simulation::deliver_all() {
  const double t = now();
  const int num_cells = map_.grid().num_cells();
  for (auto& r : robots_) {
    if (r.inbox.empty()) continue;
    DeliveryResult res;
    if (opts_.replay) {
      // Outcomes come from the recorded log; only timing is recomputed.
      std::vector<PeerMessage> waiting;
      for (auto& m : r.inbox) {
        if (cfg_.channel.enabled && m.timestamp + cfg_.channel.latency > t) {
          waiting.push_back(std::move(m));
          continue;
        }
        const auto it = opts_.replay->find({m.receiver, m.sender, m.seq});
        if (it == opts_.replay->end())
          throw Error(ErrorCode::InvalidConfig, "replay log has no entry for message " + std::to_string(m.seq) +
                                                    " from robot " + std::to_string(m.sender));
        (it->second ? res.delivered : res.dropped).push_back(std::move(m));
      }
      r.inbox = std::move(waiting);
      std::sort(res.delivered.begin(), res.delivered.end(), delivery_order);
      std::sort(res.dropped.begin(), res.dropped.end(), delivery_order);
    } else {
      res = deliver(r.inbox, cfg_.channel, t, r.channel_rng);
    }

    for (const auto& m : res.delivered) {
      // A peer visit adds one row per cell entry, like own sensing: a pose
      // repeating the sender's last pose or track cell is not fused again.
      if (m.kind != MessageKind::Goal && !m.cells.empty()) {
        auto [it, fresh] = r.last_peer_cell.try_emplace(m.sender, m.cells.front());
        if (m.kind == MessageKind::Pose && !fresh && it->second == m.cells.front()) continue;
        it->second = m.cells.front();
      }
      fuse_message(r.dataset, m, cfg_.fusion, num_cells);
      for (int c : m.cells) r.known.mark(c);
    }
    if (opts_.record_messages) {
      std::vector<MessageLogEntry> entries;
      for (auto& m : res.delivered) entries.push_back({tick_, std::move(m), true});
      for (auto& m : res.dropped) entries.push_back({tick_, std::move(m), false});
      std::sort(entries.begin(), entries.end(),
                [](const MessageLogEntry& a, const MessageLogEntry& b) { return delivery_order(a.msg, b.msg); });
      for (auto& e : entries) log_.push_back(std::move(e));
    }
  }
}

namespace {

std::size_t union_sensed(const ZoneMap& map, const std::vector<RobotState>& robots) {
  std::size_t union_count = 0;
  for (int c = 0; c < map.grid().num_cells(); ++c)
    for (const auto& r : robots)
      if (r.sensed.visited(c)) {
        ++union_count;
        break;
      }
  return union_count;
}

}  // namespace

double Simulation::team_pct_unknown() const {
  return 100.0 * static_cast<double>(union_sensed(map_, robots_)) /
         static_cast<double>(map_.searchable_count());
}

void Simulation::record_metrics() {
  const double t = now();
  const double total = static_cast<double>(map_.searchable_count());
  for (const auto& r : robots_) {
    metrics_.push_back({t, r.cfg.id, r.position, r.sensed.count(),
                        100.0 * static_cast<double>(r.sensed.count()) / total, r.views});
  }
  const std::size_t team_count = union_sensed(map_, robots_);
  MetricsRow team{t, kTeamRow, {}, team_count, 100.0 * static_cast<double>(team_count) / total, {}};
  for (const auto& tg : targets_) team.views.push_back(tg.view_count);
  metrics_.push_back(std::move(team));
}

TrialResult Simulation::take_result() {
  TrialResult out;
  out.seed = seed_;
  out.metrics = std::move(metrics_);
  out.messages = std::move(log_);
  out.targets = targets_;
  out.abort_cause = abort_cause_;
  for (auto& r : robots_) {
    out.datasets.push_back(r.dataset);
    out.plans_per_robot.push_back(r.plans);
  }
  return out;
}

TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t seed, TrialOptions opts) {
  Simulation sim(cfg, seed, opts);
  sim.run();
  return sim.take_result();
}

std::vector<double> team_coverage_series(const TrialResult& result) {
  std::vector<double> out;
  for (const auto& row : result.metrics)
    if (row.robot == kTeamRow) out.push_back(row.pct_unknown);
  return out;
}

}  // namespace mrsearch
