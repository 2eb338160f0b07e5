#include "mrsearch/sim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mrsearch/error.hpp"

namespace mrsearch {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::InvalidConfig, field + ": " + why);
}

template <class T>
T read(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    bad(field, "wrong type");
  }
}

template <class T>
void read_opt(const YAML::Node& parent, const char* key, const std::string& path, T& out) {
  if (const auto n = parent[key]) out = read<T>(n, path + "." + key);
}

Point2 read_point(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence() || node.size() != 2) bad(field, "expected [x, y]");
  return {read<double>(node[0], field + "[0]"), read<double>(node[1], field + "[1]")};
}

PlannerKind read_planner(const YAML::Node& node, const std::string& field) {
  const auto s = read<std::string>(node, field);
  if (s == "guts") return PlannerKind::Guts;
  if (s == "coverage") return PlannerKind::Coverage;
  bad(field, "unknown planner '" + s + "'");
}

bool read_channel_mode(const YAML::Node& node, const std::string& field) {
  const auto s = read<std::string>(node, field);
  if (s == "enabled") return true;
  if (s == "disabled") return false;
  bad(field, "expected 'enabled' or 'disabled'");
}

void check_known_keys(const YAML::Node& node, const std::string& path, std::set<std::string> keys) {
  if (!node.IsMap()) bad(path.empty() ? "<root>" : path, "expected a table");
  for (const auto& kv : node) {
    const auto k = kv.first.as<std::string>();
    if (!keys.count(k)) bad(path.empty() ? k : path + "." + k, "unknown key");
  }
}

}  // namespace

const char* to_string(PlannerKind kind) { return kind == PlannerKind::Guts ? "guts" : "coverage"; }

void validate(const ScenarioConfig& c) {
  try {
    c.grid.validate();
  } catch (const Error& e) {
    bad("grid", e.what());
  }
  try {
    c.zone.validate();
  } catch (const Error& e) {
    bad("zone", e.what());
  }
  const ZoneMap map(c.grid, c.zone);  // DegenerateZone propagates

  if (c.robots.empty()) bad("robots", "at least one robot required");
  std::set<int> ids;
  for (std::size_t i = 0; i < c.robots.size(); ++i) {
    const auto& r = c.robots[i];
    const std::string f = "robots[" + std::to_string(i) + "]";
    if (!ids.insert(r.id).second) bad(f + ".id", "duplicate robot id");
    if (r.id < 0) bad(f + ".id", "must be >= 0");
    if (!c.grid.contains(r.start) || !c.zone.contains(r.start)) bad(f + ".start", "outside the zone");
    if (!(r.v_max > 0.0)) bad(f + ".v_max", "must be > 0");
    if (!(r.a_max > 0.0)) bad(f + ".a_max", "must be > 0");
    if (!(r.launch_delay >= 0.0)) bad(f + ".launch_delay", "must be >= 0");
  }
  for (std::size_t i = 0; i < c.targets.size(); ++i) {
    const auto& t = c.targets[i];
    const std::string f = "targets[" + std::to_string(i) + "]";
    if (!c.grid.valid_index(t.cell)) bad(f + ".cell", "outside the grid");
    if (!map.in_zone(t.cell)) bad(f + ".cell", "outside the zone");
    if (!(t.confidence > 0.0 && t.confidence <= 1.0)) bad(f + ".confidence", "must be in (0, 1]");
  }
  if (!(c.channel.drop_probability >= 0.0 && c.channel.drop_probability <= 1.0))
    bad("channel.drop_probability", "must be in [0, 1]");
  if (!(c.channel.latency >= 0.0)) bad("channel.latency", "must be >= 0");
  if (!(c.fusion.c_peer_pose > 0.0)) bad("fusion.c_peer_pose", "must be > 0");
  if (!(c.fusion.c_goal > 0.0)) bad("fusion.c_goal", "must be > 0");
  if (!(c.guts.lambda >= 0.0)) bad("planner.lambda", "must be >= 0");
  if (!(c.guts.c_plan > 0.0)) bad("planner.c_plan", "must be > 0");
  if (c.guts.em.max_iters < 1) bad("planner.em.max_iters", "must be >= 1");
  if (!(c.guts.em.tol > 0.0)) bad("planner.em.tol", "must be > 0");
  if (!(c.guts.em.initial_gamma > 0.0)) bad("planner.em.initial_gamma", "must be > 0");
  if (!(c.duration > 0.0)) bad("sim.duration", "must be > 0");
  if (!(c.tick > 0.0)) bad("sim.tick", "must be > 0");
  if (!(c.replan_lead >= 0.0)) bad("sim.replan_lead", "must be >= 0");
  if (!(c.metrics_interval >= c.tick)) bad("sim.metrics_interval", "must be >= sim.tick");
  if (c.trials < 1) bad("sim.trials", "must be >= 1");
  for (std::size_t i = 0; i < c.batch.confidence_sweep.size(); ++i) {
    const double v = c.batch.confidence_sweep[i];
    if (!(v > 0.0 && v <= 1.0)) bad("batch.confidence_sweep[" + std::to_string(i) + "]", "must be in (0, 1]");
  }
}

ScenarioConfig parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    bad("<root>", std::string("YAML parse error: ") + e.what());
  }
  check_known_keys(root, "", {"grid", "zone", "robots", "targets", "channel", "fusion", "planner", "sim", "batch"});

  ScenarioConfig c;
  const auto grid = root["grid"];
  if (!grid) bad("grid", "missing");
  check_known_keys(grid, "grid", {"width", "height", "cell_size", "origin"});
  c.grid.width_cells = read<int>(grid["width"], "grid.width");
  c.grid.height_cells = read<int>(grid["height"], "grid.height");
  c.grid.cell_size = read<double>(grid["cell_size"], "grid.cell_size");
  if (grid["origin"]) c.grid.origin = read_point(grid["origin"], "grid.origin");

  const auto zone = root["zone"];
  if (!zone || !zone.IsSequence()) bad("zone", "expected a list of [x, y] vertices");
  for (std::size_t i = 0; i < zone.size(); ++i)
    c.zone.vertices.push_back(read_point(zone[i], "zone[" + std::to_string(i) + "]"));

  const auto robots = root["robots"];
  if (!robots || !robots.IsSequence()) bad("robots", "expected a list");
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const std::string f = "robots[" + std::to_string(i) + "]";
    const auto n = robots[i];
    check_known_keys(n, f, {"id", "start", "planner", "v_max", "a_max", "launch_delay"});
    RobotConfig r;
    r.id = n["id"] ? read<int>(n["id"], f + ".id") : static_cast<int>(i);
    if (!n["start"]) bad(f + ".start", "missing");
    r.start = read_point(n["start"], f + ".start");
    if (n["planner"]) r.planner = read_planner(n["planner"], f + ".planner");
    read_opt(n, "v_max", f, r.v_max);
    read_opt(n, "a_max", f, r.a_max);
    read_opt(n, "launch_delay", f, r.launch_delay);
    c.robots.push_back(r);
  }

  if (const auto targets = root["targets"]) {
    if (!targets.IsSequence()) bad("targets", "expected a list");
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const std::string f = "targets[" + std::to_string(i) + "]";
      const auto n = targets[i];
      check_known_keys(n, f, {"cell", "confidence"});
      TargetConfig t;
      if (!n["cell"]) bad(f + ".cell", "missing");
      t.cell = read<int>(n["cell"], f + ".cell");
      read_opt(n, "confidence", f, t.confidence);
      c.targets.push_back(t);
    }
  }

  if (const auto ch = root["channel"]) {
    check_known_keys(ch, "channel", {"enabled", "drop_probability", "latency"});
    read_opt(ch, "enabled", "channel", c.channel.enabled);
    read_opt(ch, "drop_probability", "channel", c.channel.drop_probability);
    read_opt(ch, "latency", "channel", c.channel.latency);
  }
  if (const auto fu = root["fusion"]) {
    check_known_keys(fu, "fusion", {"c_peer_pose", "c_goal", "y_empty"});
    read_opt(fu, "c_peer_pose", "fusion", c.fusion.c_peer_pose);
    read_opt(fu, "c_goal", "fusion", c.fusion.c_goal);
    read_opt(fu, "y_empty", "fusion", c.fusion.y_empty);
  }
  if (const auto pl = root["planner"]) {
    check_known_keys(pl, "planner", {"lambda", "c_plan", "em"});
    read_opt(pl, "lambda", "planner", c.guts.lambda);
    read_opt(pl, "c_plan", "planner", c.guts.c_plan);
    if (const auto em = pl["em"]) {
      check_known_keys(em, "planner.em", {"max_iters", "tol", "a", "b", "initial_gamma"});
      read_opt(em, "max_iters", "planner.em", c.guts.em.max_iters);
      read_opt(em, "tol", "planner.em", c.guts.em.tol);
      read_opt(em, "a", "planner.em", c.guts.em.a);
      read_opt(em, "b", "planner.em", c.guts.em.b);
      read_opt(em, "initial_gamma", "planner.em", c.guts.em.initial_gamma);
    }
  }
  if (const auto sim = root["sim"]) {
    check_known_keys(sim, "sim", {"duration", "tick", "replan_lead", "metrics_interval", "trials", "seed"});
    read_opt(sim, "duration", "sim", c.duration);
    read_opt(sim, "tick", "sim", c.tick);
    read_opt(sim, "replan_lead", "sim", c.replan_lead);
    read_opt(sim, "metrics_interval", "sim", c.metrics_interval);
    read_opt(sim, "trials", "sim", c.trials);
    read_opt(sim, "seed", "sim", c.seed);
  }
  if (const auto b = root["batch"]) {
    check_known_keys(b, "batch", {"planners", "channels", "confidence_sweep"});
    if (const auto p = b["planners"])
      for (std::size_t i = 0; i < p.size(); ++i)
        c.batch.planners.push_back(read_planner(p[i], "batch.planners[" + std::to_string(i) + "]"));
    if (const auto ch = b["channels"])
      for (std::size_t i = 0; i < ch.size(); ++i)
        c.batch.channels.push_back(read_channel_mode(ch[i], "batch.channels[" + std::to_string(i) + "]"));
    read_opt(b, "confidence_sweep", "batch", c.batch.confidence_sweep);
  }

  validate(c);
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("config", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string emit_scenario(const ScenarioConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  auto point = [&](Point2 p) { out << YAML::Flow << YAML::BeginSeq << p.x << p.y << YAML::EndSeq; };

  out << YAML::BeginMap;
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "width" << YAML::Value << c.grid.width_cells;
  out << YAML::Key << "height" << YAML::Value << c.grid.height_cells;
  out << YAML::Key << "cell_size" << YAML::Value << c.grid.cell_size;
  out << YAML::Key << "origin" << YAML::Value;
  point(c.grid.origin);
  out << YAML::EndMap;

  out << YAML::Key << "zone" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : c.zone.vertices) point(v);
  out << YAML::EndSeq;

  out << YAML::Key << "robots" << YAML::Value << YAML::BeginSeq;
  for (const auto& r : c.robots) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << r.id;
    out << YAML::Key << "start" << YAML::Value;
    point(r.start);
    out << YAML::Key << "planner" << YAML::Value << to_string(r.planner);
    out << YAML::Key << "v_max" << YAML::Value << r.v_max;
    out << YAML::Key << "a_max" << YAML::Value << r.a_max;
    out << YAML::Key << "launch_delay" << YAML::Value << r.launch_delay;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "targets" << YAML::Value << YAML::BeginSeq;
  for (const auto& t : c.targets) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "cell" << YAML::Value << t.cell;
    out << YAML::Key << "confidence" << YAML::Value << t.confidence;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << c.channel.enabled;
  out << YAML::Key << "drop_probability" << YAML::Value << c.channel.drop_probability;
  out << YAML::Key << "latency" << YAML::Value << c.channel.latency;
  out << YAML::EndMap;

  out << YAML::Key << "fusion" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "c_peer_pose" << YAML::Value << c.fusion.c_peer_pose;
  out << YAML::Key << "c_goal" << YAML::Value << c.fusion.c_goal;
  out << YAML::Key << "y_empty" << YAML::Value << c.fusion.y_empty;
  out << YAML::EndMap;

  out << YAML::Key << "planner" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lambda" << YAML::Value << c.guts.lambda;
  out << YAML::Key << "c_plan" << YAML::Value << c.guts.c_plan;
  out << YAML::Key << "em" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "max_iters" << YAML::Value << c.guts.em.max_iters;
  out << YAML::Key << "tol" << YAML::Value << c.guts.em.tol;
  out << YAML::Key << "a" << YAML::Value << c.guts.em.a;
  out << YAML::Key << "b" << YAML::Value << c.guts.em.b;
  out << YAML::Key << "initial_gamma" << YAML::Value << c.guts.em.initial_gamma;
  out << YAML::EndMap << YAML::EndMap;

  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "duration" << YAML::Value << c.duration;
  out << YAML::Key << "tick" << YAML::Value << c.tick;
  out << YAML::Key << "replan_lead" << YAML::Value << c.replan_lead;
  out << YAML::Key << "metrics_interval" << YAML::Value << c.metrics_interval;
  out << YAML::Key << "trials" << YAML::Value << c.trials;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::EndMap;

  out << YAML::Key << "batch" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "planners" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto p : c.batch.planners) out << to_string(p);
  out << YAML::EndSeq;
  out << YAML::Key << "channels" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (bool e : c.batch.channels) out << (e ? "enabled" : "disabled");
  out << YAML::EndSeq;
  out << YAML::Key << "confidence_sweep" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double v : c.batch.confidence_sweep) out << v;
  out << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace mrsearch
