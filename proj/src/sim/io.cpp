#include "mrsearch/sim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "mrsearch/error.hpp"

namespace mrsearch {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

MessageKind kind_from(const std::string& s) {
  if (s == "pose") return MessageKind::Pose;
  if (s == "goal") return MessageKind::Goal;
  if (s == "track") return MessageKind::Track;
  throw Error(ErrorCode::InvalidConfig, "unknown message kind '" + s + "'");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows, std::size_t num_targets) {
  os << "time,robot,x,y,cells_visited,pct_unknown";
  for (std::size_t i = 0; i < num_targets; ++i) os << ",views_t" << i;
  os << '\n';
  for (const auto& r : rows) {
    os << fmt("%.3f", r.time) << ',';
    if (r.robot == kTeamRow) os << "team,,,";
    else os << r.robot << ',' << fmt("%.4f", r.position.x) << ',' << fmt("%.4f", r.position.y) << ',';
    os << r.cells_visited << ',' << fmt("%.6f", r.pct_unknown);
    for (std::size_t i = 0; i < num_targets; ++i) os << ',' << (i < r.views.size() ? r.views[i] : 0);
    os << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& is) {
  std::vector<MetricsRow> rows;
  std::string line;
  if (!std::getline(is, line)) return rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() < 6) throw Error(ErrorCode::InvalidConfig, "malformed metrics row: " + line);
    MetricsRow r;
    r.time = std::stod(f[0]);
    if (f[1] == "team") {
      r.robot = kTeamRow;
    } else {
      r.robot = std::stoi(f[1]);
      r.position = {std::stod(f[2]), std::stod(f[3])};
    }
    r.cells_visited = std::stoul(f[4]);
    r.pct_unknown = std::stod(f[5]);
    for (std::size_t i = 6; i < f.size(); ++i) r.views.push_back(std::stoi(f[i]));
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_message_log(std::ostream& os, const std::vector<MessageLogEntry>& log) {
  for (const auto& e : log) {
    ojson j;
    j["tick"] = e.tick;
    j["sender"] = e.msg.sender;
    j["receiver"] = e.msg.receiver;
    j["kind"] = to_string(e.msg.kind);
    j["timestamp"] = e.msg.timestamp;
    j["seq"] = e.msg.seq;
    ojson payload;
    switch (e.msg.kind) {
      case MessageKind::Pose: payload["cell"] = e.msg.cells.empty() ? -1 : e.msg.cells.front(); break;
      case MessageKind::Goal: payload["cells"] = e.msg.cells; break;
      case MessageKind::Track:
        payload["cell"] = e.msg.cells.empty() ? -1 : e.msg.cells.front();
        payload["y"] = e.msg.y;
        payload["confidence"] = e.msg.confidence;
        break;
    }
    j["payload"] = std::move(payload);
    j["delivered"] = e.delivered;
    os << j.dump() << '\n';
  }
}

std::vector<MessageLogEntry> read_message_log(std::istream& is) {
  std::vector<MessageLogEntry> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    MessageLogEntry e;
    e.tick = j.at("tick").get<long>();
    e.delivered = j.at("delivered").get<bool>();
    e.msg.kind = kind_from(j.at("kind").get<std::string>());
    e.msg.sender = j.at("sender").get<int>();
    e.msg.receiver = j.at("receiver").get<int>();
    e.msg.timestamp = j.at("timestamp").get<double>();
    e.msg.seq = j.at("seq").get<std::uint64_t>();
    const auto& p = j.at("payload");
    if (e.msg.kind == MessageKind::Goal) {
      e.msg.cells = p.at("cells").get<std::vector<int>>();
    } else {
      e.msg.cells = {p.at("cell").get<int>()};
    }
    if (e.msg.kind == MessageKind::Track) {
      e.msg.y = p.at("y").get<double>();
      e.msg.confidence = p.at("confidence").get<double>();
    }
    out.push_back(std::move(e));
  }
  return out;
}

DeliveryOverride delivery_outcomes(const std::vector<MessageLogEntry>& log) {
  DeliveryOverride out;
  for (const auto& e : log) out[{e.msg.receiver, e.msg.sender, e.msg.seq}] = e.delivered;
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::NumericalFailure, "sha256 failed");
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return ss.str();
}

RunManifest make_manifest(const ScenarioConfig& cfg, std::uint64_t seed) {
  RunManifest m;
  m.config_text = emit_scenario(cfg);
  m.config_hash = sha256_hex(m.config_text);
  m.seed = seed;
  return m;
}

void write_manifest(std::ostream& os, const RunManifest& m) {
  ojson j;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["metrics"] = m.metrics_file;
  j["messages"] = m.message_log_file;
  j["config"] = m.config_text;
  os << j.dump(2) << '\n';
}

RunManifest read_manifest(std::istream& is) {
  const auto j = nlohmann::json::parse(is);
  RunManifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.metrics_file = j.at("metrics").get<std::string>();
  m.message_log_file = j.at("messages").get<std::string>();
  m.config_text = j.at("config").get<std::string>();
  return m;
}

void write_run(const std::filesystem::path& dir, const ScenarioConfig& cfg, const TrialResult& result) {
  std::filesystem::create_directories(dir);
  const auto manifest = make_manifest(cfg, result.seed);
  std::ofstream(dir / manifest.metrics_file) << [&] {
    std::ostringstream ss;
    write_metrics_csv(ss, result.metrics, cfg.targets.size());
    return ss.str();
  }();
  std::ofstream log(dir / manifest.message_log_file);
  write_message_log(log, result.messages);
  std::ofstream man(dir / "manifest.json");
  write_manifest(man, manifest);
}

void write_batch_coverage_csv(std::ostream& os, const BatchReport& report) {
  os << "planner,channel,time,mean,min,max,median,trials\n";
  for (const auto& arm : report.arms)
    for (const auto& b : arm.bins)
      os << to_string(arm.arm.planner) << ',' << (arm.arm.channel_enabled ? "enabled" : "disabled") << ','
         << fmt("%.3f", b.time) << ',' << fmt("%.6f", b.mean) << ',' << fmt("%.6f", b.min) << ','
         << fmt("%.6f", b.max) << ',' << fmt("%.6f", b.median) << ',' << arm.team_pct.size() << '\n';
}

void write_batch_views_csv(std::ostream& os, const BatchReport& report) {
  os << "confidence,trial,target,views\n";
  for (const auto& row : report.sweep) {
    for (std::size_t k = 0; k < row.views.size(); ++k)
      for (std::size_t t = 0; t < row.views[k].size(); ++t)
        os << fmt("%g", row.confidence) << ',' << k << ',' << t << ',' << row.views[k][t] << '\n';
    os << fmt("%g", row.confidence) << ",mean,all," << fmt("%.3f", row.mean_views) << '\n';
  }
}

namespace {

constexpr const char* kPalette[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

std::string coverage_svg(const std::vector<MetricsRow>& rows) {
  const double W = 640, H = 400, L = 60, R = 20, T = 20, B = 50;
  double t_max = 1.0;
  for (const auto& r : rows) t_max = std::max(t_max, r.time);
  auto px = [&](double t) { return L + (W - L - R) * t / t_max; };
  auto py = [&](double p) { return H - B - (H - T - B) * p / 100.0; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << px(t_max) << "\" y2=\"" << py(0)
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << L << "\" y2=\"" << py(100)
    << "\" stroke=\"black\"/>\n";
  for (int p = 0; p <= 100; p += 25)
    s << "<text x=\"" << L - 8 << "\" y=\"" << py(p) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << p
      << "</text>\n";
  s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
    << "\" font-size=\"12\" text-anchor=\"middle\">time (s)</text>\n";
  s << "<text x=\"14\" y=\"" << (T + H - B) / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 "
    << (T + H - B) / 2 << ")\" text-anchor=\"middle\">unknown area reduced (%)</text>\n";

  std::vector<int> ids;
  for (const auto& r : rows)
    if (std::find(ids.begin(), ids.end(), r.robot) == ids.end()) ids.push_back(r.robot);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const bool team = ids[i] == kTeamRow;
    s << "<polyline fill=\"none\" stroke=\"" << (team ? "black" : kPalette[i % 6]) << "\" stroke-width=\""
      << (team ? 2.5 : 1.0) << "\" points=\"";
    for (const auto& r : rows)
      if (r.robot == ids[i]) s << fmt("%.2f", px(r.time)) << ',' << fmt("%.2f", py(r.pct_unknown)) << ' ';
    s << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string trajectory_svg(const std::vector<MetricsRow>& rows, const ZoneMap& map,
                           const std::vector<TargetConfig>& targets) {
  const auto& g = map.grid();
  const double size = 600, pad = 20;
  const double scale = (size - 2 * pad) / std::max(g.width_m(), g.height_m());
  auto px = [&](Point2 p) { return pad + (p.x - g.origin.x) * scale; };
  auto py = [&](Point2 p) { return size - pad - (p.y - g.origin.y) * scale; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int c = 0; c < g.num_cells(); ++c) {
    const auto lo = g.cell_min(c);
    const char* fill = map.classify(c) == CellClass::CenterIn ? "#eeeeee"
                       : map.classify(c) == CellClass::Sliver ? "#fde0c5"
                                                              : "white";
    s << "<rect x=\"" << fmt("%.2f", px(lo)) << "\" y=\"" << fmt("%.2f", py({lo.x, lo.y + g.cell_size}))
      << "\" width=\"" << fmt("%.2f", g.cell_size * scale) << "\" height=\"" << fmt("%.2f", g.cell_size * scale)
      << "\" fill=\"" << fill << "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
  }
  s << "<polygon fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\"";
  for (const auto& v : map.zone().vertices) s << fmt("%.2f", px(v)) << ',' << fmt("%.2f", py(v)) << ' ';
  s << "\"/>\n";

  std::vector<int> ids;
  for (const auto& r : rows)
    if (r.robot != kTeamRow && std::find(ids.begin(), ids.end(), r.robot) == ids.end()) ids.push_back(r.robot);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    s << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 6] << "\" stroke-width=\"1.2\" points=\"";
    for (const auto& r : rows)
      if (r.robot == ids[i]) s << fmt("%.2f", px(r.position)) << ',' << fmt("%.2f", py(r.position)) << ' ';
    s << "\"/>\n";
  }
  for (const auto& t : targets) {
    const auto c = g.center(t.cell);
    const double x = px(c), y = py(c), d = 5;
    s << "<path d=\"M" << x - d << ',' << y - d << " L" << x + d << ',' << y + d << " M" << x - d << ','
      << y + d << " L" << x + d << ',' << y - d << "\" stroke=\"blue\" stroke-width=\"2\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace mrsearch
