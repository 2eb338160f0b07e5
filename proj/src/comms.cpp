#include "mrsearch/comms.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <tuple>

#include "mrsearch/error.hpp"

namespace mrsearch {

const char* to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Pose: return "pose";
    case MessageKind::Goal: return "goal";
    case MessageKind::Track: return "track";
  }
  return "unknown";
}

void fuse_message(SensingDataset& dataset, const PeerMessage& msg, const FusionConfig& cfg, int num_cells) {
  for (int cell : msg.cells)
    if (cell < 0 || cell >= num_cells)
      throw Error(ErrorCode::InvalidCell, "message from robot " + std::to_string(msg.sender) +
                                              " names cell " + std::to_string(cell));
  switch (msg.kind) {
    case MessageKind::Pose:
      for (int cell : msg.cells)
        dataset.append({cell, cfg.y_empty, cfg.c_peer_pose, msg.sender, RecordKind::PeerPosition});
      break;
    case MessageKind::Goal:
      for (int cell : msg.cells)
        dataset.append({cell, cfg.y_empty, cfg.c_goal, msg.sender, RecordKind::PeerGoalCell});
      break;
    case MessageKind::Track:
      if (!(msg.confidence > 0.0))
        throw Error(ErrorCode::NonPositiveConfidence, "track confidence must be > 0");
      for (int cell : msg.cells)
        dataset.append({cell, msg.y, msg.confidence, msg.sender, RecordKind::PeerDetection});
      break;
  }
}

bool delivery_order(const PeerMessage& a, const PeerMessage& b) {
  return std::tie(a.timestamp, a.sender, a.seq) < std::tie(b.timestamp, b.sender, b.seq);
}

DeliveryResult deliver(std::vector<PeerMessage>& queue, const ChannelConfig& cfg, double now, Rng& rng) {
  DeliveryResult out;
  if (!cfg.enabled) {
    std::sort(queue.begin(), queue.end(), delivery_order);
    out.dropped = std::move(queue);
    queue.clear();
    return out;
  }
  std::vector<PeerMessage> due;
  std::vector<PeerMessage> waiting;
  for (auto& m : queue) (m.timestamp + cfg.latency <= now ? due : waiting).push_back(std::move(m));
  queue = std::move(waiting);
  std::sort(due.begin(), due.end(), delivery_order);

  std::bernoulli_distribution drop(std::clamp(cfg.drop_probability, 0.0, 1.0));
  for (auto& m : due) {
    const bool lost = cfg.drop_probability > 0.0 && drop(rng);
    (lost ? out.dropped : out.delivered).push_back(std::move(m));
  }
  return out;
}

}  // namespace mrsearch
