#pragma once

#include <cstdint>
#include <vector>

#include "mrsearch/belief.hpp"
#include "mrsearch/random.hpp"

namespace mrsearch {

enum class MessageKind { Pose, Goal, Track };

const char* to_string(MessageKind kind);

/// Grid-relative message between robots. Pose and Track carry one cell,
/// Goal carries the sender's ordered traversed cells.
struct PeerMessage {
  MessageKind kind = MessageKind::Pose;
  int sender = 0;
  int receiver = 0;
  double timestamp = 0.0;
  std::uint64_t seq = 0;  // per-sender send counter
  std::vector<int> cells;
  double y = 0.0;
  double confidence = 1.0;

  friend bool operator==(const PeerMessage&, const PeerMessage&) = default;
};

struct ChannelConfig {
  bool enabled = true;
  double drop_probability = 0.0;
  double latency = 0.0;
};

struct FusionConfig {
  double c_peer_pose = 1.0;
  double c_goal = 0.5;
  double y_empty = 0.0;
};

/// Appends the rows a message implies to the receiver's dataset, existing
/// rows first and new rows in payload order. Throws InvalidCell.
void fuse_message(SensingDataset& dataset, const PeerMessage& msg, const FusionConfig& cfg,
                  int num_cells);

struct DeliveryResult {
  std::vector<PeerMessage> delivered;
  std::vector<PeerMessage> dropped;
};

/// Canonical delivery order: (timestamp, sender, seq).
bool delivery_order(const PeerMessage& a, const PeerMessage& b);

/// Resolves every queued message that is due (timestamp + latency <= now) and
/// removes it from `queue`. Each due message is dropped independently with
/// drop_probability; rolls are taken in canonical order so the outcome does
/// not depend on queue order. A disabled channel drops everything queued.
DeliveryResult deliver(std::vector<PeerMessage>& queue, const ChannelConfig& cfg, double now,
                       Rng& rng);

}  // namespace mrsearch
