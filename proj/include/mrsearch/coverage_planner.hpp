#pragma once

#include <optional>
#include <vector>

#include "mrsearch/action_model.hpp"

namespace mrsearch {

/// Cells known to be visited. Only searchable (center-in or sliver) cells are
/// ever marked, and marks are never removed.
class VisitedMask {
 public:
  explicit VisitedMask(const ZoneMap& map);

  /// Returns true if the cell was newly marked.
  bool mark(int cell);
  bool visited(int cell) const { return bits_[static_cast<std::size_t>(cell)]; }
  std::size_t count() const { return count_; }
  /// True when every center-in cell is marked.
  bool all_center_in_visited() const { return center_in_visited_ == center_in_total_; }

 private:
  const ZoneMap* map_;
  std::vector<bool> bits_;
  std::size_t count_ = 0;
  std::size_t center_in_visited_ = 0;
  std::size_t center_in_total_ = 0;
};

/// Greedy baseline: among unvisited center-in goals pick the straight-line
/// action crossing the most unvisited cells; ties go to the lowest goal index.
/// Returns nullopt ("done") once every center-in cell is visited.
std::optional<CandidateAction> select_coverage_action(const VisitedMask& visited,
                                                      const ZoneMap& map, Point2 robot_position);

}  // namespace mrsearch
