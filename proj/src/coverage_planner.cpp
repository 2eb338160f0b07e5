#include "mrsearch/coverage_planner.hpp"

namespace mrsearch {

VisitedMask::VisitedMask(const ZoneMap& map)
    : map_(&map),
      bits_(static_cast<std::size_t>(map.grid().num_cells()), false),
      center_in_total_(map.cells().center_in.size()) {}

bool VisitedMask::mark(int cell) {
  if (!map_->grid().valid_index(cell) || !map_->in_zone(cell)) return false;
  const auto i = static_cast<std::size_t>(cell);
  if (bits_[i]) return false;
  bits_[i] = true;
  ++count_;
  if (map_->classify(cell) == CellClass::CenterIn) ++center_in_visited_;
  return true;
}

std::optional<CandidateAction> select_coverage_action(const VisitedMask& visited, const ZoneMap& map,
                                                      Point2 robot_position) {
  if (visited.all_center_in_visited()) return std::nullopt;
  std::optional<CandidateAction> best;
  std::size_t best_gain = 0;
  // center_in is sorted, so a strict comparison keeps the lowest goal index.
  for (int goal : map.cells().center_in) {
    if (visited.visited(goal)) continue;
    auto cand = make_candidate(map, robot_position, goal, 1.0);
    std::size_t gain = 0;
    for (int c : cand.traversed_cells)
      if (!visited.visited(c)) ++gain;
    if (!best || gain > best_gain) {
      best_gain = gain;
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace mrsearch
