#pragma once

#include <cstdint>
#include <vector>

#include "mrsearch/belief.hpp"
#include "mrsearch/grid.hpp"

namespace mrsearch {

/// Convex, counter-clockwise search polygon in world meters.
struct ZonePolygon {
  std::vector<Point2> vertices;

  /// Throws InvalidConfig unless the polygon is convex, CCW and has area.
  void validate() const;
  double area() const;
  /// Boundary counts as inside.
  bool contains(Point2 p, double tol = 1e-9) const;
};

enum class CellClass : std::uint8_t { Outside, Sliver, CenterIn };

/// Center-in cells have their center inside (or on) the polygon; sliver cells
/// overlap the polygon with positive area but have their center outside.
struct ZoneCells {
  std::vector<int> center_in;
  std::vector<int> sliver;
};

/// Throws DegenerateZone when the polygon covers less than one cell of area.
ZoneCells cells_in_zone(const GridSpec& grid, const ZonePolygon& zone);

/// Grid and zone bundled with the per-cell classification, computed once.
class ZoneMap {
 public:
  ZoneMap(GridSpec grid, ZonePolygon zone);

  const GridSpec& grid() const { return grid_; }
  const ZonePolygon& zone() const { return zone_; }
  const ZoneCells& cells() const { return cells_; }
  CellClass classify(int cell) const { return classes_[static_cast<std::size_t>(cell)]; }
  bool in_zone(int cell) const { return classify(cell) != CellClass::Outside; }
  /// Number of center-in plus sliver cells.
  std::size_t searchable_count() const { return cells_.center_in.size() + cells_.sliver.size(); }

 private:
  GridSpec grid_;
  ZonePolygon zone_;
  std::vector<CellClass> classes_;
  ZoneCells cells_;
};

inline constexpr double kCornerTolerance = 1e-9;

/// Every cell whose closed square (grown by kCornerTolerance) meets the
/// segment, ordered from `start` to `end`. Corner grazes are included.
/// Throws OutOfBounds if either endpoint lies outside the grid.
std::vector<int> supercover_trace(const GridSpec& grid, Point2 start, Point2 end);

/// A straight-line sensing action to the center of `goal_cell`.
struct CandidateAction {
  Point2 start{};
  Point2 goal{};
  int goal_cell = 0;
  std::vector<int> traversed_cells;
  std::vector<SensingRecord> planned_rows;
};

/// Builds the action from `start` to the center of `goal_cell`, dropping traced
/// cells that lie fully outside the zone.
CandidateAction make_candidate(const ZoneMap& map, Point2 start, int goal_cell, double c_plan);

/// One candidate per center-in cell, in increasing goal index.
std::vector<CandidateAction> enumerate_candidates(const ZoneMap& map, Point2 robot_position,
                                                  double c_plan = 1.0);

}  // namespace mrsearch
