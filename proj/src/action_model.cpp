#include "mrsearch/action_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrsearch/error.hpp"

namespace mrsearch {

namespace {

double signed_area(const std::vector<Point2>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    twice += cross(a, b);
  }
  return 0.5 * twice;
}

// Clips a convex polygon to the half-plane left of edge a->b.
std::vector<Point2> clip_half_plane(const std::vector<Point2>& poly, Point2 a, Point2 b) {
  std::vector<Point2> out;
  if (poly.empty()) return out;
  const Point2 edge = b - a;
  auto side = [&](Point2 p) { return cross(edge, p - a); };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 cur = poly[i];
    const Point2 nxt = poly[(i + 1) % poly.size()];
    const double sc = side(cur);
    const double sn = side(nxt);
    if (sc >= 0.0) out.push_back(cur);
    if ((sc >= 0.0) != (sn >= 0.0)) {
      const double t = sc / (sc - sn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  return out;
}

struct TracedCell {
  int index;
  double t_mid;
  double along;
  double perp;
};

// Parameter interval of segment start + t*d, t in [0,1], inside [lo, hi] along
// one axis. Returns false when empty.
bool slab(double s, double d, double lo, double hi, double& t0, double& t1) {
  if (d == 0.0) return s >= lo && s <= hi;
  double a = (lo - s) / d;
  double b = (hi - s) / d;
  if (a > b) std::swap(a, b);
  t0 = std::max(t0, a);
  t1 = std::min(t1, b);
  return t0 <= t1;
}

std::vector<int> trace_canonical(const GridSpec& grid, Point2 start, Point2 end) {
  const double tol = kCornerTolerance;
  const double cs = grid.cell_size;
  const Point2 d = end - start;
  const Point2 o = grid.origin;
  auto clamp_col = [&](double v) { return std::clamp(static_cast<int>(std::floor(v)), 0, grid.width_cells - 1); };
  auto clamp_row = [&](double v) { return std::clamp(static_cast<int>(std::floor(v)), 0, grid.height_cells - 1); };

  const int c_lo = clamp_col((std::min(start.x, end.x) - o.x - tol) / cs);
  const int c_hi = clamp_col((std::max(start.x, end.x) - o.x + tol) / cs);

  std::vector<TracedCell> hits;
  for (int col = c_lo; col <= c_hi; ++col) {
    const double xl = o.x + col * cs - tol;
    const double xh = o.x + (col + 1) * cs + tol;
    double t0 = 0.0, t1 = 1.0;
    if (!slab(start.x, d.x, xl, xh, t0, t1)) continue;
    const double ya = start.y + t0 * d.y;
    const double yb = start.y + t1 * d.y;
    const int r_lo = clamp_row((std::min(ya, yb) - o.y - tol) / cs);
    const int r_hi = clamp_row((std::max(ya, yb) - o.y + tol) / cs);
    for (int row = r_lo; row <= r_hi; ++row) {
      double u0 = t0, u1 = t1;
      const double yl = o.y + row * cs - tol;
      const double yh = o.y + (row + 1) * cs + tol;
      if (!slab(start.y, d.y, yl, yh, u0, u1)) continue;
      const int idx = grid.index({col, row});
      const Point2 rel = grid.center(idx) - start;
      hits.push_back({idx, 0.5 * (u0 + u1), dot(rel, d), cross(d, rel)});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const TracedCell& a, const TracedCell& b) {
    if (a.t_mid != b.t_mid) return a.t_mid < b.t_mid;
    if (a.along != b.along) return a.along < b.along;
    return a.perp < b.perp;
  });
  std::vector<int> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.index);
  return out;
}

}  // namespace

void ZonePolygon::validate() const {
  if (vertices.size() < 3) throw Error(ErrorCode::InvalidConfig, "zone needs at least 3 vertices");
  for (const auto& v : vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
      throw Error(ErrorCode::InvalidConfig, "zone vertex is not finite");
  if (!(signed_area(vertices) > 0.0))
    throw Error(ErrorCode::InvalidConfig, "zone must be counter-clockwise with non-zero area");
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e1 = vertices[(i + 1) % n] - vertices[i];
    const Point2 e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (cross(e1, e2) < -1e-12 * norm(e1) * norm(e2))
      throw Error(ErrorCode::InvalidConfig, "zone is not convex at vertex " + std::to_string((i + 1) % n));
  }
}

double ZonePolygon::area() const { return std::abs(signed_area(vertices)); }

bool ZonePolygon::contains(Point2 p, double tol) const {
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices[i];
    const Point2 e = vertices[(i + 1) % n] - a;
    if (cross(e, p - a) < -tol * norm(e)) return false;
  }
  return true;
}

ZoneCells cells_in_zone(const GridSpec& grid, const ZonePolygon& zone) {
  grid.validate();
  zone.validate();
  const double cell_area = grid.cell_size * grid.cell_size;
  if (zone.area() < cell_area)
    throw Error(ErrorCode::DegenerateZone, "zone area smaller than one cell");

  ZoneCells out;
  const std::size_t n = zone.vertices.size();
  for (int idx = 0; idx < grid.num_cells(); ++idx) {
    if (zone.contains(grid.center(idx))) {
      out.center_in.push_back(idx);
      continue;
    }
    const Point2 lo = grid.cell_min(idx);
    const double s = grid.cell_size;
    std::vector<Point2> poly{lo, {lo.x + s, lo.y}, {lo.x + s, lo.y + s}, {lo.x, lo.y + s}};
    for (std::size_t i = 0; i < n && !poly.empty(); ++i)
      poly = clip_half_plane(poly, zone.vertices[i], zone.vertices[(i + 1) % n]);
    if (poly.size() >= 3 && signed_area(poly) > 1e-9 * cell_area) out.sliver.push_back(idx);
  }
  return out;
}

ZoneMap::ZoneMap(GridSpec grid, ZonePolygon zone)
    : grid_(grid), zone_(std::move(zone)), cells_(cells_in_zone(grid_, zone_)) {
  classes_.assign(static_cast<std::size_t>(grid_.num_cells()), CellClass::Outside);
  for (int c : cells_.center_in) classes_[static_cast<std::size_t>(c)] = CellClass::CenterIn;
  for (int c : cells_.sliver) classes_[static_cast<std::size_t>(c)] = CellClass::Sliver;
}

std::vector<int> supercover_trace(const GridSpec& grid, Point2 start, Point2 end) {
  if (!grid.contains(start, kCornerTolerance) || !grid.contains(end, kCornerTolerance))
    throw Error(ErrorCode::OutOfBounds, "trace endpoint outside grid");
  // Trace in a canonical direction so a reversed query is exactly the reverse.
  const bool flip = end.x < start.x || (end.x == start.x && end.y < start.y);
  if (!flip) return trace_canonical(grid, start, end);
  auto cells = trace_canonical(grid, end, start);
  std::reverse(cells.begin(), cells.end());
  return cells;
}

CandidateAction make_candidate(const ZoneMap& map, Point2 start, int goal_cell, double c_plan) {
  CandidateAction a;
  a.start = start;
  a.goal_cell = goal_cell;
  a.goal = map.grid().center(goal_cell);
  for (int cell : supercover_trace(map.grid(), a.start, a.goal))
    if (map.in_zone(cell)) a.traversed_cells.push_back(cell);
  a.planned_rows.reserve(a.traversed_cells.size());
  for (int cell : a.traversed_cells)
    a.planned_rows.push_back({cell, 0.0, c_plan, 0, RecordKind::SelfPosition});
  return a;
}

std::vector<CandidateAction> enumerate_candidates(const ZoneMap& map, Point2 robot_position, double c_plan) {
  std::vector<CandidateAction> out;
  out.reserve(map.cells().center_in.size());
  for (int goal : map.cells().center_in) out.push_back(make_candidate(map, robot_position, goal, c_plan));
  return out;
}

}  // namespace mrsearch
