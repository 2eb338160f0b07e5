#pragma once

#include <cmath>
#include <optional>

namespace mrsearch {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

struct CellCoord {
  int col = 0;
  int row = 0;

  friend bool operator==(const CellCoord&, const CellCoord&) = default;
};

/// Uniform square grid. Cell (col,row) covers
/// [origin.x + col*cell_size, origin.x + (col+1)*cell_size) and likewise in y;
/// cells are flattened row-major: index = row * width_cells + col.
struct GridSpec {
  int width_cells = 1;
  int height_cells = 1;
  double cell_size = 1.0;
  Point2 origin{};

  void validate() const;

  int num_cells() const { return width_cells * height_cells; }
  bool valid_index(int index) const { return index >= 0 && index < num_cells(); }
  int index(CellCoord c) const { return c.row * width_cells + c.col; }
  CellCoord coord(int index) const { return {index % width_cells, index / width_cells}; }

  Point2 cell_min(int index) const;
  Point2 center(int index) const;
  double width_m() const { return width_cells * cell_size; }
  double height_m() const { return height_cells * cell_size; }

  /// Closed bounds check against the whole grid rectangle.
  bool contains(Point2 p, double tol = 0.0) const;

  /// Cell holding `p`; points on the far edges map to the last column/row.
  std::optional<int> cell_at(Point2 p) const;
};

}  // namespace mrsearch
