#include "mrsearch/grid.hpp"

#include <algorithm>

#include "mrsearch/error.hpp"

namespace mrsearch {

void GridSpec::validate() const {
  if (width_cells < 1 || height_cells < 1)
    throw Error(ErrorCode::InvalidConfig, "grid dimensions must be >= 1");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size))
    throw Error(ErrorCode::InvalidConfig, "grid.cell_size must be > 0");
}

Point2 GridSpec::cell_min(int index) const {
  const auto c = coord(index);
  return {origin.x + c.col * cell_size, origin.y + c.row * cell_size};
}

Point2 GridSpec::center(int index) const {
  const auto lo = cell_min(index);
  return {lo.x + 0.5 * cell_size, lo.y + 0.5 * cell_size};
}

bool GridSpec::contains(Point2 p, double tol) const {
  return p.x >= origin.x - tol && p.y >= origin.y - tol && p.x <= origin.x + width_m() + tol &&
         p.y <= origin.y + height_m() + tol;
}

std::optional<int> GridSpec::cell_at(Point2 p) const {
  if (!contains(p)) return std::nullopt;
  const int col = std::min(width_cells - 1, static_cast<int>(std::floor((p.x - origin.x) / cell_size)));
  const int row = std::min(height_cells - 1, static_cast<int>(std::floor((p.y - origin.y) / cell_size)));
  return index({std::max(col, 0), std::max(row, 0)});
}

}  // namespace mrsearch
