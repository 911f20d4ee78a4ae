#include "hcr/zones.hpp"

#include <stdexcept>

namespace hcr {

namespace {

// Cut points for splitting `extent` into `parts` near-equal runs, larger
// runs first. Returns parts+1 boundaries starting at 0.
std::vector<int> cut_points(int extent, int parts) {
  std::vector<int> cuts(parts + 1, 0);
  const int base = extent / parts;
  const int extra = extent % parts;
  for (int i = 0; i < parts; ++i) cuts[i + 1] = cuts[i] + base + (i < extra ? 1 : 0);
  return cuts;
}

}  // namespace

ZoneGrid partition_zones(int width, int height, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("zone grid must be non-empty");
  if (width < cols || height < rows)
    throw std::invalid_argument("image smaller than the zone grid");
  const std::vector<int> xs = cut_points(width, cols);
  const std::vector<int> ys = cut_points(height, rows);
  ZoneGrid grid;
  grid.rows = rows;
  grid.cols = cols;
  grid.zones.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      grid.zones.push_back({xs[c], ys[r], xs[c + 1] - 1, ys[r + 1] - 1});
  return grid;
}

}  // namespace hcr
