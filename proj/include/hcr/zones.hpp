#pragma once

#include <vector>

#include "hcr/image.hpp"

namespace hcr {

// Zones tile the image exactly; widths within a row and heights down a
// column differ by at most one pixel.
struct ZoneGrid {
  int rows = 0;
  int cols = 0;
  std::vector<BoundingBox> zones;  // row-major

  const BoundingBox& zone(int r, int c) const { return zones[r * cols + c]; }
};

// Near-equal partition with the larger parts first. Requires width >= cols
// and height >= rows.
ZoneGrid partition_zones(int width, int height, int rows, int cols);

}  // namespace hcr
