#pragma once

#include <cstdint>
#include <vector>

#include "hcr/common.hpp"

namespace hcr {

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// Row-first order, so std::min gives the topmost-then-leftmost pixel.
inline bool operator<(const Pixel& a, const Pixel& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

// Foreground mask, row-major; nonzero = character pixel.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;

  BinaryImage() = default;
  BinaryImage(int w, int h, bool fill = false)
      : width(w), height(h), mask(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int x, int y) const {
    return mask[static_cast<std::size_t>(y) * width + x] != 0;
  }
  // Out-of-bounds reads as background.
  bool at_or(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height && at(x, y);
  }
  void set(int x, int y, bool v) {
    mask[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  int foreground_count() const {
    int n = 0;
    for (std::uint8_t v : mask) n += (v != 0);
    return n;
  }
  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;
};

// Inclusive pixel rectangle. Also used as the zone rectangle type.
struct BoundingBox {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
  int area() const { return width() * height(); }
  bool contains(int x, int y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
  bool contains(const Pixel& p) const { return contains(p.x, p.y); }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

GrayImage crop(const GrayImage& img, const BoundingBox& box);
BinaryImage crop(const BinaryImage& img, const BoundingBox& box);

// Number of foreground 8-neighbors of (x,y).
int neighbor_count(const BinaryImage& img, int x, int y);

// Number of 8-connected foreground components.
int count_components(const BinaryImage& img);

}  // namespace hcr
