#include "hcr/image.hpp"

#include <vector>

namespace hcr {

GrayImage crop(const GrayImage& img, const BoundingBox& box) {
  GrayImage out(box.width(), box.height());
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x)
      out.at(x, y) = img.at(box.x0 + x, box.y0 + y);
  return out;
}

BinaryImage crop(const BinaryImage& img, const BoundingBox& box) {
  BinaryImage out(box.width(), box.height());
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x)
      out.set(x, y, img.at(box.x0 + x, box.y0 + y));
  return out;
}

int neighbor_count(const BinaryImage& img, int x, int y) {
  int n = 0;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      n += img.at_or(x + dx, y + dy);
    }
  return n;
}

int count_components(const BinaryImage& img) {
  std::vector<std::uint8_t> visited(img.mask.size(), 0);
  std::vector<Pixel> stack;
  int components = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * img.width + x;
      if (!img.at(x, y) || visited[idx]) continue;
      ++components;
      visited[idx] = 1;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx, ny = p.y + dy;
            if (!img.at_or(nx, ny)) continue;
            const std::size_t nidx = static_cast<std::size_t>(ny) * img.width + nx;
            if (visited[nidx]) continue;
            visited[nidx] = 1;
            stack.push_back({nx, ny});
          }
      }
    }
  }
  return components;
}

}  // namespace hcr
