#include "hcr/segments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace hcr {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Fixed scan order for tracing: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<int, 8> kNx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kNy = {-1, -1, 0, 1, 1, 1, 0, -1};

int degree(const BinaryImage& img, Pixel p) { return neighbor_count(img, p.x, p.y); }

// Walks a component whose pixels all have degree <= 2. `start` must be an
// endpoint for paths or any pixel of a loop.
std::vector<Pixel> trace(const BinaryImage& img, std::vector<std::uint8_t>& used,
                         Pixel start) {
  auto idx = [&img](Pixel p) { return static_cast<std::size_t>(p.y) * img.width + p.x; };
  std::vector<Pixel> run{start};
  used[idx(start)] = 1;
  Pixel cur = start;
  while (true) {
    bool advanced = false;
    for (int i = 0; i < 8; ++i) {
      const Pixel next{cur.x + kNx[i], cur.y + kNy[i]};
      if (!img.at_or(next.x, next.y) || used[idx(next)]) continue;
      run.push_back(next);
      used[idx(next)] = 1;
      cur = next;
      advanced = true;
      break;
    }
    if (!advanced) break;
  }
  return run;
}

bool is_loop(const BinaryImage& img, const std::vector<Pixel>& run) {
  if (run.size() < 3) return false;
  const Pixel& a = run.front();
  const Pixel& b = run.back();
  return std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1 &&
         degree(img, a) == 2 && degree(img, b) == 2;
}

double fold_angle(double deg) {
  while (deg > 90.0) deg -= 180.0;
  while (deg <= -90.0) deg += 180.0;
  return deg;
}

Direction direction_of(double deg) {
  const double a = std::abs(deg);
  if (a <= 22.5) return Direction::Horizontal;
  if (a >= 67.5) return Direction::Vertical;
  return deg < 0 ? Direction::RightDiag : Direction::LeftDiag;
}

}  // namespace

Pixel Segment::anchor() const {
  return *std::min_element(pixels.begin(), pixels.end());
}

std::vector<Segment> extract_segments(const Skeleton& skel) {
  BinaryImage img = skel.image;
  for (const Pixel& j : skel.junctions) img.set(j.x, j.y, 0);

  std::vector<std::uint8_t> used(img.mask.size(), 0);
  auto idx = [&img](Pixel p) { return static_cast<std::size_t>(p.y) * img.width + p.x; };

  std::vector<Segment> segments;
  // Paths first: start each trace at an endpoint so the run is ordered end
  // to end. Row-major scan finds the topmost-leftmost endpoint first.
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Pixel p{x, y};
      if (!img.at(x, y) || used[idx(p)] || degree(img, p) != 1) continue;
      std::vector<Pixel> run = trace(img, used, p);
      if (run.size() >= 3) segments.push_back({std::move(run), SegmentKind::Path});
    }
  }
  // Remaining unvisited pixels belong to loops (or isolated dust).
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Pixel p{x, y};
      if (!img.at(x, y) || used[idx(p)]) continue;
      std::vector<Pixel> run = trace(img, used, p);
      if (run.size() < 3) continue;
      const SegmentKind kind = is_loop(img, run) ? SegmentKind::Loop : SegmentKind::Path;
      segments.push_back({std::move(run), kind});
    }
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return a.anchor() < b.anchor(); });
  return segments;
}

std::vector<Segment> split_by_turning(const Segment& seg) {
  if (seg.kind == SegmentKind::Loop || seg.pixels.size() < 3) return {seg};

  const auto& px = seg.pixels;
  auto step_angle = [&px](std::size_t i) {
    return std::atan2(static_cast<double>(px[i + 1].y - px[i].y),
                      static_cast<double>(px[i + 1].x - px[i].x));
  };
  double total = 0.0;
  double max_turn = 0.0;
  std::size_t corner = 0;  // pixel index with the sharpest turn
  for (std::size_t i = 0; i + 2 < px.size(); ++i) {
    double d = step_angle(i + 1) - step_angle(i);
    if (d > std::numbers::pi) d -= 2 * std::numbers::pi;
    if (d < -std::numbers::pi) d += 2 * std::numbers::pi;
    total += d;
    if (std::abs(d) > max_turn) {
      max_turn = std::abs(d);
      corner = i + 1;
    }
  }
  if (std::abs(total) * kRadToDeg <= 45.0) return {seg};

  std::vector<Segment> halves;
  std::vector<Pixel> head(px.begin(), px.begin() + corner + 1);
  std::vector<Pixel> tail(px.begin() + corner, px.end());
  if (head.size() >= 3) halves.push_back({std::move(head), SegmentKind::Path});
  if (tail.size() >= 3) halves.push_back({std::move(tail), SegmentKind::Path});
  if (halves.empty()) return {seg};
  return halves;
}

Direction classify_direction(const Segment& seg) {
  if (seg.kind == SegmentKind::Path) {
    const Pixel& a = seg.pixels.front();
    const Pixel& b = seg.pixels.back();
    const double deg =
        fold_angle(std::atan2(static_cast<double>(b.y - a.y),
                              static_cast<double>(b.x - a.x)) * kRadToDeg);
    return direction_of(deg);
  }

  // Loop: orientation of the principal second-moment axis.
  double mx = 0.0, my = 0.0;
  for (const Pixel& p : seg.pixels) {
    mx += p.x;
    my += p.y;
  }
  const double n = static_cast<double>(seg.pixels.size());
  mx /= n;
  my /= n;
  double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
  for (const Pixel& p : seg.pixels) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    mu20 += dx * dx;
    mu02 += dy * dy;
    mu11 += dx * dy;
  }
  const double common = std::hypot(2.0 * mu11, mu20 - mu02);
  const double l1 = (mu20 + mu02 + common) / 2.0;
  const double l2 = (mu20 + mu02 - common) / 2.0;
  if (l2 > 0.0 && std::sqrt(l1 / l2) < 1.1) return Direction::Horizontal;
  const double theta = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02) * kRadToDeg;
  return direction_of(fold_angle(theta));
}

std::vector<DirectedSegment> directed_segments(const Skeleton& skel) {
  std::vector<DirectedSegment> out;
  for (const Segment& seg : extract_segments(skel))
    for (const Segment& part : split_by_turning(seg))
      out.push_back({part, classify_direction(part)});
  return out;
}

}  // namespace hcr
