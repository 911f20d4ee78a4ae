#pragma once

#include <vector>

#include "hcr/preprocess.hpp"

namespace hcr {

enum class Direction { Horizontal, Vertical, RightDiag, LeftDiag };

enum class SegmentKind { Path, Loop };

// Maximal junction-free run of skeleton pixels. Consecutive pixels are
// 8-neighbors; a path is ordered endpoint to endpoint, a loop starts at its
// topmost-leftmost pixel. Holds >= 3 pixels.
struct Segment {
  std::vector<Pixel> pixels;
  SegmentKind kind = SegmentKind::Path;

  // The topmost-then-leftmost pixel; keys both zone assignment and ordering.
  Pixel anchor() const;
};

// Removes junction pixels, then returns each remaining 8-connected path or
// loop of length >= 3, ordered by anchor pixel.
std::vector<Segment> extract_segments(const Skeleton& skel);

// Splits a path at its maximal-turning pixel when the cumulative pixelwise
// turning exceeds 45 degrees, so corner strokes classify as two lines. The
// corner pixel belongs to both halves. Halves shorter than 3 pixels are
// dropped. Loops and straight paths come back unchanged.
std::vector<Segment> split_by_turning(const Segment& seg);

// Line angle folded to (-90, 90] degrees in image coordinates (x right,
// y down): endpoint-to-endpoint for paths, principal moment axis for loops.
// |theta| <= 22.5 is horizontal, >= 67.5 vertical, negative angles are
// right-diagonals ('/'), positive left-diagonals ('\'). Near-isotropic loops
// (axis ratio < 1.1) fall back to horizontal.
Direction classify_direction(const Segment& seg);

struct DirectedSegment {
  Segment segment;
  Direction direction = Direction::Horizontal;
};

// extract_segments + split_by_turning + classify_direction.
std::vector<DirectedSegment> directed_segments(const Skeleton& skel);

}  // namespace hcr
