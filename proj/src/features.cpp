#include "hcr/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hcr {

namespace {

struct ZoneTallies {
  std::array<int, 4> seg_counts{};  // segments anchored here, per direction
  std::array<int, 4> dir_pixels{};  // segment pixels inside the zone, per direction
  int skeleton_pixels = 0;
  int intersections = 0;
  int zone_area = 0;
};

// Constant-time pixel -> zone lookup derived from the grid's cut lines.
struct ZoneIndex {
  std::vector<int> row_of, col_of;
  int cols = 1;
  int operator()(Pixel p) const { return row_of[p.y] * cols + col_of[p.x]; }
};

ZoneIndex make_index(const ZoneGrid& grid, int width, int height) {
  ZoneIndex zi;
  zi.cols = grid.cols;
  zi.row_of.assign(height, 0);
  zi.col_of.assign(width, 0);
  for (int r = 0; r < grid.rows; ++r) {
    const BoundingBox& b = grid.zone(r, 0);
    for (int y = b.y0; y <= b.y1; ++y) zi.row_of[y] = r;
  }
  for (int c = 0; c < grid.cols; ++c) {
    const BoundingBox& b = grid.zone(0, c);
    for (int x = b.x0; x <= b.x1; ++x) zi.col_of[x] = c;
  }
  return zi;
}

std::vector<ZoneTallies> tally_zones(const Skeleton& skel,
                                     const std::vector<DirectedSegment>& segs,
                                     const ZoneGrid& grid) {
  const BinaryImage& img = skel.image;
  const ZoneIndex zi = make_index(grid, img.width, img.height);
  std::vector<ZoneTallies> tallies(grid.zones.size());
  for (std::size_t z = 0; z < grid.zones.size(); ++z)
    tallies[z].zone_area = grid.zones[z].area();

  for (const DirectedSegment& ds : segs) {
    const int d = static_cast<int>(ds.direction);
    ++tallies[zi(ds.segment.anchor())].seg_counts[d];
    for (const Pixel& p : ds.segment.pixels) ++tallies[zi(p)].dir_pixels[d];
  }
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!img.at(x, y)) continue;
      ZoneTallies& t = tallies[zi({x, y})];
      ++t.skeleton_pixels;
      if (neighbor_count(img, x, y) >= 3) ++t.intersections;
    }
  }
  return tallies;
}

void append_zone_block(std::vector<double>& out, const ZoneTallies& z,
                       bool with_intersections) {
  for (int d = 0; d < 4; ++d) out.push_back(encode_count(z.seg_counts[d]));
  for (int d = 0; d < 4; ++d)
    out.push_back(normalized_length(z.dir_pixels[d], z.zone_area));
  out.push_back(normalized_length(z.skeleton_pixels, z.zone_area));
  if (with_intersections) out.push_back(encode_count(z.intersections));
}

void require_same_shape(int w1, int h1, int w2, int h2) {
  if (w1 != w2 || h1 != h2)
    throw std::invalid_argument("feature extraction: input dimensions differ");
}

FeatureVector to_vector(Extractor which, const std::vector<double>& values) {
  FeatureVector fv;
  fv.extractor = which;
  fv.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                static_cast<long>(values.size()));
  return fv;
}

}  // namespace

std::string extractor_name(Extractor e) {
  switch (e) {
    case Extractor::Proposed: return "proposed";
    case Extractor::Geometric: return "geometric";
    case Extractor::Hybrid: return "hybrid";
    case Extractor::Gradient: return "gradient";
  }
  return "?";
}

Extractor extractor_from_name(const std::string& name) {
  if (name == "proposed") return Extractor::Proposed;
  if (name == "geometric") return Extractor::Geometric;
  if (name == "hybrid") return Extractor::Hybrid;
  if (name == "gradient") return Extractor::Gradient;
  throw std::invalid_argument("unknown extractor: " + name);
}

double encode_count(int n) {
  if (n < 0) throw std::invalid_argument("encode_count: negative count");
  return std::max(1.0 - 2.0 * (n / 10.0), -1.0);
}

double normalized_length(int line_pixels, int zone_pixels) {
  if (zone_pixels < 1) throw std::invalid_argument("normalized_length: empty zone");
  return static_cast<double>(std::min(line_pixels, zone_pixels)) / zone_pixels;
}

int count_intersections(const Skeleton& skel, const BoundingBox& zone) {
  int count = 0;
  for (int y = zone.y0; y <= zone.y1; ++y)
    for (int x = zone.x0; x <= zone.x1; ++x)
      if (skel.image.at_or(x, y) && neighbor_count(skel.image, x, y) >= 3) ++count;
  return count;
}

Eigen::Vector4d global_features(const BinaryImage& binary) {
  const int w = binary.width, h = binary.height;
  double sx = 0.0, sy = 0.0;
  std::int64_t n = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!binary.at(x, y)) continue;
      sx += x;
      sy += y;
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("global_features: empty foreground");
  const double cx = sx / n, cy = sy / n;
  double mu20 = 0.0, mu02 = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!binary.at(x, y)) continue;
      mu20 += (x - cx) * (x - cx);
      mu02 += (y - cy) * (y - cy);
    }
  }
  Eigen::Vector4d g;
  g[0] = std::hypot(cx - (w - 1) / 2.0, cy - (h - 1) / 2.0) / (0.5 * std::hypot(w, h));
  g[1] = (mu20 + mu02) / (n * (static_cast<double>(w) * w + static_cast<double>(h) * h));
  g[2] = encode_count(count_components(binary));
  g[3] = static_cast<double>(n) / (static_cast<double>(w) * h);
  return g;
}

FeatureVector extract_proposed(const Skeleton& skel, const BinaryImage& binary) {
  require_same_shape(skel.image.width, skel.image.height, binary.width, binary.height);
  const int w = skel.image.width, h = skel.image.height;
  const std::vector<DirectedSegment> segs = directed_segments(skel);

  std::vector<double> values;
  values.reserve(145);
  for (const ZoneTallies& z : tally_zones(skel, segs, partition_zones(w, h, 3, 3)))
    append_zone_block(values, z, false);
  for (const ZoneTallies& z : tally_zones(skel, segs, partition_zones(w, h, 3, 1)))
    append_zone_block(values, z, true);
  for (const ZoneTallies& z : tally_zones(skel, segs, partition_zones(w, h, 1, 3)))
    append_zone_block(values, z, true);
  const Eigen::Vector4d g = global_features(binary);
  for (int i = 0; i < 4; ++i) values.push_back(g[i]);
  return to_vector(Extractor::Proposed, values);
}

FeatureVector extract_geometric(const Skeleton& skel, const BinaryImage& binary) {
  require_same_shape(skel.image.width, skel.image.height, binary.width, binary.height);
  const int w = skel.image.width, h = skel.image.height;
  const std::vector<DirectedSegment> segs = directed_segments(skel);
  std::vector<double> values;
  values.reserve(81);
  for (const ZoneTallies& z : tally_zones(skel, segs, partition_zones(w, h, 3, 3)))
    append_zone_block(values, z, false);
  return to_vector(Extractor::Geometric, values);
}

FeatureVector extract_hybrid(const Skeleton& skel, const BinaryImage& binary) {
  require_same_shape(skel.image.width, skel.image.height, binary.width, binary.height);
  const int w = skel.image.width, h = skel.image.height;
  const std::vector<DirectedSegment> segs = directed_segments(skel);
  std::vector<double> values;
  values.reserve(90);
  for (const ZoneTallies& z : tally_zones(skel, segs, partition_zones(w, h, 3, 3)))
    append_zone_block(values, z, true);
  return to_vector(Extractor::Hybrid, values);
}

FeatureVector extract_gradient(const GrayImage& gray, const BinaryImage& binary) {
  require_same_shape(gray.width, gray.height, binary.width, binary.height);
  const int w = gray.width, h = gray.height;
  auto clamped = [&gray, w, h](int x, int y) -> double {
    return gray.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };

  const ZoneGrid grid = partition_zones(w, h, 3, 3);
  const ZoneIndex zi = make_index(grid, w, h);
  std::vector<std::array<double, 8>> hist(grid.zones.size(), std::array<double, 8>{});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = clamped(x + 1, y - 1) + 2 * clamped(x + 1, y) +
                        clamped(x + 1, y + 1) - clamped(x - 1, y - 1) -
                        2 * clamped(x - 1, y) - clamped(x - 1, y + 1);
      const double gy = clamped(x - 1, y + 1) + 2 * clamped(x, y + 1) +
                        clamped(x + 1, y + 1) - clamped(x - 1, y - 1) -
                        2 * clamped(x, y - 1) - clamped(x + 1, y - 1);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      const double deg = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      const int bin =
          ((static_cast<int>(std::floor((deg + 22.5) / 45.0)) % 8) + 8) % 8;
      hist[zi({x, y})][bin] += mag;
    }
  }

  std::vector<double> values;
  values.reserve(72);
  for (auto& zone_hist : hist) {
    double norm = 0.0;
    for (double v : zone_hist) norm += v * v;
    norm = std::sqrt(norm);
    for (double v : zone_hist) values.push_back(norm > 0.0 ? v / norm : 0.0);
  }
  return to_vector(Extractor::Gradient, values);
}

FeatureVector extract(Extractor which, const Preprocessed& prep) {
  switch (which) {
    case Extractor::Proposed: return extract_proposed(prep.skeleton, prep.binary);
    case Extractor::Geometric: return extract_geometric(prep.skeleton, prep.binary);
    case Extractor::Hybrid: return extract_hybrid(prep.skeleton, prep.binary);
    case Extractor::Gradient: return extract_gradient(prep.gray, prep.binary);
  }
  throw std::invalid_argument("unknown extractor");
}

}  // namespace hcr
