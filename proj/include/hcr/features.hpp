#pragma once

#include <Eigen/Dense>
#include <string>

#include "hcr/preprocess.hpp"
#include "hcr/segments.hpp"
#include "hcr/zones.hpp"

namespace hcr {

enum class Extractor { Proposed, Geometric, Hybrid, Gradient };

constexpr int feature_dimension(Extractor e) {
  switch (e) {
    case Extractor::Proposed: return 145;
    case Extractor::Geometric: return 81;
    case Extractor::Hybrid: return 90;
    case Extractor::Gradient: return 72;
  }
  return 0;
}

std::string extractor_name(Extractor e);
Extractor extractor_from_name(const std::string& name);

struct FeatureVector {
  Extractor extractor = Extractor::Proposed;
  Eigen::VectorXd values;
};

// Count encoding 1 - 2*(n/10), clamped to -1 for n > 10.
double encode_count(int n);

// line_pixels / zone_pixels, capped at 1. Requires zone_pixels >= 1.
double normalized_length(int line_pixels, int zone_pixels);

// Skeleton pixels inside the zone with >= 3 skeleton 8-neighbors (neighbors
// counted across zone borders).
int count_intersections(const Skeleton& skel, const BoundingBox& zone);

// Four whole-image scalars: centroid offset from center over half the
// diagonal, summed second central moments over N*(W^2+H^2), encoded
// 8-connected object count, and foreground spread N/(W*H).
Eigen::Vector4d global_features(const BinaryImage& binary);

// 145 features: 3x3 zone blocks (81), 1x3 row bands then 3x1 column bands
// with intersection counts (60), global scalars (4).
FeatureVector extract_proposed(const Skeleton& skel, const BinaryImage& binary);

// The 3x3 zone blocks alone (81); equals the first 81 proposed coordinates.
FeatureVector extract_geometric(const Skeleton& skel, const BinaryImage& binary);

// 3x3 zoning with the intersection count appended per zone (90).
FeatureVector extract_hybrid(const Skeleton& skel, const BinaryImage& binary);

// Sobel orientation histograms: per 3x3 zone an 8-bin, 45-degree histogram
// weighted by gradient magnitude, each zone L2-normalized (72).
FeatureVector extract_gradient(const GrayImage& gray, const BinaryImage& binary);

// Dispatches on the extractor tag over a preprocessed character.
FeatureVector extract(Extractor which, const Preprocessed& prep);

}  // namespace hcr
