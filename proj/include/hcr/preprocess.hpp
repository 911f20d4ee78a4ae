#pragma once

#include <vector>

#include "hcr/image.hpp"

namespace hcr {

// One-pixel-wide stroke image plus its structural pixels. Junctions are
// pixels with >= 3 foreground 8-neighbors, endpoints have exactly 1.
struct Skeleton {
  BinaryImage image;
  std::vector<Pixel> junctions;
  std::vector<Pixel> endpoints;
};

// Threshold minimizing the weighted within-class variance over the 256-bin
// histogram (class 0: intensities <= t, class 1: > t). Ties break to the
// smallest t. Thresholds that leave class 0 empty are not candidates, so a
// constant image thresholds at its own bin.
int otsu_threshold(const GrayImage& img);

enum class Polarity { DarkForeground, LightForeground };

// DarkForeground maps intensity <= t to foreground; LightForeground inverts.
BinaryImage binarize(const GrayImage& img, int threshold,
                     Polarity polarity = Polarity::DarkForeground);

// Whether the thinning pass with the given subiteration (0 or 1) would delete
// pixel (x,y): neighbor count in [2,6], exactly one 0->1 transition around
// the pixel, and the two directional neighbor products zero.
bool thinning_would_delete(const BinaryImage& img, int x, int y, int subiteration);

// Computes junction/endpoint sets for an already-thin image.
Skeleton analyze_skeleton(BinaryImage thin);

// Two-subiteration thinning iterated to fixpoint. Requires >= 1 foreground
// pixel. The result is idempotent under re-thinning.
Skeleton skeletonize(const BinaryImage& img);

// Tight axis-aligned box over the foreground. Requires >= 1 foreground pixel.
BoundingBox bounding_box(const BinaryImage& img);

struct Preprocessed {
  Skeleton skeleton;   // cropped to the skeleton's bounding box
  BinaryImage binary;  // un-thinned mask, cropped to the same box
  GrayImage gray;      // source intensities, cropped to the same box
  BoundingBox box;     // in source image coordinates
  int threshold = 0;
};

// Full pipeline: threshold -> binarize -> skeletonize -> bounding box -> crop.
// Throws DataError for blank images (no contrast or no foreground).
Preprocessed preprocess(const GrayImage& img,
                        Polarity polarity = Polarity::DarkForeground);

}  // namespace hcr
