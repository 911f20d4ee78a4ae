#include "hcr/preprocess.hpp"

#include <array>
#include <cstdint>
#include <limits>

#include "hcr/common.hpp"

namespace hcr {

namespace {

// Neighbors clockwise from north: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<int, 8> kNx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kNy = {-1, -1, 0, 1, 1, 1, 0, -1};

std::array<int, 8> neighborhood(const BinaryImage& img, int x, int y) {
  std::array<int, 8> n;
  for (int i = 0; i < 8; ++i) n[i] = img.at_or(x + kNx[i], y + kNy[i]);
  return n;
}

}  // namespace

int otsu_threshold(const GrayImage& img) {
  std::array<std::int64_t, 256> hist{};
  for (std::uint8_t v : img.data) ++hist[v];
  const double total = static_cast<double>(img.data.size());

  // Prefix counts and intensity sums let each candidate threshold be scored
  // in O(1): weighted within-class variance = sum over both classes of
  // sum((v - mean)^2 * hist[v]) / total.
  double best_score = std::numeric_limits<double>::infinity();
  int best_t = 0;
  std::int64_t count0 = 0;
  double sum0 = 0.0, sumsq0 = 0.0;
  double sum_all = 0.0, sumsq_all = 0.0;
  for (int v = 0; v < 256; ++v) {
    sum_all += static_cast<double>(v) * hist[v];
    sumsq_all += static_cast<double>(v) * v * hist[v];
  }
  for (int t = 0; t < 256; ++t) {
    count0 += hist[t];
    sum0 += static_cast<double>(t) * hist[t];
    sumsq0 += static_cast<double>(t) * t * hist[t];
    if (count0 == 0) continue;  // class 0 empty: not a candidate
    const std::int64_t count1 = static_cast<std::int64_t>(total) - count0;
    double score = sumsq0 - sum0 * sum0 / count0;
    if (count1 > 0) {
      const double sum1 = sum_all - sum0;
      score += (sumsq_all - sumsq0) - sum1 * sum1 / count1;
    }
    score /= total;
    if (score < best_score) {
      best_score = score;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage binarize(const GrayImage& img, int threshold, Polarity polarity) {
  BinaryImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    const bool dark = img.data[i] <= threshold;
    out.mask[i] = (polarity == Polarity::DarkForeground) == dark ? 1 : 0;
  }
  return out;
}

bool thinning_would_delete(const BinaryImage& img, int x, int y, int subiteration) {
  if (!img.at_or(x, y)) return false;
  const auto n = neighborhood(img, x, y);
  int count = 0;
  for (int v : n) count += v;
  if (count < 2 || count > 6) return false;
  int transitions = 0;
  for (int i = 0; i < 8; ++i)
    if (n[i] == 0 && n[(i + 1) % 8] == 1) ++transitions;
  if (transitions != 1) return false;
  // n[0]=N, n[2]=E, n[4]=S, n[6]=W.
  if (subiteration == 0)
    return (n[0] * n[2] * n[4] == 0) && (n[2] * n[4] * n[6] == 0);
  return (n[0] * n[2] * n[6] == 0) && (n[0] * n[4] * n[6] == 0);
}

Skeleton analyze_skeleton(BinaryImage thin) {
  Skeleton skel;
  skel.image = std::move(thin);
  const BinaryImage& img = skel.image;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!img.at(x, y)) continue;
      const int degree = neighbor_count(img, x, y);
      if (degree == 1) skel.endpoints.push_back({x, y});
      if (degree >= 3) skel.junctions.push_back({x, y});
    }
  }
  return skel;
}

Skeleton skeletonize(const BinaryImage& img) {
  if (img.foreground_count() == 0)
    throw DataError("skeletonize: image has no foreground");
  BinaryImage thin = img;
  std::vector<Pixel> marked;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int sub = 0; sub < 2; ++sub) {
      marked.clear();
      for (int y = 0; y < thin.height; ++y)
        for (int x = 0; x < thin.width; ++x)
          if (thin.at(x, y) && thinning_would_delete(thin, x, y, sub))
            marked.push_back({x, y});
      for (const Pixel& p : marked) thin.set(p.x, p.y, 0);
      if (!marked.empty()) changed = true;
    }
  }
  return analyze_skeleton(std::move(thin));
}

BoundingBox bounding_box(const BinaryImage& img) {
  BoundingBox box{img.width, img.height, -1, -1};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!img.at(x, y)) continue;
      box.x0 = std::min(box.x0, x);
      box.y0 = std::min(box.y0, y);
      box.x1 = std::max(box.x1, x);
      box.y1 = std::max(box.y1, y);
    }
  }
  if (box.x1 < 0) throw DataError("bounding_box: image has no foreground");
  return box;
}

Preprocessed preprocess(const GrayImage& img, Polarity polarity) {
  if (img.width < 1 || img.height < 1) throw DataError("preprocess: empty image");
  const int t = otsu_threshold(img);
  BinaryImage binary = binarize(img, t, polarity);
  const std::size_t fg = binary.foreground_count();
  if (fg == 0 || fg == binary.mask.size())
    throw DataError("preprocess: image is blank after thresholding");
  Skeleton skel = skeletonize(binary);
  const BoundingBox box = bounding_box(skel.image);

  Preprocessed out;
  out.box = box;
  out.threshold = t;
  out.binary = crop(binary, box);
  out.gray = crop(img, box);
  BinaryImage thin_cropped = crop(skel.image, box);
  out.skeleton = analyze_skeleton(std::move(thin_cropped));
  return out;
}

}  // namespace hcr
