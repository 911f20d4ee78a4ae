#include <algorithm>
#include <random>

#include "doctest.h"
#include "hcr/common.hpp"
#include "hcr/dataset.hpp"
#include "hcr/preprocess.hpp"
#include "test_util.hpp"

using namespace hcr;

namespace {

BinaryImage line_h(int len) {
  BinaryImage img(len + 4, 5);
  for (int x = 2; x < 2 + len; ++x) img.set(x, 2, true);
  return img;
}

}  // namespace

TEST_CASE("otsu splits a perfectly bimodal image at the smallest tied t") {
  GrayImage img(10, 10);
  for (int i = 0; i < 50; ++i) img.data[i] = 0;
  for (int i = 50; i < 100; ++i) img.data[i] = 255;
  CHECK(otsu_threshold(img) == 0);
}

TEST_CASE("otsu on a constant image returns its own bin") {
  CHECK(otsu_threshold(GrayImage(8, 8, 77)) == 77);
  CHECK(otsu_threshold(GrayImage(3, 3, 0)) == 0);
  CHECK(otsu_threshold(GrayImage(3, 3, 255)) == 255);
}

TEST_CASE("otsu separates two tight clusters") {
  GrayImage img(10, 10);
  for (int i = 0; i < 60; ++i) img.data[i] = static_cast<std::uint8_t>(40 + i % 3);
  for (int i = 60; i < 100; ++i) img.data[i] = static_cast<std::uint8_t>(200 + i % 3);
  const int t = otsu_threshold(img);
  CHECK(t >= 42);
  CHECK(t < 200);
  CHECK(t == testutil::otsu_brute_force(img));
}

TEST_CASE("otsu matches the exhaustive sweep oracle on random images") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20; ++i) {
    const GrayImage img = testutil::random_nonconstant_gray(rng, 10, 10);
    CHECK(otsu_threshold(img) == testutil::otsu_brute_force(img));
  }
}

TEST_CASE("binarize respects threshold and polarity") {
  GrayImage img(2, 1);
  img.at(0, 0) = 0;
  img.at(1, 0) = 255;
  const BinaryImage dark = binarize(img, 0, Polarity::DarkForeground);
  CHECK(dark.at(0, 0));
  CHECK_FALSE(dark.at(1, 0));
  const BinaryImage light = binarize(img, 0, Polarity::LightForeground);
  CHECK_FALSE(light.at(0, 0));
  CHECK(light.at(1, 0));
}

TEST_CASE("an already-thin run survives skeletonization unchanged") {
  const BinaryImage img = line_h(10);
  const Skeleton skel = skeletonize(img);
  CHECK(skel.image == img);
  CHECK(skel.endpoints.size() == 2);
  CHECK(skel.junctions.empty());
}

TEST_CASE("a filled 3x3 square thins to its center pixel") {
  BinaryImage img(5, 5);
  for (int y = 1; y <= 3; ++y)
    for (int x = 1; x <= 3; ++x) img.set(x, y, true);
  const Skeleton skel = skeletonize(img);
  CHECK(skel.image.foreground_count() == 1);
  CHECK(skel.image.at(2, 2));
}

TEST_CASE("skeletonize requires foreground") {
  CHECK_THROWS_AS(skeletonize(BinaryImage(4, 4)), DataError);
}

TEST_CASE("thinning is idempotent, component-preserving, and leaves no deletable pixel") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 12; ++i) {
    const BinaryImage blob = testutil::random_blob(rng, 48);
    const Skeleton skel = skeletonize(blob);
    CHECK(count_components(skel.image) == count_components(blob));
    CHECK(skeletonize(skel.image).image == skel.image);
    for (int y = 0; y < skel.image.height; ++y) {
      for (int x = 0; x < skel.image.width; ++x) {
        if (!skel.image.at(x, y)) continue;
        CHECK_FALSE(thinning_would_delete(skel.image, x, y, 0));
        CHECK_FALSE(thinning_would_delete(skel.image, x, y, 1));
      }
    }
  }
}

TEST_CASE("analyze_skeleton finds the junction cluster and endpoints of a plus") {
  BinaryImage img(7, 7);
  for (int i = 1; i <= 5; ++i) {
    img.set(i, 3, true);
    img.set(3, i, true);
  }
  const Skeleton skel = analyze_skeleton(img);
  // The center's four arm neighbors each see three pixels through the
  // diagonals, so the whole cluster qualifies.
  REQUIRE(skel.junctions.size() == 5);
  CHECK(std::find(skel.junctions.begin(), skel.junctions.end(), Pixel{3, 3}) !=
        skel.junctions.end());
  CHECK(skel.endpoints.size() == 4);
}

TEST_CASE("bounding_box is the tight foreground box") {
  BinaryImage img(10, 10);
  img.set(5, 7, true);
  CHECK(bounding_box(img) == BoundingBox{5, 7, 5, 7});
  img.set(1, 2, true);
  img.set(8, 3, true);
  CHECK(bounding_box(img) == BoundingBox{1, 2, 8, 7});
  CHECK_THROWS_AS(bounding_box(BinaryImage(3, 3)), DataError);
}

TEST_CASE("bounding_box matches a min/max scan oracle on random masks") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    BinaryImage img(uniform_int(rng, 4, 30), uniform_int(rng, 4, 30));
    for (int k = 0; k < 12; ++k)
      img.set(uniform_int(rng, 0, img.width - 1), uniform_int(rng, 0, img.height - 1),
              true);
    int x0 = img.width, y0 = img.height, x1 = -1, y1 = -1;
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        if (img.at(x, y)) {
          x0 = std::min(x0, x);
          y0 = std::min(y0, y);
          x1 = std::max(x1, x);
          y1 = std::max(y1, y);
        }
    CHECK(bounding_box(img) == BoundingBox{x0, y0, x1, y1});
  }
}

TEST_CASE("crop to the bounding box keeps every foreground pixel") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 8; ++i) {
    const BinaryImage blob = testutil::random_blob(rng, 40);
    const BinaryImage cropped = crop(blob, bounding_box(blob));
    CHECK(cropped.foreground_count() == blob.foreground_count());
  }
}

TEST_CASE("preprocess rejects blank images") {
  CHECK_THROWS_AS(preprocess(GrayImage(20, 20, 255)), DataError);
  CHECK_THROWS_AS(preprocess(GrayImage(20, 20, 0)), DataError);
}

TEST_CASE("preprocess crops to the skeleton box and stays a fixpoint") {
  GlyphGenConfig cfg;
  const LabeledDataset ds = generate_glyphs(cfg, {"L"});
  const Preprocessed prep = preprocess(ds.samples[0].image);

  CHECK(prep.skeleton.image.width == prep.box.width());
  CHECK(prep.binary.width == prep.box.width());
  CHECK(prep.gray.width == prep.box.width());
  CHECK(prep.skeleton.image.height == prep.box.height());

  // Tightness: every edge row/column of the crop touches skeleton pixels.
  const BoundingBox inner = bounding_box(prep.skeleton.image);
  CHECK(inner == BoundingBox{0, 0, prep.box.width() - 1, prep.box.height() - 1});

  CHECK(skeletonize(prep.skeleton.image).image == prep.skeleton.image);
  CHECK(prep.threshold >= 0);
  CHECK(prep.threshold < 255);
}

TEST_CASE("preprocess honors light-foreground polarity") {
  GlyphGenConfig cfg;
  const LabeledDataset ds = generate_glyphs(cfg, {"T"});
  GrayImage inverted = ds.samples[0].image;
  for (auto& v : inverted.data) v = static_cast<std::uint8_t>(255 - v);
  const Preprocessed a = preprocess(ds.samples[0].image, Polarity::DarkForeground);
  const Preprocessed b = preprocess(inverted, Polarity::LightForeground);
  CHECK(a.skeleton.image == b.skeleton.image);
  CHECK(a.binary == b.binary);
}
