#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "hcr/common.hpp"
#include "hcr/dataset.hpp"
#include "hcr/image.hpp"
#include "hcr/image_io.hpp"

namespace fs = std::filesystem;
using namespace hcr;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

GrayImage random_gray(std::mt19937_64& rng, int w, int h) {
  GrayImage img(w, h);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
  return img;
}

}  // namespace

TEST_CASE("pgm round trip preserves pixel data") {
  const fs::path dir = temp_dir("hcr_imaging_pgm");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5; ++i) {
    const GrayImage img = random_gray(rng, 3 + i * 7, 2 + i * 5);
    const std::string path = (dir / "img.pgm").string();
    save_pgm(path, img);
    CHECK(load_image(path) == img);
  }
}

TEST_CASE("png round trip preserves pixel data") {
  const fs::path dir = temp_dir("hcr_imaging_png");
  std::mt19937_64 rng(12);
  const GrayImage img = random_gray(rng, 33, 21);
  const std::string path = (dir / "img.png").string();
  save_png(path, img);
  CHECK(load_image(path) == img);
}

TEST_CASE("pgm header comments and whitespace are accepted") {
  const fs::path dir = temp_dir("hcr_imaging_hdr");
  const std::string path = (dir / "c.pgm").string();
  std::ofstream out(path, std::ios::binary);
  out << "P5\n# a comment\n 2 # inline\n2\n# another\n255\n";
  const char px[4] = {0, 50, 100, (char)200};
  out.write(px, 4);
  out.close();
  const GrayImage img = load_image(path);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.at(1, 1) == 200);
}

TEST_CASE("binary mask saves as ink on white") {
  const fs::path dir = temp_dir("hcr_imaging_mask");
  BinaryImage mask(3, 1);
  mask.set(1, 0, true);
  const std::string path = (dir / "m.pgm").string();
  save_pgm(path, mask);
  const GrayImage img = load_image(path);
  CHECK(img.at(0, 0) == 255);
  CHECK(img.at(1, 0) == 0);
  CHECK(img.at(2, 0) == 255);
}

TEST_CASE("unreadable and unsupported files raise DataError") {
  const fs::path dir = temp_dir("hcr_imaging_err");
  CHECK_THROWS_AS(load_image((dir / "missing.pgm").string()), DataError);

  const std::string deep = (dir / "deep.pgm").string();
  std::ofstream out(deep, std::ios::binary);
  out << "P5\n1 1\n65535\n";
  out.put(0);
  out.put(0);
  out.close();
  CHECK_THROWS_AS(load_image(deep), DataError);

  const std::string junk = (dir / "junk.bin").string();
  std::ofstream(junk) << "not an image";
  CHECK_THROWS_AS(load_image(junk), DataError);
}

TEST_CASE("crop copies the inclusive box") {
  GrayImage img(5, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x) img.at(x, y) = static_cast<std::uint8_t>(10 * y + x);
  const GrayImage sub = crop(img, {1, 1, 3, 2});
  CHECK(sub.width == 3);
  CHECK(sub.height == 2);
  CHECK(sub.at(0, 0) == 11);
  CHECK(sub.at(2, 1) == 23);

  BinaryImage mask(5, 4);
  mask.set(1, 1, true);
  mask.set(3, 2, true);
  const BinaryImage msub = crop(mask, {1, 1, 3, 2});
  CHECK(msub.at(0, 0));
  CHECK(msub.at(2, 1));
  CHECK(msub.foreground_count() == 2);
}

TEST_CASE("neighbor_count scans the 8-neighborhood") {
  BinaryImage img(3, 3);
  img.set(1, 1, true);
  CHECK(neighbor_count(img, 1, 1) == 0);
  img.set(0, 0, true);
  img.set(2, 2, true);
  img.set(1, 0, true);
  CHECK(neighbor_count(img, 1, 1) == 3);
  CHECK(neighbor_count(img, 0, 0) == 2);  // (1,1) and (1,0); corners clip
}

TEST_CASE("count_components distinguishes 8-connected blobs") {
  BinaryImage img(6, 3);
  CHECK(count_components(img) == 0);
  img.set(0, 0, true);
  img.set(1, 1, true);  // diagonal touch: one component
  CHECK(count_components(img) == 1);
  img.set(4, 0, true);
  img.set(5, 2, true);  // two isolated pixels
  CHECK(count_components(img) == 3);
}

TEST_CASE("ingest_dataset reads labeled files in filename order") {
  const fs::path dir = temp_dir("hcr_ingest");
  const GrayImage a(4, 4, 200);
  save_pgm((dir / "A_2.pgm").string(), a);
  save_pgm((dir / "A_1.pgm").string(), a);
  save_pgm((dir / "B_1.pgm").string(), a);
  save_pgm((dir / "Q_1.pgm").string(), a);
  std::ofstream(dir / "notes.txt") << "ignored";

  IngestStats stats;
  const LabeledDataset ds = ingest_dataset(dir.string(), {"A", "B"}, &stats);
  CHECK(ds.samples.size() == 3);
  CHECK(ds.samples[0].label == 0);  // A_1
  CHECK(ds.samples[1].label == 0);  // A_2
  CHECK(ds.samples[2].label == 1);  // B_1
  CHECK(stats.matched == 3);
  CHECK(stats.skipped_label == 1);
  CHECK(stats.skipped_other == 1);
}

TEST_CASE("ingest_dataset rejects directories without matches") {
  const fs::path dir = temp_dir("hcr_ingest_empty");
  CHECK_THROWS_AS(ingest_dataset(dir.string(), {"A"}), DataError);
  save_pgm((dir / "Q_1.pgm").string(), GrayImage(4, 4, 10));
  CHECK_THROWS_AS(ingest_dataset(dir.string(), {"A", "B"}), DataError);
}

TEST_CASE("glyph generation is deterministic and jitter-free when asked") {
  GlyphGenConfig cfg;
  cfg.samples_per_class = 2;
  cfg.seed = 99;
  const std::vector<std::string> alphabet = {"A", "L", "Z"};
  const LabeledDataset ds1 = generate_glyphs(cfg, alphabet);
  const LabeledDataset ds2 = generate_glyphs(cfg, alphabet);
  CHECK(ds1 == ds2);
  REQUIRE(ds1.samples.size() == 6);
  CHECK(ds1.samples[0].image == ds1.samples[1].image);  // zero jitter
  CHECK(ds1.samples[0].label == 0);
  CHECK(ds1.samples[5].label == 2);
}

TEST_CASE("jittered glyphs vary but stay reproducible per seed") {
  GlyphGenConfig cfg;
  cfg.samples_per_class = 4;
  cfg.jitter_translate = 2;
  cfg.jitter_stroke = 1;
  cfg.seed = 5;
  const LabeledDataset ds = generate_glyphs(cfg, {"O"});
  CHECK(generate_glyphs(cfg, {"O"}) == ds);
  bool any_differ = false;
  for (std::size_t i = 1; i < ds.samples.size(); ++i)
    any_differ = any_differ || !(ds.samples[i].image == ds.samples[0].image);
  CHECK(any_differ);
}

TEST_CASE("every generated glyph has foreground below threshold 128") {
  GlyphGenConfig cfg;
  cfg.jitter_translate = 3;
  cfg.jitter_stroke = 1;
  cfg.samples_per_class = 3;
  cfg.seed = 17;
  const LabeledDataset ds = generate_glyphs(cfg, default_alphabet());
  for (const LabeledSample& s : ds.samples) {
    int dark = 0;
    for (auto v : s.image.data) dark += v <= 128;
    CHECK(dark >= 1);
  }
}

TEST_CASE("L template rasterizes exactly as its two strokes") {
  GlyphGenConfig cfg;
  cfg.stroke_width = 1;
  // Independent oracle: walk both polylines with a plain Bresenham and
  // collect the stamped pixels.
  const auto& strokes = glyph_template("L");
  BinaryImage expect(cfg.canvas, cfg.canvas);
  for (const auto& line : strokes) {
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      Pixel a = glyph_canvas_point(cfg, line[i][0], line[i][1]);
      const Pixel b = glyph_canvas_point(cfg, line[i + 1][0], line[i + 1][1]);
      int x = a.x, y = a.y;
      const int dx = std::abs(b.x - x), dy = -std::abs(b.y - y);
      const int sx = x < b.x ? 1 : -1, sy = y < b.y ? 1 : -1;
      int err = dx + dy;
      while (true) {
        expect.set(x, y, true);
        if (x == b.x && y == b.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) { err += dy; x += sx; }
        if (e2 <= dx) { err += dx; y += sy; }
      }
    }
  }
  const LabeledDataset ds = generate_glyphs(cfg, {"L"});
  REQUIRE(ds.samples.size() == 1);
  const GrayImage& img = ds.samples[0].image;
  for (int y = 0; y < cfg.canvas; ++y)
    for (int x = 0; x < cfg.canvas; ++x)
      CHECK((img.at(x, y) == 0) == expect.at(x, y));
}

TEST_CASE("alphabet entries without templates are rejected") {
  GlyphGenConfig cfg;
  CHECK_THROWS_AS(generate_glyphs(cfg, {"A", "@"}), std::invalid_argument);
  CHECK(has_glyph_template("Q"));
  CHECK_FALSE(has_glyph_template("q"));
}
