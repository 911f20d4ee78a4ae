#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "hcr/common.hpp"
#include "hcr/dataset.hpp"

namespace hcr {

namespace {

using Template = std::vector<GlyphPolyline>;

const std::map<std::string, Template>& template_table() {
  static const std::map<std::string, Template> table = {
      {"A", {{{0, 1}, {0.5, 0}, {1, 1}}, {{0.2, 0.6}, {0.8, 0.6}}}},
      {"B",
       {{{0, 0}, {0, 1}},
        {{0, 0}, {0.8, 0.1}, {0.8, 0.45}, {0, 0.5}},
        {{0, 0.5}, {0.9, 0.55}, {0.9, 0.95}, {0, 1}}}},
      {"C", {{{1, 0}, {0, 0}, {0, 1}, {1, 1}}}},
      {"D", {{{0, 0}, {0, 1}}, {{0, 0}, {0.7, 0.05}, {1, 0.5}, {0.7, 0.95}, {0, 1}}}},
      {"E", {{{1, 0}, {0, 0}, {0, 1}, {1, 1}}, {{0, 0.5}, {0.7, 0.5}}}},
      {"F", {{{1, 0}, {0, 0}, {0, 1}}, {{0, 0.5}, {0.7, 0.5}}}},
      {"G", {{{1, 0}, {0, 0}, {0, 1}, {1, 1}, {1, 0.55}, {0.55, 0.55}}}},
      {"H", {{{0, 0}, {0, 1}}, {{1, 0}, {1, 1}}, {{0, 0.5}, {1, 0.5}}}},
      {"I", {{{0.5, 0}, {0.5, 1}}, {{0.2, 0}, {0.8, 0}}, {{0.2, 1}, {0.8, 1}}}},
      {"J",
       {{{0.15, 0}, {0.85, 0}},
        {{0.6, 0}, {0.6, 0.85}, {0.4, 1}, {0.15, 1}, {0, 0.85}}}},
      {"K", {{{0, 0}, {0, 1}}, {{1, 0}, {0, 0.5}, {1, 1}}}},
      {"L", {{{0, 0}, {0, 1}, {1, 1}}}},
      {"M", {{{0, 1}, {0, 0}, {0.5, 0.55}, {1, 0}, {1, 1}}}},
      {"N", {{{0, 1}, {0, 0}, {1, 1}, {1, 0}}}},
      {"O", {{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}}},
      {"P", {{{0, 1}, {0, 0}, {0.9, 0}, {0.9, 0.5}, {0, 0.5}}}},
      {"Q", {{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}, {{0.6, 0.6}, {1, 1}}}},
      {"R",
       {{{0, 1}, {0, 0}, {0.9, 0}, {0.9, 0.5}, {0, 0.5}}, {{0.45, 0.5}, {1, 1}}}},
      {"S", {{{1, 0}, {0, 0}, {0, 0.5}, {1, 0.5}, {1, 1}, {0, 1}}}},
      {"T", {{{0, 0}, {1, 0}}, {{0.5, 0}, {0.5, 1}}}},
      {"U", {{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}},
      {"V", {{{0, 0}, {0.5, 1}, {1, 0}}}},
      {"W", {{{0, 0}, {0.25, 1}, {0.5, 0.45}, {0.75, 1}, {1, 0}}}},
      {"X", {{{0, 0}, {1, 1}}, {{1, 0}, {0, 1}}}},
      {"Y", {{{0, 0}, {0.5, 0.5}, {1, 0}}, {{0.5, 0.5}, {0.5, 1}}}},
      {"Z", {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}}},
  };
  return table;
}

void stamp(GrayImage& img, int cx, int cy, int w) {
  const int lo = -((w - 1) / 2);
  const int hi = w / 2;
  for (int dy = lo; dy <= hi; ++dy)
    for (int dx = lo; dx <= hi; ++dx)
      if (img.in_bounds(cx + dx, cy + dy)) img.at(cx + dx, cy + dy) = 0;
}

void draw_line(GrayImage& img, Pixel a, Pixel b, int w) {
  int x = a.x, y = a.y;
  const int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  while (true) {
    stamp(img, x, y, w);
    if (x == b.x && y == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

GrayImage render_glyph(const GlyphGenConfig& cfg, const Template& strokes, int dx,
                       int dy, int w) {
  GrayImage img(cfg.canvas, cfg.canvas, 255);
  for (const auto& line : strokes) {
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      Pixel a = glyph_canvas_point(cfg, line[i][0], line[i][1]);
      Pixel b = glyph_canvas_point(cfg, line[i + 1][0], line[i + 1][1]);
      a.x += dx;
      a.y += dy;
      b.x += dx;
      b.y += dy;
      draw_line(img, a, b, w);
    }
    if (line.size() == 1) {
      Pixel a = glyph_canvas_point(cfg, line[0][0], line[0][1]);
      stamp(img, a.x + dx, a.y + dy, w);
    }
  }
  return img;
}

}  // namespace

std::vector<std::string> default_alphabet() {
  std::vector<std::string> names;
  for (char c = 'A'; c <= 'Z'; ++c) names.emplace_back(1, c);
  return names;
}

bool has_glyph_template(const std::string& name) {
  return template_table().count(name) != 0;
}

const std::vector<GlyphPolyline>& glyph_template(const std::string& name) {
  const auto& table = template_table();
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("no glyph template for " + name);
  return it->second;
}

Pixel glyph_canvas_point(const GlyphGenConfig& cfg, double u, double v) {
  const int margin = cfg.canvas / 6;
  const int box = cfg.canvas - 2 * margin;
  return Pixel{margin + static_cast<int>(std::lround(u * (box - 1))),
               margin + static_cast<int>(std::lround(v * (box - 1)))};
}

LabeledDataset generate_glyphs(const GlyphGenConfig& cfg,
                               const std::vector<std::string>& alphabet) {
  if (cfg.canvas < 24) throw std::invalid_argument("canvas must be at least 24");
  if (cfg.stroke_width < 1) throw std::invalid_argument("stroke_width must be positive");
  if (cfg.jitter_translate < 0 || cfg.jitter_stroke < 0)
    throw std::invalid_argument("jitter amounts must be non-negative");
  if (cfg.samples_per_class < 1)
    throw std::invalid_argument("samples_per_class must be positive");
  for (const auto& name : alphabet)
    if (!has_glyph_template(name))
      throw std::invalid_argument("no glyph template for " + name);

  std::mt19937_64 rng(cfg.seed);
  LabeledDataset ds;
  ds.alphabet = alphabet;
  ds.provenance = "synthetic";
  for (int label = 0; label < static_cast<int>(alphabet.size()); ++label) {
    const Template& strokes = glyph_template(alphabet[label]);
    for (int s = 0; s < cfg.samples_per_class; ++s) {
      const int jt = cfg.jitter_translate;
      const int js = cfg.jitter_stroke;
      const int dx = jt ? uniform_int(rng, -jt, jt) : 0;
      const int dy = jt ? uniform_int(rng, -jt, jt) : 0;
      const int dw = js ? uniform_int(rng, -js, js) : 0;
      const int w = std::max(1, cfg.stroke_width + dw);
      ds.samples.push_back({render_glyph(cfg, strokes, dx, dy, w), label});
    }
  }
  return ds;
}

}  // namespace hcr
