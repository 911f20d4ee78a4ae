#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hcr/image.hpp"

namespace hcr {

struct LabeledSample {
  GrayImage image;
  int label = 0;  // index into the alphabet
  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct LabeledDataset {
  std::vector<LabeledSample> samples;
  std::vector<std::string> alphabet;
  std::string provenance;
  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

struct IngestStats {
  int matched = 0;
  int skipped_label = 0;  // image files whose label prefix is not in the alphabet
  int skipped_other = 0;  // non-image files
};

// Reads every `<LABEL>_<id>.png|.pgm` file under dir, one sample per matching
// file in lexicographic filename order. LABEL is case-sensitive and must be an
// alphabet entry; other image files are skipped and counted in stats.
// Throws DataError on an empty directory or when no file matches.
LabeledDataset ingest_dataset(const std::string& dir,
                              const std::vector<std::string>& alphabet,
                              IngestStats* stats = nullptr);

struct GlyphGenConfig {
  int canvas = 40;           // pixels per side, >= 24
  int stroke_width = 3;      // >= 1
  int jitter_translate = 0;  // max |dx|,|dy| in pixels
  int jitter_stroke = 0;     // max stroke width perturbation
  int samples_per_class = 1;
  std::uint64_t seed = 0;
};

std::vector<std::string> default_alphabet();  // "A".."Z"

bool has_glyph_template(const std::string& name);

// Stroke template of one class: polylines with vertices on the unit square,
// y growing downward.
using GlyphPolyline = std::vector<std::array<double, 2>>;
const std::vector<GlyphPolyline>& glyph_template(const std::string& name);

// Where a unit-square template vertex lands on the canvas (before jitter).
Pixel glyph_canvas_point(const GlyphGenConfig& cfg, double u, double v);

// Renders samples_per_class glyphs per alphabet entry as dark strokes on a
// white canvas, with per-sample uniform translation and stroke-width jitter.
// Identical seed gives a bit-identical dataset. Samples are grouped by class
// in alphabet order. Throws std::invalid_argument for entries without a
// template or out-of-range config values.
LabeledDataset generate_glyphs(const GlyphGenConfig& cfg,
                               const std::vector<std::string>& alphabet);

}  // namespace hcr
