#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include "hcr/dataset.hpp"
#include "hcr/features.hpp"
#include "hcr/mlp.hpp"

namespace hcr {

enum class ClassifierKind { Mdc, MlpBp, MlpLm };

std::string classifier_name(ClassifierKind c);
ClassifierKind classifier_from_name(const std::string& name);

struct SplitSpec {
  int train_per_class = 3;
  int test_per_class = 1;
};

struct ExperimentConfig {
  // Dataset source: a labeled directory or the synthetic generator.
  bool synthetic = true;
  std::string data_dir;
  GlyphGenConfig glyphs;
  bool glyph_seed_set = false;  // when false, glyphs.seed follows seed

  std::vector<std::string> alphabet = default_alphabet();
  SplitSpec split;
  std::vector<Extractor> extractors = {Extractor::Proposed, Extractor::Geometric,
                                       Extractor::Hybrid, Extractor::Gradient};
  std::vector<ClassifierKind> classifiers = {ClassifierKind::Mdc};

  TrainConfig mlp;
  bool mlp_seed_set = false;  // when false, mlp.seed follows seed
  int mlp_hidden = 16;

  std::uint64_t seed = 0;
  std::optional<std::uint64_t> shuffle_seed;  // unset: dataset order is kept
  std::string output_dir;

  // Optional annotation columns echoed into the extractor table (for example
  // externally reported accuracies); never asserted against.
  std::map<std::string, double> reference_accuracies;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// One (extractor, classifier) evaluation.
struct CellResult {
  std::string extractor;
  std::string classifier;
  double accuracy = 0.0;                        // trace(confusion)/sum(confusion)
  std::map<std::string, double> per_character;  // fraction correct per class
  std::vector<std::vector<int>> confusion;      // row = true class
};

struct EvalReport {
  std::string toolkit_version;
  nlohmann::json config;  // echo of the experiment configuration
  std::vector<std::string> alphabet;
  int train_count = 0;  // per-class counts actually used
  int test_count = 0;
  int excluded_unusable = 0;  // blank or degenerate images dropped with a warning
  std::vector<std::string> warnings;
  std::vector<CellResult> results;
  double runtime_seconds = 0.0;  // volatile; not part of report.json

  const CellResult* find(const std::string& extractor,
                         const std::string& classifier) const;
};

// Deterministic serialization; runtime_seconds is excluded so identical
// configurations produce byte-identical files.
nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

// Feature matrices for one extractor over the deterministic split; the same
// preparation run_experiment performs, exposed for training single models.
struct PreparedData {
  Eigen::MatrixXd train_x;  // rows are samples
  Eigen::MatrixXd test_x;
  std::vector<int> train_y;
  std::vector<int> test_y;
  int excluded_unusable = 0;
  std::vector<std::string> warnings;
};

PreparedData prepare_data(const ExperimentConfig& cfg, Extractor which);

// Ingest/generate, split per class in dataset order (first train_per_class to
// train, next test_per_class to test), preprocess, extract per requested
// extractor, fit and score per requested classifier. All randomness flows
// from the config seed.
EvalReport run_experiment(const ExperimentConfig& cfg);

// All four extractors against the minimum distance classifier.
EvalReport compare_extractors(ExperimentConfig cfg);

// The two perceptron trainers per configured extractor.
EvalReport compare_networks(ExperimentConfig cfg);

struct TableCell {
  std::string table_id;
  std::string row;
  std::string column;
  std::string value;
};

// Extractor comparison keyed by accuracy fraction, rows in the order
// gradient, hybrid, geometric, proposed.
std::vector<TableCell> extractor_table(const EvalReport& report);

// Per-character accuracy percentages for the requested characters, one row
// per extractor present in the report. Throws for unknown characters.
std::vector<TableCell> per_character_table(const EvalReport& report,
                                           const std::vector<std::string>& chars);

// Per-extractor network comparison: rows mlp_bp, mlp_lm, and a cnn row marked
// not-implemented; columns train_count, test_count, accuracy.
std::vector<TableCell> network_table(const EvalReport& report);

std::string tables_to_csv(const std::vector<TableCell>& cells);

// Writes report.json, tables.csv, and timings.json under out_dir.
void write_report_files(const EvalReport& report, const std::vector<TableCell>& cells,
                        const std::string& out_dir);

}  // namespace hcr
