#include "hcr/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hcr/common.hpp"
#include "hcr/mdc.hpp"
#include "hcr/preprocess.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hcr {

namespace {

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::invalid_argument("config: unknown key \"" + key + "\" in " + where);
  }
}

GlyphGenConfig glyphs_from_json(const json& j, bool* seed_set) {
  check_keys(j,
             {"canvas", "stroke_width", "jitter_translate", "jitter_stroke",
              "samples_per_class", "seed"},
             "glyphs");
  GlyphGenConfig g;
  g.canvas = j.value("canvas", g.canvas);
  g.stroke_width = j.value("stroke_width", g.stroke_width);
  g.jitter_translate = j.value("jitter_translate", g.jitter_translate);
  g.jitter_stroke = j.value("jitter_stroke", g.jitter_stroke);
  g.samples_per_class = j.value("samples_per_class", g.samples_per_class);
  *seed_set = j.contains("seed");
  if (*seed_set) g.seed = j.at("seed").get<std::uint64_t>();
  return g;
}

TrainConfig mlp_from_json(const json& j, bool* seed_set) {
  check_keys(j,
             {"seed", "learning_rate", "max_epochs", "target_mse", "mu0", "mu_factor",
              "mu_max", "max_iterations"},
             "mlp");
  TrainConfig t;
  t.learning_rate = j.value("learning_rate", t.learning_rate);
  t.max_epochs = j.value("max_epochs", t.max_epochs);
  t.target_mse = j.value("target_mse", t.target_mse);
  t.mu0 = j.value("mu0", t.mu0);
  t.mu_factor = j.value("mu_factor", t.mu_factor);
  t.mu_max = j.value("mu_max", t.mu_max);
  t.max_iterations = j.value("max_iterations", t.max_iterations);
  *seed_set = j.contains("seed");
  if (*seed_set) t.seed = j.at("seed").get<std::uint64_t>();
  return t;
}

// Seeds left to follow the experiment seed are resolved here so the echoed
// configuration fully determines the run.
ExperimentConfig effective_config(ExperimentConfig cfg) {
  if (!cfg.glyph_seed_set) {
    cfg.glyphs.seed = cfg.seed;
    cfg.glyph_seed_set = true;
  }
  if (!cfg.mlp_seed_set) {
    cfg.mlp.seed = cfg.seed;
    cfg.mlp_seed_set = true;
  }
  if (cfg.synthetic) {
    const int needed = cfg.split.train_per_class + cfg.split.test_per_class;
    cfg.glyphs.samples_per_class = std::max(cfg.glyphs.samples_per_class, needed);
  }
  return cfg;
}

struct UsableSample {
  int label = 0;
  Preprocessed prep;
};

int one_hot_width(const std::vector<std::string>& alphabet) {
  return static_cast<int>(alphabet.size());
}

struct Split {
  std::vector<int> train;  // indices into the usable-sample list
  std::vector<int> test;
};

Split split_samples(const std::vector<UsableSample>& usable, int classes,
                    const SplitSpec& split) {
  std::vector<std::vector<int>> by_class(classes);
  for (int i = 0; i < static_cast<int>(usable.size()); ++i)
    by_class[usable[i].label].push_back(i);

  Split out;
  for (int c = 0; c < classes; ++c) {
    const auto& members = by_class[c];
    const int needed = split.train_per_class + split.test_per_class;
    if (static_cast<int>(members.size()) < needed) {
      std::ostringstream msg;
      msg << "insufficient samples for class " << c << ": need " << needed
          << ", have " << members.size();
      throw DataError(msg.str());
    }
    for (int i = 0; i < split.train_per_class; ++i) out.train.push_back(members[i]);
    for (int i = 0; i < split.test_per_class; ++i)
      out.test.push_back(members[split.train_per_class + i]);
  }
  return out;
}

CellResult evaluate_predictions(const std::string& extractor,
                                const std::string& classifier,
                                const std::vector<int>& truth,
                                const std::vector<int>& predicted,
                                const std::vector<std::string>& alphabet) {
  const int classes = static_cast<int>(alphabet.size());
  CellResult cell;
  cell.extractor = extractor;
  cell.classifier = classifier;
  cell.confusion.assign(classes, std::vector<int>(classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++cell.confusion[truth[i]][predicted[i]];

  int correct = 0, total = 0;
  for (int c = 0; c < classes; ++c) {
    int row_total = 0;
    for (int p = 0; p < classes; ++p) row_total += cell.confusion[c][p];
    correct += cell.confusion[c][c];
    total += row_total;
    if (row_total > 0)
      cell.per_character[alphabet[c]] =
          static_cast<double>(cell.confusion[c][c]) / row_total;
  }
  cell.accuracy = total > 0 ? static_cast<double>(correct) / total : 0.0;
  return cell;
}

json confusion_to_json(const std::vector<std::vector<int>>& confusion) {
  json rows = json::array();
  for (const auto& row : confusion) rows.push_back(row);
  return rows;
}

}  // namespace

std::string classifier_name(ClassifierKind c) {
  switch (c) {
    case ClassifierKind::Mdc: return "mdc";
    case ClassifierKind::MlpBp: return "mlp_bp";
    case ClassifierKind::MlpLm: return "mlp_lm";
  }
  return "?";
}

ClassifierKind classifier_from_name(const std::string& name) {
  if (name == "mdc") return ClassifierKind::Mdc;
  if (name == "mlp_bp") return ClassifierKind::MlpBp;
  if (name == "mlp_lm") return ClassifierKind::MlpLm;
  throw std::invalid_argument("unknown classifier: " + name);
}

ExperimentConfig config_from_json(const json& j) {
  check_keys(j,
             {"synthetic", "data_dir", "glyphs", "alphabet", "split", "extractors",
              "classifiers", "mlp", "mlp_hidden", "seed", "shuffle_seed",
              "output_dir", "reference_accuracies"},
             "the top level");
  ExperimentConfig cfg;
  try {
    cfg.synthetic = j.value("synthetic", cfg.synthetic);
    cfg.data_dir = j.value("data_dir", cfg.data_dir);
    if (j.contains("glyphs"))
      cfg.glyphs = glyphs_from_json(j.at("glyphs"), &cfg.glyph_seed_set);
    if (j.contains("alphabet"))
      cfg.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    if (j.contains("split")) {
      const json& s = j.at("split");
      check_keys(s, {"train_per_class", "test_per_class"}, "split");
      cfg.split.train_per_class = s.value("train_per_class", cfg.split.train_per_class);
      cfg.split.test_per_class = s.value("test_per_class", cfg.split.test_per_class);
    }
    if (j.contains("extractors")) {
      cfg.extractors.clear();
      for (const auto& name : j.at("extractors"))
        cfg.extractors.push_back(extractor_from_name(name.get<std::string>()));
    }
    if (j.contains("classifiers")) {
      cfg.classifiers.clear();
      for (const auto& name : j.at("classifiers"))
        cfg.classifiers.push_back(classifier_from_name(name.get<std::string>()));
    }
    if (j.contains("mlp")) cfg.mlp = mlp_from_json(j.at("mlp"), &cfg.mlp_seed_set);
    cfg.mlp_hidden = j.value("mlp_hidden", cfg.mlp_hidden);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("shuffle_seed"))
      cfg.shuffle_seed = j.at("shuffle_seed").get<std::uint64_t>();
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    if (j.contains("reference_accuracies"))
      cfg.reference_accuracies =
          j.at("reference_accuracies").get<std::map<std::string, double>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  if (cfg.split.train_per_class < 1 || cfg.split.test_per_class < 1)
    throw std::invalid_argument("config: split counts must be at least 1");
  if (cfg.extractors.empty() || cfg.classifiers.empty())
    throw std::invalid_argument("config: extractors and classifiers must be nonempty");
  if (cfg.alphabet.empty()) throw std::invalid_argument("config: empty alphabet");
  if (cfg.mlp_hidden < 1) throw std::invalid_argument("config: mlp_hidden must be >= 1");
  if (!cfg.synthetic && cfg.data_dir.empty())
    throw std::invalid_argument("config: data_dir required when synthetic is false");
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["synthetic"] = cfg.synthetic;
  if (!cfg.data_dir.empty()) j["data_dir"] = cfg.data_dir;
  json glyphs;
  glyphs["canvas"] = cfg.glyphs.canvas;
  glyphs["stroke_width"] = cfg.glyphs.stroke_width;
  glyphs["jitter_translate"] = cfg.glyphs.jitter_translate;
  glyphs["jitter_stroke"] = cfg.glyphs.jitter_stroke;
  glyphs["samples_per_class"] = cfg.glyphs.samples_per_class;
  if (cfg.glyph_seed_set) glyphs["seed"] = cfg.glyphs.seed;
  j["glyphs"] = std::move(glyphs);
  j["alphabet"] = cfg.alphabet;
  j["split"] = {{"train_per_class", cfg.split.train_per_class},
                {"test_per_class", cfg.split.test_per_class}};
  json extractors = json::array();
  for (Extractor e : cfg.extractors) extractors.push_back(extractor_name(e));
  j["extractors"] = std::move(extractors);
  json classifiers = json::array();
  for (ClassifierKind c : cfg.classifiers) classifiers.push_back(classifier_name(c));
  j["classifiers"] = std::move(classifiers);
  json mlp;
  if (cfg.mlp_seed_set) mlp["seed"] = cfg.mlp.seed;
  mlp["learning_rate"] = cfg.mlp.learning_rate;
  mlp["max_epochs"] = cfg.mlp.max_epochs;
  mlp["target_mse"] = cfg.mlp.target_mse;
  mlp["mu0"] = cfg.mlp.mu0;
  mlp["mu_factor"] = cfg.mlp.mu_factor;
  mlp["mu_max"] = cfg.mlp.mu_max;
  mlp["max_iterations"] = cfg.mlp.max_iterations;
  j["mlp"] = std::move(mlp);
  j["mlp_hidden"] = cfg.mlp_hidden;
  j["seed"] = cfg.seed;
  if (cfg.shuffle_seed) j["shuffle_seed"] = *cfg.shuffle_seed;
  if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
  if (!cfg.reference_accuracies.empty())
    j["reference_accuracies"] = cfg.reference_accuracies;
  return j;
}

const CellResult* EvalReport::find(const std::string& extractor,
                                   const std::string& classifier) const {
  for (const CellResult& cell : results)
    if (cell.extractor == extractor && cell.classifier == classifier) return &cell;
  return nullptr;
}

json report_to_json(const EvalReport& report) {
  json j;
  j["toolkit_version"] = report.toolkit_version;
  j["config"] = report.config;
  j["alphabet"] = report.alphabet;
  j["train_count"] = report.train_count;
  j["test_count"] = report.test_count;
  j["excluded_unusable"] = report.excluded_unusable;
  j["warnings"] = report.warnings;
  json results = json::array();
  for (const CellResult& cell : report.results) {
    json c;
    c["extractor"] = cell.extractor;
    c["classifier"] = cell.classifier;
    c["accuracy"] = cell.accuracy;
    c["per_character"] = cell.per_character;
    c["confusion"] = confusion_to_json(cell.confusion);
    results.push_back(std::move(c));
  }
  j["results"] = std::move(results);
  return j;
}

EvalReport report_from_json(const json& j) {
  try {
    EvalReport report;
    report.toolkit_version = j.at("toolkit_version").get<std::string>();
    report.config = j.at("config");
    report.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    report.train_count = j.at("train_count").get<int>();
    report.test_count = j.at("test_count").get<int>();
    report.excluded_unusable = j.at("excluded_unusable").get<int>();
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& c : j.at("results")) {
      CellResult cell;
      cell.extractor = c.at("extractor").get<std::string>();
      cell.classifier = c.at("classifier").get<std::string>();
      cell.accuracy = c.at("accuracy").get<double>();
      cell.per_character = c.at("per_character").get<std::map<std::string, double>>();
      cell.confusion = c.at("confusion").get<std::vector<std::vector<int>>>();
      report.results.push_back(std::move(cell));
    }
    return report;
  } catch (const json::exception& e) {
    throw DataError(std::string("report: ") + e.what());
  }
}

namespace {

struct PipelineData {
  ExperimentConfig cfg;  // effective configuration
  std::vector<UsableSample> usable;
  Split split;
  std::vector<std::string> warnings;
  int excluded = 0;
};

PipelineData build_pipeline(const ExperimentConfig& raw_cfg) {
  PipelineData pd;
  pd.cfg = effective_config(raw_cfg);
  const ExperimentConfig& cfg = pd.cfg;

  LabeledDataset dataset;
  if (cfg.synthetic) {
    dataset = generate_glyphs(cfg.glyphs, cfg.alphabet);
  } else {
    dataset = ingest_dataset(cfg.data_dir, cfg.alphabet);
  }

  std::vector<int> order(dataset.samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  if (cfg.shuffle_seed) {
    std::mt19937_64 rng(*cfg.shuffle_seed);
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[uniform_int(rng, 0, static_cast<int>(i) - 1)]);
  }

  for (int index : order) {
    const LabeledSample& sample = dataset.samples[index];
    std::ostringstream tag;
    tag << dataset.provenance << "#" << index << " (" << cfg.alphabet[sample.label]
        << ")";
    try {
      Preprocessed prep = preprocess(sample.image);
      if (prep.box.width() < 3 || prep.box.height() < 3) {
        pd.warnings.push_back(tag.str() + ": crop smaller than 3x3; excluded");
        ++pd.excluded;
        continue;
      }
      pd.usable.push_back({sample.label, std::move(prep)});
    } catch (const DataError& e) {
      pd.warnings.push_back(tag.str() + ": " + std::string(e.what()) + "; excluded");
      ++pd.excluded;
    }
  }

  pd.split = split_samples(pd.usable, one_hot_width(cfg.alphabet), cfg.split);
  return pd;
}

void extract_matrices(const PipelineData& pd, Extractor which, Eigen::MatrixXd& train_x,
                      std::vector<int>& train_y, Eigen::MatrixXd& test_x,
                      std::vector<int>& test_y) {
  const int dim = feature_dimension(which);
  train_x.resize(static_cast<long>(pd.split.train.size()), dim);
  test_x.resize(static_cast<long>(pd.split.test.size()), dim);
  train_y.resize(pd.split.train.size());
  test_y.resize(pd.split.test.size());
  for (std::size_t i = 0; i < pd.split.train.size(); ++i) {
    const UsableSample& s = pd.usable[pd.split.train[i]];
    train_x.row(static_cast<long>(i)) = extract(which, s.prep).values.transpose();
    train_y[i] = s.label;
  }
  for (std::size_t i = 0; i < pd.split.test.size(); ++i) {
    const UsableSample& s = pd.usable[pd.split.test[i]];
    test_x.row(static_cast<long>(i)) = extract(which, s.prep).values.transpose();
    test_y[i] = s.label;
  }
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& cfg, Extractor which) {
  const PipelineData pd = build_pipeline(cfg);
  PreparedData out;
  extract_matrices(pd, which, out.train_x, out.train_y, out.test_x, out.test_y);
  out.excluded_unusable = pd.excluded;
  out.warnings = pd.warnings;
  return out;
}

EvalReport run_experiment(const ExperimentConfig& raw_cfg) {
  const auto start = std::chrono::steady_clock::now();
  const PipelineData pd = build_pipeline(raw_cfg);
  const ExperimentConfig& cfg = pd.cfg;
  const int classes = one_hot_width(cfg.alphabet);

  EvalReport report;
  report.toolkit_version = kToolkitVersion;
  report.config = config_to_json(cfg);
  report.config.erase("output_dir");  // environmental, not part of the experiment
  report.alphabet = cfg.alphabet;
  report.train_count = cfg.split.train_per_class;
  report.test_count = cfg.split.test_per_class;
  report.warnings = pd.warnings;
  report.excluded_unusable = pd.excluded;

  for (Extractor which : cfg.extractors) {
    const int dim = feature_dimension(which);
    Eigen::MatrixXd train_x, test_x;
    std::vector<int> train_y, test_y;
    extract_matrices(pd, which, train_x, train_y, test_x, test_y);

    for (ClassifierKind kind : cfg.classifiers) {
      std::vector<int> predicted(test_y.size());
      if (kind == ClassifierKind::Mdc) {
        const MdcModel model =
            fit_mdc(train_x, train_y, cfg.alphabet, extractor_name(which));
        for (std::size_t i = 0; i < predicted.size(); ++i)
          predicted[i] = predict_mdc(model, test_x.row(static_cast<long>(i)).transpose());
      } else {
        Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(train_x.rows(), classes);
        for (std::size_t i = 0; i < train_y.size(); ++i)
          targets(static_cast<long>(i), train_y[i]) = 1.0;
        MlpModel model = init_mlp({dim, cfg.mlp_hidden, classes}, cfg.mlp.seed);
        if (kind == ClassifierKind::MlpBp) {
          model = train_bp(std::move(model), train_x, targets, cfg.mlp).first;
        } else {
          model = train_lm(std::move(model), train_x, targets, cfg.mlp).first;
        }
        for (std::size_t i = 0; i < predicted.size(); ++i)
          predicted[i] =
              predict_mlp(model, test_x.row(static_cast<long>(i)).transpose());
      }
      report.results.push_back(evaluate_predictions(
          extractor_name(which), classifier_name(kind), test_y, predicted,
          cfg.alphabet));
    }
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

EvalReport compare_extractors(ExperimentConfig cfg) {
  cfg.extractors = {Extractor::Gradient, Extractor::Hybrid, Extractor::Geometric,
                    Extractor::Proposed};
  cfg.classifiers = {ClassifierKind::Mdc};
  return run_experiment(cfg);
}

EvalReport compare_networks(ExperimentConfig cfg) {
  cfg.classifiers = {ClassifierKind::MlpBp, ClassifierKind::MlpLm};
  return run_experiment(cfg);
}

std::vector<TableCell> extractor_table(const EvalReport& report) {
  std::map<std::string, double> references;
  if (report.config.contains("reference_accuracies"))
    references =
        report.config.at("reference_accuracies").get<std::map<std::string, double>>();

  std::vector<TableCell> cells;
  for (const std::string& row : {"gradient", "hybrid", "geometric", "proposed"}) {
    const CellResult* cell = report.find(row, "mdc");
    if (!cell) continue;
    cells.push_back({"extractor_comparison", row, "classifier", "mdc"});
    cells.push_back(
        {"extractor_comparison", row, "accuracy", format_double(cell->accuracy)});
    const auto ref = references.find(row);
    if (ref != references.end())
      cells.push_back({"extractor_comparison", row, "reference_accuracy",
                       format_double(ref->second)});
  }
  return cells;
}

std::vector<TableCell> per_character_table(const EvalReport& report,
                                           const std::vector<std::string>& chars) {
  for (const std::string& c : chars)
    if (std::find(report.alphabet.begin(), report.alphabet.end(), c) ==
        report.alphabet.end())
      throw std::invalid_argument("per_character_table: unknown character " + c);

  std::vector<TableCell> cells;
  for (const std::string& row : {"geometric", "hybrid", "gradient", "proposed"}) {
    const CellResult* cell = report.find(row, "mdc");
    if (!cell) {
      for (const CellResult& any : report.results)
        if (any.extractor == row) {
          cell = &any;
          break;
        }
    }
    if (!cell) continue;
    for (const std::string& c : chars) {
      const auto it = cell->per_character.find(c);
      const double pct = it == cell->per_character.end() ? 0.0 : it->second * 100.0;
      cells.push_back({"per_character", row, c, format_double(pct)});
    }
  }
  return cells;
}

std::vector<TableCell> network_table(const EvalReport& report) {
  std::vector<std::string> extractors;
  for (const CellResult& cell : report.results)
    if (std::find(extractors.begin(), extractors.end(), cell.extractor) ==
        extractors.end())
      extractors.push_back(cell.extractor);

  const std::string train = std::to_string(report.train_count *
                                           static_cast<int>(report.alphabet.size()));
  const std::string test = std::to_string(report.test_count *
                                          static_cast<int>(report.alphabet.size()));
  std::vector<TableCell> cells;
  for (const std::string& extractor : extractors) {
    const std::string table = "network_comparison:" + extractor;
    for (const std::string& row : {"mlp_bp", "mlp_lm"}) {
      const CellResult* cell = report.find(extractor, row);
      if (!cell) continue;
      cells.push_back({table, row, "train_count", train});
      cells.push_back({table, row, "test_count", test});
      cells.push_back({table, row, "accuracy", format_double(cell->accuracy)});
    }
    cells.push_back({table, "cnn", "train_count", train});
    cells.push_back({table, "cnn", "test_count", test});
    cells.push_back({table, "cnn", "accuracy", "not implemented"});
  }
  return cells;
}

std::string tables_to_csv(const std::vector<TableCell>& cells) {
  std::ostringstream out;
  out << "table_id,row,column,value\n";
  for (const TableCell& cell : cells)
    out << cell.table_id << "," << cell.row << "," << cell.column << ","
        << cell.value << "\n";
  return out.str();
}

void write_report_files(const EvalReport& report, const std::vector<TableCell>& cells,
                        const std::string& out_dir) {
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "report.json");
    if (!out) throw DataError(out_dir + ": cannot write report.json");
    out << report_to_json(report).dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "tables.csv");
    if (!out) throw DataError(out_dir + ": cannot write tables.csv");
    out << tables_to_csv(cells);
  }
  {
    json timings;
    timings["runtime_seconds"] = report.runtime_seconds;
    std::ofstream out(fs::path(out_dir) / "timings.json");
    if (!out) throw DataError(out_dir + ": cannot write timings.json");
    out << timings.dump(2) << "\n";
  }
}

}  // namespace hcr
