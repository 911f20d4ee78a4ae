#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hcr/common.hpp"
#include "hcr/dataset.hpp"
#include "hcr/experiment.hpp"
#include "hcr/features.hpp"
#include "hcr/image_io.hpp"
#include "hcr/mdc.hpp"
#include "hcr/mlp.hpp"
#include "hcr/preprocess.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

hcr::ExperimentConfig load_config(const GlobalOpts& g) {
  hcr::ExperimentConfig cfg;
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw std::invalid_argument(g.config_path + ": cannot open config file");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw std::invalid_argument(g.config_path + ": " + e.what());
    }
    cfg = hcr::config_from_json(j);
  }
  if (g.seed) cfg.seed = *g.seed;
  if (!g.out.empty()) cfg.output_dir = g.out;
  return cfg;
}

std::string require_out_dir(const hcr::ExperimentConfig& cfg) {
  if (cfg.output_dir.empty())
    throw std::invalid_argument("an output directory is required (--out)");
  return cfg.output_dir;
}

std::string format_values_csv(const Eigen::VectorXd& values) {
  std::ostringstream out;
  out.precision(17);
  for (long i = 0; i < values.size(); ++i) {
    if (i) out << ",";
    out << values[i];
  }
  out << "\n";
  return out.str();
}

// Characters for the per-character table: the explicit request, or the
// standard A/L/Z columns restricted to the alphabet.
std::vector<std::string> resolve_chars(const std::vector<std::string>& requested,
                                       const std::vector<std::string>& alphabet) {
  if (!requested.empty()) return requested;
  std::vector<std::string> chars;
  for (const std::string& c : {"A", "L", "Z"})
    if (std::find(alphabet.begin(), alphabet.end(), c) != alphabet.end())
      chars.push_back(c);
  return chars;
}

void print_results(const hcr::EvalReport& report) {
  for (const std::string& warning : report.warnings)
    std::cerr << "warning: " << warning << "\n";
  std::cout << "train/test per class: " << report.train_count << "/"
            << report.test_count << ", classes: " << report.alphabet.size() << "\n";
  for (const hcr::CellResult& cell : report.results)
    std::cout << cell.extractor << " + " << cell.classifier << ": "
              << std::fixed << std::setprecision(2) << cell.accuracy * 100.0
              << "%\n";
}

int cmd_gen_synthetic(const hcr::ExperimentConfig& cfg_in, const std::string& format) {
  hcr::ExperimentConfig cfg = cfg_in;
  if (!cfg.glyph_seed_set) cfg.glyphs.seed = cfg.seed;
  const std::string out_dir = require_out_dir(cfg);
  const hcr::LabeledDataset ds = hcr::generate_glyphs(cfg.glyphs, cfg.alphabet);
  fs::create_directories(out_dir);
  std::vector<int> counters(cfg.alphabet.size(), 0);
  for (const hcr::LabeledSample& sample : ds.samples) {
    std::ostringstream name;
    name << cfg.alphabet[sample.label] << "_" << std::setw(4) << std::setfill('0')
         << counters[sample.label]++ << "." << format;
    const std::string path = (fs::path(out_dir) / name.str()).string();
    if (format == "png") {
      hcr::save_png(path, sample.image);
    } else {
      hcr::save_pgm(path, sample.image);
    }
  }
  std::cout << "wrote " << ds.samples.size() << " images to " << out_dir << "\n";
  return 0;
}

int cmd_preprocess(const std::string& input, const std::string& out_skeleton,
                   const std::string& out_binary, bool light_foreground) {
  const hcr::GrayImage img = hcr::load_image(input);
  const hcr::Preprocessed prep = hcr::preprocess(
      img, light_foreground ? hcr::Polarity::LightForeground
                            : hcr::Polarity::DarkForeground);
  if (!out_skeleton.empty()) hcr::save_pgm(out_skeleton, prep.skeleton.image);
  if (!out_binary.empty()) hcr::save_pgm(out_binary, prep.binary);
  std::cout << "threshold: " << prep.threshold << "\n"
            << "crop: [" << prep.box.x0 << "," << prep.box.y0 << "]..[" << prep.box.x1
            << "," << prep.box.y1 << "] (" << prep.box.width() << "x"
            << prep.box.height() << ")\n"
            << "skeleton pixels: " << prep.skeleton.image.foreground_count()
            << ", endpoints: " << prep.skeleton.endpoints.size()
            << ", junctions: " << prep.skeleton.junctions.size() << "\n";
  return 0;
}

int cmd_extract(const std::string& input, const std::string& extractor,
                const std::string& out_file) {
  const hcr::GrayImage img = hcr::load_image(input);
  const hcr::Preprocessed prep = hcr::preprocess(img);
  const hcr::FeatureVector fv =
      hcr::extract(hcr::extractor_from_name(extractor), prep);

  if (out_file.empty()) {
    std::cout << format_values_csv(fv.values);
    return 0;
  }
  std::ofstream out(out_file);
  if (!out) throw hcr::DataError(out_file + ": cannot open file for writing");
  if (out_file.size() >= 5 && out_file.substr(out_file.size() - 5) == ".json") {
    json j;
    j["extractor"] = hcr::extractor_name(fv.extractor);
    json values = json::array();
    for (long i = 0; i < fv.values.size(); ++i) values.push_back(fv.values[i]);
    j["values"] = std::move(values);
    out << j.dump(2) << "\n";
  } else {
    out << format_values_csv(fv.values);
  }
  return 0;
}

int cmd_train(const hcr::ExperimentConfig& cfg, const std::string& extractor,
              const std::string& classifier) {
  const std::string out_dir = require_out_dir(cfg);
  const hcr::Extractor which = hcr::extractor_from_name(extractor);
  const hcr::ClassifierKind kind = hcr::classifier_from_name(classifier);
  const hcr::PreparedData data = hcr::prepare_data(cfg, which);
  for (const std::string& warning : data.warnings)
    std::cerr << "warning: " << warning << "\n";

  fs::create_directories(out_dir);
  const std::string model_path = (fs::path(out_dir) / "model.json").string();
  if (kind == hcr::ClassifierKind::Mdc) {
    const hcr::MdcModel model =
        hcr::fit_mdc(data.train_x, data.train_y, cfg.alphabet, extractor);
    hcr::save_mdc(model_path, model);
    std::cout << "wrote " << model_path << "\n";
    return 0;
  }

  const int classes = static_cast<int>(cfg.alphabet.size());
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(data.train_x.rows(), classes);
  for (std::size_t i = 0; i < data.train_y.size(); ++i)
    targets(static_cast<long>(i), data.train_y[i]) = 1.0;
  hcr::TrainConfig train_cfg = cfg.mlp;
  if (!cfg.mlp_seed_set) train_cfg.seed = cfg.seed;
  hcr::MlpModel model = hcr::init_mlp(
      {static_cast<int>(data.train_x.cols()), cfg.mlp_hidden, classes},
      train_cfg.seed);
  hcr::TrainTrace trace;
  if (kind == hcr::ClassifierKind::MlpBp) {
    std::tie(model, trace) = hcr::train_bp(std::move(model), data.train_x, targets,
                                           train_cfg);
  } else {
    std::tie(model, trace) = hcr::train_lm(std::move(model), data.train_x, targets,
                                           train_cfg);
  }
  hcr::save_mlp(model_path, model);
  const std::string trace_path = (fs::path(out_dir) / "trace.csv").string();
  std::ofstream trace_out(trace_path);
  if (!trace_out) throw hcr::DataError(trace_path + ": cannot open file for writing");
  trace_out << hcr::trace_to_csv(trace);
  std::cout << "wrote " << model_path << " and " << trace_path << "\n"
            << "final training mse: "
            << hcr::mse_loss(model, data.train_x, targets) << "\n";
  return 0;
}

int cmd_evaluate(const hcr::ExperimentConfig& cfg,
                 const std::vector<std::string>& chars) {
  const std::string out_dir = require_out_dir(cfg);
  const hcr::EvalReport report = hcr::run_experiment(cfg);

  std::vector<hcr::TableCell> cells = hcr::extractor_table(report);
  const std::vector<hcr::TableCell> per_char =
      hcr::per_character_table(report, resolve_chars(chars, report.alphabet));
  cells.insert(cells.end(), per_char.begin(), per_char.end());
  const std::vector<hcr::TableCell> networks = hcr::network_table(report);
  cells.insert(cells.end(), networks.begin(), networks.end());

  hcr::write_report_files(report, cells, out_dir);
  print_results(report);
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

int cmd_compare_extractors(const hcr::ExperimentConfig& cfg,
                           const std::vector<std::string>& chars) {
  const std::string out_dir = require_out_dir(cfg);
  const hcr::EvalReport report = hcr::compare_extractors(cfg);
  std::vector<hcr::TableCell> cells = hcr::extractor_table(report);
  const std::vector<hcr::TableCell> per_char =
      hcr::per_character_table(report, resolve_chars(chars, report.alphabet));
  cells.insert(cells.end(), per_char.begin(), per_char.end());
  hcr::write_report_files(report, cells, out_dir);
  print_results(report);
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

int cmd_compare_networks(const hcr::ExperimentConfig& cfg) {
  const std::string out_dir = require_out_dir(cfg);
  const hcr::EvalReport report = hcr::compare_networks(cfg);
  hcr::write_report_files(report, hcr::network_table(report), out_dir);
  print_results(report);
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"handwritten character recognition toolkit"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--config", global.config_path, "experiment configuration JSON");
  app.add_option("--seed", global.seed, "override the experiment seed");
  app.add_option("--out", global.out, "output directory");

  auto* gen = app.add_subcommand("gen-synthetic", "render a synthetic glyph dataset");
  std::string gen_format = "png";
  gen->add_option("--format", gen_format, "image format")
      ->check(CLI::IsMember({"png", "pgm"}));

  auto* prep = app.add_subcommand("preprocess", "binarize, thin, and crop one image");
  std::string prep_input, prep_out_skeleton, prep_out_binary;
  bool prep_light = false;
  prep->add_option("--input", prep_input, "input image")->required();
  prep->add_option("--out-skeleton", prep_out_skeleton, "cropped skeleton PGM");
  prep->add_option("--out-binary", prep_out_binary, "cropped binary mask PGM");
  prep->add_flag("--light-foreground", prep_light, "treat light pixels as ink");

  auto* extr = app.add_subcommand("extract", "extract features from one image");
  std::string extr_input, extr_extractor = "proposed", extr_out;
  extr->add_option("--input", extr_input, "input image")->required();
  extr->add_option("--extractor", extr_extractor,
                   "proposed|geometric|hybrid|gradient");
  extr->add_option("--out", extr_out, "output file (.csv or .json)");

  auto* train = app.add_subcommand("train", "train one classifier");
  std::string train_extractor = "proposed", train_classifier = "mdc";
  train->add_option("--extractor", train_extractor,
                    "proposed|geometric|hybrid|gradient");
  train->add_option("--classifier", train_classifier, "mdc|mlp_bp|mlp_lm");

  auto* eval = app.add_subcommand("evaluate", "run the configured experiment");
  std::vector<std::string> eval_chars;
  eval->add_option("--chars", eval_chars, "per-character table columns")
      ->delimiter(',');

  auto* cmp_ext = app.add_subcommand("compare-extractors",
                                     "all four extractors under the MDC");
  std::vector<std::string> cmp_chars;
  cmp_ext->add_option("--chars", cmp_chars, "per-character table columns")
      ->delimiter(',');

  auto* cmp_net = app.add_subcommand("compare-networks",
                                     "perceptron trainers per extractor");

  CLI11_PARSE(app, argc, argv);

  try {
    const hcr::ExperimentConfig cfg = load_config(global);
    if (gen->parsed()) return cmd_gen_synthetic(cfg, gen_format);
    if (prep->parsed())
      return cmd_preprocess(prep_input, prep_out_skeleton, prep_out_binary, prep_light);
    if (extr->parsed()) return cmd_extract(extr_input, extr_extractor, extr_out);
    if (train->parsed()) return cmd_train(cfg, train_extractor, train_classifier);
    if (eval->parsed()) return cmd_evaluate(cfg, eval_chars);
    if (cmp_ext->parsed()) return cmd_compare_extractors(cfg, cmp_chars);
    if (cmp_net->parsed()) return cmd_compare_networks(cfg);
    return 1;
  } catch (const hcr::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const hcr::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
