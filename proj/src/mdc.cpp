#include "hcr/mdc.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "hcr/common.hpp"

namespace hcr {

MdcModel fit_mdc(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                 const std::vector<std::string>& alphabet,
                 const std::string& extractor) {
  const int classes = static_cast<int>(alphabet.size());
  if (classes == 0) throw std::invalid_argument("fit_mdc: empty alphabet");
  if (features.rows() != static_cast<long>(labels.size()))
    throw std::invalid_argument("fit_mdc: feature/label count mismatch");

  MdcModel model;
  model.alphabet = alphabet;
  model.extractor = extractor;
  model.means = Eigen::MatrixXd::Zero(classes, features.cols());
  std::vector<int> counts(classes, 0);
  for (long i = 0; i < features.rows(); ++i) {
    const int label = labels[i];
    if (label < 0 || label >= classes)
      throw std::invalid_argument("fit_mdc: label out of range");
    model.means.row(label) += features.row(i);
    ++counts[label];
  }
  for (int c = 0; c < classes; ++c) {
    if (counts[c] == 0)
      throw DataError("fit_mdc: no training samples for class " + alphabet[c]);
    model.means.row(c) /= counts[c];
  }
  return model;
}

MdcModel fit_mdc(const std::vector<std::pair<FeatureVector, int>>& train,
                 const std::vector<std::string>& alphabet) {
  if (train.empty()) throw std::invalid_argument("fit_mdc: empty training set");
  const long dim = train.front().first.values.size();
  Eigen::MatrixXd features(static_cast<long>(train.size()), dim);
  std::vector<int> labels(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].first.values.size() != dim)
      throw std::invalid_argument("fit_mdc: inconsistent feature dimensions");
    features.row(static_cast<long>(i)) = train[i].first.values.transpose();
    labels[i] = train[i].second;
  }
  return fit_mdc(features, labels, alphabet,
                 extractor_name(train.front().first.extractor));
}

int predict_mdc(const MdcModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.means.cols())
    throw std::invalid_argument("predict_mdc: feature dimension mismatch");
  int best = 0;
  double best_d2 = (model.means.row(0).transpose() - x).squaredNorm();
  for (int c = 1; c < model.means.rows(); ++c) {
    const double d2 = (model.means.row(c).transpose() - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  }
  return best;
}

void save_mdc(const std::string& path, const MdcModel& model) {
  nlohmann::json j;
  j["alphabet"] = model.alphabet;
  j["extractor"] = model.extractor;
  auto& means = j["means"] = nlohmann::json::array();
  for (long c = 0; c < model.means.rows(); ++c) {
    nlohmann::json row = nlohmann::json::array();
    for (long k = 0; k < model.means.cols(); ++k) row.push_back(model.means(c, k));
    means.push_back(std::move(row));
  }
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open file for writing");
  out << j.dump(2) << "\n";
}

MdcModel load_mdc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
    MdcModel model;
    model.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    model.extractor = j.at("extractor").get<std::string>();
    const auto& means = j.at("means");
    const long rows = static_cast<long>(means.size());
    const long cols = rows ? static_cast<long>(means.at(0).size()) : 0;
    if (rows != static_cast<long>(model.alphabet.size()))
      throw DataError(path + ": class count does not match the alphabet");
    model.means.resize(rows, cols);
    for (long c = 0; c < rows; ++c) {
      const auto& row = means.at(c);
      if (static_cast<long>(row.size()) != cols)
        throw DataError(path + ": ragged means matrix");
      for (long k = 0; k < cols; ++k) model.means(c, k) = row.at(k).get<double>();
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": malformed model file (" + e.what() + ")");
  }
}

}  // namespace hcr
