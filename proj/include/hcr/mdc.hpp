#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hcr/features.hpp"

namespace hcr {

// Nearest-class-mean classifier under Euclidean distance.
struct MdcModel {
  Eigen::MatrixXd means;  // one row per class
  std::vector<std::string> alphabet;
  std::string extractor;
};

// Rows of features are samples; labels index the alphabet. Every class needs
// at least one sample.
MdcModel fit_mdc(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                 const std::vector<std::string>& alphabet,
                 const std::string& extractor);

MdcModel fit_mdc(const std::vector<std::pair<FeatureVector, int>>& train,
                 const std::vector<std::string>& alphabet);

// Argmin of distance to the class means; ties break to the lowest class
// index. Squared distances compare identically, so no square roots are taken.
int predict_mdc(const MdcModel& model, const Eigen::VectorXd& x);

void save_mdc(const std::string& path, const MdcModel& model);
MdcModel load_mdc(const std::string& path);

}  // namespace hcr
