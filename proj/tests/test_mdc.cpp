#include <cstdio>
#include <random>

#include "doctest.h"
#include "hcr/common.hpp"
#include "hcr/mdc.hpp"

using namespace hcr;

TEST_CASE("fit_mdc averages the samples of each class") {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 2, 2, 10, 0, 12, 4;
  const MdcModel model = fit_mdc(x, {0, 0, 1, 1}, {"A", "B"}, "proposed");
  REQUIRE(model.means.rows() == 2);
  CHECK(model.means(0, 0) == 1.0);
  CHECK(model.means(0, 1) == 1.0);
  CHECK(model.means(1, 0) == 11.0);
  CHECK(model.means(1, 1) == 2.0);
  CHECK(model.alphabet == std::vector<std::string>{"A", "B"});
  CHECK(model.extractor == "proposed");
}

TEST_CASE("predict_mdc picks the nearest mean and breaks ties low") {
  MdcModel model;
  model.alphabet = {"A", "B", "C"};
  model.means.resize(3, 1);
  model.means << -1.0, 1.0, 5.0;
  CHECK(predict_mdc(model, Eigen::VectorXd::Constant(1, -0.9)) == 0);
  CHECK(predict_mdc(model, Eigen::VectorXd::Constant(1, 2.9)) == 1);
  CHECK(predict_mdc(model, Eigen::VectorXd::Constant(1, 100.0)) == 2);
  // 0 is equidistant from -1 and 1: the lower class index wins.
  CHECK(predict_mdc(model, Eigen::VectorXd::Zero(1)) == 0);
}

TEST_CASE("predict_mdc matches a brute-force scan on random cases") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const int classes = uniform_int(rng, 2, 8);
    const int dim = uniform_int(rng, 1, 12);
    MdcModel model;
    model.means.resize(classes, dim);
    for (int c = 0; c < classes; ++c) {
      model.alphabet.push_back(std::string(1, static_cast<char>('A' + c)));
      for (int d = 0; d < dim; ++d) model.means(c, d) = uniform_real(rng, -3, 3);
    }
    for (int q = 0; q < 25; ++q) {
      Eigen::VectorXd x(dim);
      for (int d = 0; d < dim; ++d) x[d] = uniform_real(rng, -4, 4);
      int best = 0;
      double best_dist = (model.means.row(0).transpose() - x).squaredNorm();
      for (int c = 1; c < classes; ++c) {
        const double dist = (model.means.row(c).transpose() - x).squaredNorm();
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      CHECK(predict_mdc(model, x) == best);
    }
    model.alphabet.clear();
  }
}

TEST_CASE("fit_mdc requires a sample of every class") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 0, 1, 1;
  CHECK_THROWS_AS(fit_mdc(x, {0, 0}, {"A", "B"}, "proposed"), DataError);
}

TEST_CASE("mdc models survive a save/load round trip") {
  Eigen::MatrixXd x(3, 2);
  x << 0.25, -1.5, 3.125, 0.0625, -7.0, 2.0;
  const MdcModel model = fit_mdc(x, {0, 1, 1}, {"A", "B"}, "hybrid");

  const std::string path = "mdc_roundtrip_test.json";
  save_mdc(path, model);
  const MdcModel loaded = load_mdc(path);
  std::remove(path.c_str());

  CHECK(loaded.alphabet == model.alphabet);
  CHECK(loaded.extractor == model.extractor);
  CHECK(loaded.means == model.means);
}

TEST_CASE("load_mdc rejects malformed files") {
  CHECK_THROWS_AS(load_mdc("does_not_exist_anywhere.json"), DataError);
}
