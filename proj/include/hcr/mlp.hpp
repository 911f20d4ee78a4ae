#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hcr {

enum class Activation { Tanh, Logistic, Identity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Three-layer perceptron. Defaults follow the recognition setup (tanh hidden,
// logistic output); Identity exists for linear test instances.
struct MlpModel {
  std::array<int, 3> layer_sizes{0, 0, 0};  // in, hidden, out
  Eigen::MatrixXd w1;                       // hidden x in
  Eigen::VectorXd b1;                       // hidden
  Eigen::MatrixXd w2;                       // out x hidden
  Eigen::VectorXd b2;                       // out
  Activation hidden_activation = Activation::Tanh;
  Activation output_activation = Activation::Logistic;
};

struct TrainConfig {
  std::uint64_t seed = 0;
  double learning_rate = 0.05;  // BP step size, >= 0
  int max_epochs = 2000;        // BP
  double target_mse = 1e-4;
  double mu0 = 1e-3;            // LM initial damping, > 0
  double mu_factor = 10.0;      // LM damping ratio, > 1
  double mu_max = 1e10;
  int max_iterations = 200;     // LM
};

struct TraceEntry {
  int iteration = 0;
  double mse = 0.0;
  double mu = 0.0;       // damping used for the attempt; 0 for BP rows
  bool accepted = true;  // BP epochs always apply
};

struct TrainTrace {
  std::vector<TraceEntry> entries;
};

// CSV with header iteration,mse,mu,accepted; the mu cell is empty on BP rows.
std::string trace_to_csv(const TrainTrace& trace);

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero,
// deterministic per seed.
MlpModel init_mlp(const std::array<int, 3>& layer_sizes, std::uint64_t seed);

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& x);

// Rows are samples.
Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs);

// Mean over samples and output units of squared error.
double mse_loss(const MlpModel& model, const Eigen::MatrixXd& inputs,
                const Eigen::MatrixXd& targets);

struct MlpGradient {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

// Exact reverse-mode gradient of mse_loss.
MlpGradient backprop_gradient(const MlpModel& model, const Eigen::MatrixXd& inputs,
                              const Eigen::MatrixXd& targets);

// Full-batch gradient descent until max_epochs or target_mse.
std::pair<MlpModel, TrainTrace> train_bp(MlpModel model, const Eigen::MatrixXd& inputs,
                                         const Eigen::MatrixXd& targets,
                                         const TrainConfig& cfg);

// Damped Gauss-Newton on the stacked residuals: solves (J'J + mu I) d = -J'r,
// accepts steps that reduce the sum of squares, adapting mu by mu_factor.
// Stops on target_mse, gradient norm < 1e-8, mu > mu_max, or max_iterations.
// Throws NumericalError if the system stays singular at maximum damping.
std::pair<MlpModel, TrainTrace> train_lm(MlpModel model, const Eigen::MatrixXd& inputs,
                                         const Eigen::MatrixXd& targets,
                                         const TrainConfig& cfg);

// Argmax output unit; ties break to the lowest index.
int predict_mlp(const MlpModel& model, const Eigen::VectorXd& x);

void save_mlp(const std::string& path, const MlpModel& model);
MlpModel load_mlp(const std::string& path);

}  // namespace hcr
