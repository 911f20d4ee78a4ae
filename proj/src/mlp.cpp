#include "hcr/mlp.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hcr/common.hpp"

namespace hcr {

namespace {

double apply_one(Activation a, double z) {
  switch (a) {
    case Activation::Tanh: return std::tanh(z);
    case Activation::Logistic: return 1.0 / (1.0 + std::exp(-z));
    case Activation::Identity: return z;
  }
  return z;
}

// Derivative with respect to the pre-activation, given the activation value.
double derivative_one(Activation a, double y) {
  switch (a) {
    case Activation::Tanh: return 1.0 - y * y;
    case Activation::Logistic: return y * (1.0 - y);
    case Activation::Identity: return 1.0;
  }
  return 1.0;
}

Eigen::MatrixXd apply(Activation a, Eigen::MatrixXd z) {
  return z.unaryExpr([a](double v) { return apply_one(a, v); });
}

Eigen::MatrixXd derivative(Activation a, const Eigen::MatrixXd& y) {
  return y.unaryExpr([a](double v) { return derivative_one(a, v); });
}

void check_model(const MlpModel& m) {
  const auto [in, hidden, out] = m.layer_sizes;
  if (in < 1 || hidden < 1 || out < 1)
    throw std::invalid_argument("mlp: layer sizes must be positive");
  if (m.w1.rows() != hidden || m.w1.cols() != in || m.b1.size() != hidden ||
      m.w2.rows() != out || m.w2.cols() != hidden || m.b2.size() != out)
    throw std::invalid_argument("mlp: parameter shapes do not match layer_sizes");
}

void check_dataset(const MlpModel& m, const Eigen::MatrixXd& inputs,
                   const Eigen::MatrixXd& targets) {
  if (inputs.rows() == 0) throw std::invalid_argument("mlp: empty dataset");
  if (inputs.cols() != m.layer_sizes[0] || targets.cols() != m.layer_sizes[2] ||
      inputs.rows() != targets.rows())
    throw std::invalid_argument("mlp: dataset dimensions do not match the model");
}

bool all_finite(const MlpModel& m) {
  return m.w1.allFinite() && m.b1.allFinite() && m.w2.allFinite() && m.b2.allFinite();
}

struct BatchForward {
  Eigen::MatrixXd a1;  // N x hidden
  Eigen::MatrixXd y;   // N x out
};

BatchForward forward_pass(const MlpModel& m, const Eigen::MatrixXd& inputs) {
  BatchForward f;
  f.a1 = apply(m.hidden_activation,
               (inputs * m.w1.transpose()).rowwise() + m.b1.transpose());
  f.y = apply(m.output_activation,
              (f.a1 * m.w2.transpose()).rowwise() + m.b2.transpose());
  return f;
}

int param_count(const MlpModel& m) {
  const auto [in, hidden, out] = m.layer_sizes;
  return hidden * in + hidden + out * hidden + out;
}

// Parameter pack order: w1 row-major, b1, w2 row-major, b2.
Eigen::VectorXd pack(const MlpModel& m) {
  Eigen::VectorXd p(param_count(m));
  long k = 0;
  for (long r = 0; r < m.w1.rows(); ++r)
    for (long c = 0; c < m.w1.cols(); ++c) p[k++] = m.w1(r, c);
  for (long r = 0; r < m.b1.size(); ++r) p[k++] = m.b1[r];
  for (long r = 0; r < m.w2.rows(); ++r)
    for (long c = 0; c < m.w2.cols(); ++c) p[k++] = m.w2(r, c);
  for (long r = 0; r < m.b2.size(); ++r) p[k++] = m.b2[r];
  return p;
}

void unpack(const Eigen::VectorXd& p, MlpModel& m) {
  long k = 0;
  for (long r = 0; r < m.w1.rows(); ++r)
    for (long c = 0; c < m.w1.cols(); ++c) m.w1(r, c) = p[k++];
  for (long r = 0; r < m.b1.size(); ++r) m.b1[r] = p[k++];
  for (long r = 0; r < m.w2.rows(); ++r)
    for (long c = 0; c < m.w2.cols(); ++c) m.w2(r, c) = p[k++];
  for (long r = 0; r < m.b2.size(); ++r) m.b2[r] = p[k++];
}

// Residuals (output - target) stacked sample-major, plus the R x P Jacobian.
struct Residuals {
  Eigen::VectorXd r;
  Eigen::MatrixXd jacobian;
};

Residuals residuals_and_jacobian(const MlpModel& m, const Eigen::MatrixXd& inputs,
                                 const Eigen::MatrixXd& targets) {
  const auto [in, hidden, out] = m.layer_sizes;
  const long n = inputs.rows();
  const int p_count = param_count(m);
  const BatchForward f = forward_pass(m, inputs);

  Residuals res;
  res.r.resize(n * out);
  res.jacobian = Eigen::MatrixXd::Zero(n * out, p_count);
  const int off_w1 = 0;
  const int off_b1 = hidden * in;
  const int off_w2 = off_b1 + hidden;
  const int off_b2 = off_w2 + out * hidden;

  for (long i = 0; i < n; ++i) {
    const Eigen::VectorXd x = inputs.row(i).transpose();
    const Eigen::VectorXd a1 = f.a1.row(i).transpose();
    const Eigen::VectorXd da1 = derivative(m.hidden_activation, a1);
    for (int k = 0; k < out; ++k) {
      const long row = i * out + k;
      const double yk = f.y(i, k);
      res.r[row] = yk - targets(i, k);
      const double gk = derivative_one(m.output_activation, yk);
      for (int j = 0; j < hidden; ++j) {
        res.jacobian(row, off_w2 + k * hidden + j) = gk * a1[j];
        const double back = gk * m.w2(k, j) * da1[j];
        res.jacobian(row, off_b1 + j) = back;
        for (int c = 0; c < in; ++c) res.jacobian(row, off_w1 + j * in + c) = back * x[c];
      }
      res.jacobian(row, off_b2 + k) = gk;
    }
  }
  return res;
}

void check_train_common(const TrainConfig& cfg) {
  if (cfg.target_mse <= 0.0)
    throw std::invalid_argument("train: target_mse must be positive");
}

}  // namespace

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Logistic: return "logistic";
    case Activation::Identity: return "identity";
  }
  return "?";
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "logistic") return Activation::Logistic;
  if (name == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation: " + name);
}

std::string trace_to_csv(const TrainTrace& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,mse,mu,accepted\n";
  for (const TraceEntry& e : trace.entries) {
    out << e.iteration << "," << e.mse << ",";
    if (e.mu > 0.0) out << e.mu;
    out << "," << (e.accepted ? "true" : "false") << "\n";
  }
  return out.str();
}

MlpModel init_mlp(const std::array<int, 3>& layer_sizes, std::uint64_t seed) {
  const auto [in, hidden, out] = layer_sizes;
  if (in < 1 || hidden < 1 || out < 1)
    throw std::invalid_argument("init_mlp: layer sizes must be positive");
  MlpModel m;
  m.layer_sizes = layer_sizes;
  m.w1.resize(hidden, in);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.w2.resize(out, hidden);
  m.b2 = Eigen::VectorXd::Zero(out);

  std::mt19937_64 rng(seed);
  const double r1 = 1.0 / std::sqrt(static_cast<double>(in));
  for (int r = 0; r < hidden; ++r)
    for (int c = 0; c < in; ++c) m.w1(r, c) = uniform_real(rng, -r1, r1);
  const double r2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (int r = 0; r < out; ++r)
    for (int c = 0; c < hidden; ++c) m.w2(r, c) = uniform_real(rng, -r2, r2);
  return m;
}

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& x) {
  check_model(model);
  if (x.size() != model.layer_sizes[0])
    throw std::invalid_argument("forward: input dimension mismatch");
  const Eigen::VectorXd a1 =
      (model.w1 * x + model.b1)
          .unaryExpr([&model](double v) { return apply_one(model.hidden_activation, v); });
  return (model.w2 * a1 + model.b2).unaryExpr([&model](double v) {
    return apply_one(model.output_activation, v);
  });
}

Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  check_model(model);
  if (inputs.cols() != model.layer_sizes[0])
    throw std::invalid_argument("forward_batch: input dimension mismatch");
  return forward_pass(model, inputs).y;
}

double mse_loss(const MlpModel& model, const Eigen::MatrixXd& inputs,
                const Eigen::MatrixXd& targets) {
  check_model(model);
  check_dataset(model, inputs, targets);
  return (forward_pass(model, inputs).y - targets).squaredNorm() /
         static_cast<double>(inputs.rows() * targets.cols());
}

MlpGradient backprop_gradient(const MlpModel& model, const Eigen::MatrixXd& inputs,
                              const Eigen::MatrixXd& targets) {
  check_model(model);
  check_dataset(model, inputs, targets);
  const BatchForward f = forward_pass(model, inputs);
  const double scale = 2.0 / static_cast<double>(inputs.rows() * targets.cols());

  const Eigen::MatrixXd d2 =
      ((f.y - targets).array() * derivative(model.output_activation, f.y).array())
          .matrix() *
      scale;
  const Eigen::MatrixXd d1 =
      ((d2 * model.w2).array() * derivative(model.hidden_activation, f.a1).array())
          .matrix();

  MlpGradient g;
  g.w2 = d2.transpose() * f.a1;
  g.b2 = d2.colwise().sum().transpose();
  g.w1 = d1.transpose() * inputs;
  g.b1 = d1.colwise().sum().transpose();
  return g;
}

std::pair<MlpModel, TrainTrace> train_bp(MlpModel model, const Eigen::MatrixXd& inputs,
                                         const Eigen::MatrixXd& targets,
                                         const TrainConfig& cfg) {
  check_model(model);
  check_dataset(model, inputs, targets);
  check_train_common(cfg);
  if (cfg.learning_rate < 0.0)
    throw std::invalid_argument("train_bp: learning_rate must be non-negative");
  if (cfg.max_epochs < 0) throw std::invalid_argument("train_bp: negative max_epochs");

  TrainTrace trace;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (mse_loss(model, inputs, targets) <= cfg.target_mse) break;
    const MlpGradient g = backprop_gradient(model, inputs, targets);
    model.w1 -= cfg.learning_rate * g.w1;
    model.b1 -= cfg.learning_rate * g.b1;
    model.w2 -= cfg.learning_rate * g.w2;
    model.b2 -= cfg.learning_rate * g.b2;
    if (!all_finite(model))
      throw NumericalError("train_bp: parameters diverged to non-finite values");
    trace.entries.push_back({epoch, mse_loss(model, inputs, targets), 0.0, true});
  }
  return {std::move(model), std::move(trace)};
}

std::pair<MlpModel, TrainTrace> train_lm(MlpModel model, const Eigen::MatrixXd& inputs,
                                         const Eigen::MatrixXd& targets,
                                         const TrainConfig& cfg) {
  check_model(model);
  check_dataset(model, inputs, targets);
  check_train_common(cfg);
  if (cfg.mu0 <= 0.0 || cfg.mu_factor <= 1.0 || cfg.mu_max <= 0.0)
    throw std::invalid_argument("train_lm: invalid damping configuration");
  if (cfg.max_iterations < 0)
    throw std::invalid_argument("train_lm: negative max_iterations");

  const double denom = static_cast<double>(inputs.rows() * targets.cols());
  TrainTrace trace;

  Residuals res = residuals_and_jacobian(model, inputs, targets);
  double sse = res.r.squaredNorm();
  double mu = cfg.mu0;
  bool fresh = true;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    if (sse / denom <= cfg.target_mse) break;
    const Eigen::VectorXd jtr = res.jacobian.transpose() * res.r;
    if (fresh && jtr.norm() < 1e-8) break;

    Eigen::MatrixXd normal = res.jacobian.transpose() * res.jacobian;
    normal.diagonal().array() += mu;
    const Eigen::LDLT<Eigen::MatrixXd> solver(normal);
    Eigen::VectorXd delta;
    bool solved = solver.info() == Eigen::Success;
    if (solved) {
      delta = solver.solve(-jtr);
      solved = delta.allFinite();
    }
    if (!solved) {
      trace.entries.push_back({iter, sse / denom, mu, false});
      mu *= cfg.mu_factor;
      fresh = false;
      if (mu > cfg.mu_max)
        throw NumericalError("train_lm: system singular at maximum damping");
      continue;
    }

    MlpModel trial = model;
    Eigen::VectorXd params = pack(model);
    params += delta;
    unpack(params, trial);
    const double trial_sse =
        (forward_pass(trial, inputs).y - targets).squaredNorm();

    if (trial_sse < sse && std::isfinite(trial_sse)) {
      model = std::move(trial);
      if (!all_finite(model))
        throw NumericalError("train_lm: parameters became non-finite");
      sse = trial_sse;
      trace.entries.push_back({iter, sse / denom, mu, true});
      mu /= cfg.mu_factor;
      res = residuals_and_jacobian(model, inputs, targets);
      fresh = true;
    } else {
      trace.entries.push_back({iter, sse / denom, mu, false});
      mu *= cfg.mu_factor;
      fresh = false;
      if (mu > cfg.mu_max) break;
    }
  }
  return {std::move(model), std::move(trace)};
}

int predict_mlp(const MlpModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd y = forward(model, x);
  int best = 0;
  for (int k = 1; k < y.size(); ++k)
    if (y[k] > y[best]) best = k;
  return best;
}

void save_mlp(const std::string& path, const MlpModel& model) {
  check_model(model);
  auto matrix_rows = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (long r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  auto vector_values = [](const Eigen::VectorXd& v) {
    nlohmann::json vals = nlohmann::json::array();
    for (long i = 0; i < v.size(); ++i) vals.push_back(v[i]);
    return vals;
  };
  nlohmann::json j;
  j["layer_sizes"] = model.layer_sizes;
  j["weights"] = nlohmann::json::array({matrix_rows(model.w1), matrix_rows(model.w2)});
  j["biases"] = nlohmann::json::array({vector_values(model.b1), vector_values(model.b2)});
  j["activations"] = nlohmann::json::array({activation_name(model.hidden_activation),
                                            activation_name(model.output_activation)});
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open file for writing");
  out << j.dump(2) << "\n";
}

MlpModel load_mlp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
    MlpModel m;
    const auto sizes = j.at("layer_sizes").get<std::vector<int>>();
    if (sizes.size() != 3) throw DataError(path + ": layer_sizes must have 3 entries");
    m.layer_sizes = {sizes[0], sizes[1], sizes[2]};
    auto read_matrix = [&path](const nlohmann::json& rows, long nr, long nc) {
      Eigen::MatrixXd out(nr, nc);
      if (static_cast<long>(rows.size()) != nr)
        throw DataError(path + ": weight matrix shape mismatch");
      for (long r = 0; r < nr; ++r) {
        const auto& row = rows.at(r);
        if (static_cast<long>(row.size()) != nc)
          throw DataError(path + ": weight matrix shape mismatch");
        for (long c = 0; c < nc; ++c) out(r, c) = row.at(c).get<double>();
      }
      return out;
    };
    auto read_vector = [&path](const nlohmann::json& vals, long n) {
      Eigen::VectorXd out(n);
      if (static_cast<long>(vals.size()) != n)
        throw DataError(path + ": bias vector shape mismatch");
      for (long i = 0; i < n; ++i) out[i] = vals.at(i).get<double>();
      return out;
    };
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    m.w1 = read_matrix(weights.at(0), m.layer_sizes[1], m.layer_sizes[0]);
    m.w2 = read_matrix(weights.at(1), m.layer_sizes[2], m.layer_sizes[1]);
    m.b1 = read_vector(biases.at(0), m.layer_sizes[1]);
    m.b2 = read_vector(biases.at(1), m.layer_sizes[2]);
    const auto& acts = j.at("activations");
    m.hidden_activation = activation_from_name(acts.at(0).get<std::string>());
    m.output_activation = activation_from_name(acts.at(1).get<std::string>());
    check_model(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": malformed model file (" + e.what() + ")");
  }
}

}  // namespace hcr
