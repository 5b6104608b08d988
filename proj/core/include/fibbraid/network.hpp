// Copyright 2026 The fibbraid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Feed-forward cost-to-go approximator J(s).
//
// Layout (every "dense" is followed by batch normalization when
// use_batchnorm is set):
//
//   input -> dense(hidden1) -> leaky -> dense(hidden2) -> leaky
//         -> n_res_blocks x [ x + bn(dense(leaky(bn(dense(x))))) ]
//         -> dense(1)
//
// The residual add is not followed by an activation, so a block whose
// second dense layer is zero passes its input through unchanged. The
// output layer carries neither batch normalization nor activation.
//
// Activations are stored column-major as (features x batch).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fibbraid/su2.hpp"

namespace fibbraid {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Mode { Train, Eval };

struct NetworkSpec {
  int input_dim = 4;  // 4: canonical quaternion, 8: flattened SU(2) matrix
  int hidden1 = 512;
  int hidden2 = 256;
  int n_res_blocks = 2;
  int res_width = 256;
  double leaky_slope = 0.01;
  bool use_batchnorm = true;

  static NetworkSpec full_scale() { return {4, 5000, 1000, 6, 1000, 0.01, true}; }
  static NetworkSpec desk_scale() { return {4, 512, 256, 2, 256, 0.01, true}; }

  /// Throws SpecMismatch when dimensions are inconsistent.
  void validate() const;
  std::size_t parameter_count() const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// A named slice of the flat parameter (or running-statistics) vector.
/// Matrices are stored column-major with `rows x cols` shape.
struct TensorInfo {
  std::string name;
  std::size_t offset = 0;
  int rows = 0;
  int cols = 1;
  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

/// Encodes states as network inputs, (input_dim x batch).
Matrix encode_states(std::span<const UnitQuaternion> states, int input_dim);

class MLPNetwork;

/// Activations cached by a training-mode forward pass for backward().
struct ForwardPass {
  struct Stage {
    Matrix input;    // dense input
    Matrix xhat;     // normalized pre-activation (batch norm only)
    Vector inv_std;  // batch norm only
    Matrix pre_act;  // value fed to the activation
  };
  std::vector<Stage> stages;
  Vector output;
};

class MLPNetwork {
 public:
  /// Parameters are unset until initialize() or a checkpoint load.
  explicit MLPNetwork(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  bool initialized() const { return initialized_; }
  Mode mode() const { return mode_; }
  void set_mode(Mode m) { mode_ = m; }

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases, output
  /// layer scaled by 0.1, batch-norm scale 1 and shift 0.
  void initialize(std::uint64_t seed);

  std::size_t parameter_count() const { return static_cast<std::size_t>(params_.size()); }
  Vector& parameters() { return params_; }
  const Vector& parameters() const { return params_; }
  Vector& running_stats() { return stats_; }
  const Vector& running_stats() const { return stats_; }

  /// Replaces parameters and running statistics (sizes must match) and
  /// marks the network initialized. Throws ShapeMismatch.
  void load_state(Vector params, Vector stats);

  const std::vector<TensorInfo>& parameter_tensors() const { return param_tensors_; }
  const std::vector<TensorInfo>& stat_tensors() const { return stat_tensors_; }
  Eigen::Map<Matrix> tensor(const std::string& name);
  Eigen::Map<const Matrix> tensor(const std::string& name) const;

  /// J(s) for each state. In Eval mode batch norm uses running statistics
  /// and rows are independent; in Train mode it uses batch statistics
  /// without touching the running ones. Safe for concurrent callers.
  std::vector<double> forward(std::span<const UnitQuaternion> batch) const;
  Vector forward_inputs(const Matrix& inputs) const;

  /// Train-mode forward that records activations and updates running
  /// statistics (momentum kBatchNormMomentum).
  ForwardPass forward_train(const Matrix& inputs);

  /// Gradient of sum_i loss_grad[i] * J(input_i) with respect to the
  /// parameters, for the pass recorded by forward_train.
  Vector backward(const ForwardPass& pass, std::span<const double> loss_grad) const;

  static constexpr double kBatchNormMomentum = 0.99;
  static constexpr double kBatchNormEps = 1e-5;

 private:
  struct DenseSlot {
    std::size_t w = 0, b = 0;
    int in = 0, out = 0;
    std::size_t gamma = 0, beta = 0;      // parameters, if batch norm
    std::size_t mean = 0, var = 0;        // running statistics, if batch norm
    bool norm = false;
    bool activate = false;
  };

  void build_layout();
  Matrix stage_eval(const DenseSlot& s, const Matrix& x, bool batch_stats) const;
  void require_initialized() const;

  NetworkSpec spec_;
  Vector params_;
  Vector stats_;
  std::vector<DenseSlot> slots_;  // in forward order
  std::vector<TensorInfo> param_tensors_;
  std::vector<TensorInfo> stat_tensors_;
  Mode mode_ = Mode::Eval;
  bool initialized_ = false;
};

/// Copies parameters and running statistics. Throws SpecMismatch.
void copy_parameters(const MLPNetwork& src, MLPNetwork& dst);

class SgdOptimizer {
 public:
  explicit SgdOptimizer(double lr) : lr_(lr) {}
  void step(MLPNetwork& net, const Vector& grad);
  double lr() const { return lr_; }

 private:
  double lr_;
};

/// Adam with bias correction:
///   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,
///   p <- p - lr * m_hat / (sqrt(v_hat) + eps).
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double lr = 1e-4, double beta1 = 0.9, double beta2 = 0.999,
                         double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}
  void step(MLPNetwork& net, const Vector& grad);
  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  std::int64_t steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  Vector m_, v_;
  std::int64_t t_ = 0;
};

}  // namespace fibbraid
