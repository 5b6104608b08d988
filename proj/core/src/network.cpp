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

#include "fibbraid/network.hpp"

#include <cmath>
#include <random>

#include "fibbraid/errors.hpp"

namespace fibbraid {

namespace {

std::size_t dense_count(int in, int out) { return static_cast<std::size_t>(in) * out + out; }

}  // namespace

void NetworkSpec::validate() const {
  if (input_dim != 4 && input_dim != 8) throw SpecMismatch("input_dim must be 4 or 8");
  if (hidden1 <= 0 || hidden2 <= 0 || res_width <= 0) throw SpecMismatch("layer widths must be positive");
  if (n_res_blocks < 0) throw SpecMismatch("n_res_blocks must be nonnegative");
  if (n_res_blocks > 0 && res_width != hidden2) {
    throw SpecMismatch("res_width must equal hidden2 for the residual add");
  }
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) throw SpecMismatch("leaky_slope must lie in (0, 1)");
}

std::size_t NetworkSpec::parameter_count() const {
  const std::size_t bn = use_batchnorm ? 2 : 0;
  std::size_t n = dense_count(input_dim, hidden1) + bn * hidden1;
  n += dense_count(hidden1, hidden2) + bn * hidden2;
  n += static_cast<std::size_t>(n_res_blocks) * 2 * (dense_count(res_width, res_width) + bn * res_width);
  n += dense_count(hidden2, 1);
  return n;
}

Matrix encode_states(std::span<const UnitQuaternion> states, int input_dim) {
  Matrix x(input_dim, static_cast<Eigen::Index>(states.size()));
  for (std::size_t j = 0; j < states.size(); ++j) {
    const Quat& q = states[j].raw();
    if (input_dim == 4) {
      x.col(j) << q.w, q.x, q.y, q.z;
    } else {
      const Matrix2 m = quat_to_su2(q);
      x.col(j) << m(0, 0).real(), m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag(),
                  m(1, 0).real(), m(1, 0).imag(), m(1, 1).real(), m(1, 1).imag();
    }
  }
  return x;
}

MLPNetwork::MLPNetwork(NetworkSpec spec) : spec_(spec) {
  spec_.validate();
  build_layout();
}

void MLPNetwork::build_layout() {
  std::size_t p = 0, s = 0;
  auto add_param = [&](const std::string& name, int rows, int cols) {
    param_tensors_.push_back({name, p, rows, cols});
    p += static_cast<std::size_t>(rows) * cols;
    return param_tensors_.back().offset;
  };
  auto add_stat = [&](const std::string& name, int rows) {
    stat_tensors_.push_back({name, s, rows, 1});
    s += rows;
    return stat_tensors_.back().offset;
  };
  auto add_slot = [&](const std::string& dense, const std::string& norm, int in, int out,
                      bool use_norm, bool activate) {
    DenseSlot slot;
    slot.in = in;
    slot.out = out;
    slot.w = add_param(dense + ".weight", out, in);
    slot.b = add_param(dense + ".bias", out, 1);
    slot.norm = use_norm;
    slot.activate = activate;
    if (use_norm) {
      slot.gamma = add_param(norm + ".gamma", out, 1);
      slot.beta = add_param(norm + ".beta", out, 1);
      slot.mean = add_stat(norm + ".running_mean", out);
      slot.var = add_stat(norm + ".running_var", out);
    }
    slots_.push_back(slot);
  };

  const bool bn = spec_.use_batchnorm;
  add_slot("fc1", "bn1", spec_.input_dim, spec_.hidden1, bn, true);
  add_slot("fc2", "bn2", spec_.hidden1, spec_.hidden2, bn, true);
  for (int k = 0; k < spec_.n_res_blocks; ++k) {
    const std::string prefix = "res" + std::to_string(k);
    add_slot(prefix + ".fc_a", prefix + ".bn_a", spec_.res_width, spec_.res_width, bn, true);
    add_slot(prefix + ".fc_b", prefix + ".bn_b", spec_.res_width, spec_.res_width, bn, false);
  }
  add_slot("out", "", spec_.hidden2, 1, false, false);

  params_ = Vector::Zero(static_cast<Eigen::Index>(p));
  stats_ = Vector::Zero(static_cast<Eigen::Index>(s));
}

void MLPNetwork::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const DenseSlot& slot = slots_[i];
    const double bound = 1.0 / std::sqrt(static_cast<double>(slot.in));
    const double scale = (i + 1 == slots_.size()) ? 0.1 : 1.0;
    std::uniform_real_distribution<double> uni(-bound, bound);
    for (std::size_t k = 0; k < static_cast<std::size_t>(slot.in) * slot.out; ++k) {
      params_[slot.w + k] = scale * uni(rng);
    }
    for (int k = 0; k < slot.out; ++k) params_[slot.b + k] = scale * uni(rng);
    if (slot.norm) {
      params_.segment(slot.gamma, slot.out).setOnes();
      params_.segment(slot.beta, slot.out).setZero();
      stats_.segment(slot.mean, slot.out).setZero();
      stats_.segment(slot.var, slot.out).setOnes();
    }
  }
  initialized_ = true;
}

void MLPNetwork::load_state(Vector params, Vector stats) {
  if (params.size() != params_.size() || stats.size() != stats_.size()) {
    throw ShapeMismatch("load_state: size mismatch");
  }
  params_ = std::move(params);
  stats_ = std::move(stats);
  initialized_ = true;
}

Eigen::Map<Matrix> MLPNetwork::tensor(const std::string& name) {
  for (const auto& t : param_tensors_) {
    if (t.name == name) return {params_.data() + t.offset, t.rows, t.cols};
  }
  for (const auto& t : stat_tensors_) {
    if (t.name == name) return {stats_.data() + t.offset, t.rows, t.cols};
  }
  throw std::out_of_range("no tensor named '" + name + "'");
}

Eigen::Map<const Matrix> MLPNetwork::tensor(const std::string& name) const {
  auto m = const_cast<MLPNetwork*>(this)->tensor(name);
  return {m.data(), m.rows(), m.cols()};
}

void MLPNetwork::require_initialized() const {
  if (!initialized_) throw UninitializedNetwork("network parameters are unset");
}

Matrix MLPNetwork::stage_eval(const DenseSlot& s, const Matrix& x, bool batch_stats) const {
  Eigen::Map<const Matrix> w(params_.data() + s.w, s.out, s.in);
  Eigen::Map<const Vector> b(params_.data() + s.b, s.out);
  Matrix z = w * x;
  z.colwise() += b;
  if (s.norm) {
    Eigen::Map<const Vector> gamma(params_.data() + s.gamma, s.out);
    Eigen::Map<const Vector> beta(params_.data() + s.beta, s.out);
    Vector mean, var;
    if (batch_stats) {
      mean = z.rowwise().mean();
      var = (z.colwise() - mean).array().square().rowwise().mean();
    } else {
      mean = stats_.segment(s.mean, s.out);
      var = stats_.segment(s.var, s.out);
    }
    const Vector scale = gamma.array() / (var.array() + kBatchNormEps).sqrt();
    z = ((z.colwise() - mean).array().colwise() * scale.array()).matrix();
    z.colwise() += beta;
  }
  if (s.activate) z = z.array().max(spec_.leaky_slope * z.array()).matrix();
  return z;
}

Vector MLPNetwork::forward_inputs(const Matrix& inputs) const {
  require_initialized();
  if (inputs.rows() != spec_.input_dim) throw ShapeMismatch("input rows != input_dim");
  if (inputs.cols() == 0) throw ShapeMismatch("empty batch");
  const bool batch_stats = mode_ == Mode::Train;
  Matrix x = stage_eval(slots_[0], inputs, batch_stats);
  x = stage_eval(slots_[1], x, batch_stats);
  for (int k = 0; k < spec_.n_res_blocks; ++k) {
    const Matrix h = stage_eval(slots_[2 + 2 * k], x, batch_stats);
    x += stage_eval(slots_[3 + 2 * k], h, batch_stats);
  }
  return stage_eval(slots_.back(), x, batch_stats).row(0).transpose();
}

std::vector<double> MLPNetwork::forward(std::span<const UnitQuaternion> batch) const {
  const Vector out = forward_inputs(encode_states(batch, spec_.input_dim));
  return {out.data(), out.data() + out.size()};
}

ForwardPass MLPNetwork::forward_train(const Matrix& inputs) {
  require_initialized();
  if (inputs.rows() != spec_.input_dim) throw ShapeMismatch("input rows != input_dim");
  const Eigen::Index batch = inputs.cols();
  if (batch == 0) throw ShapeMismatch("empty batch");

  ForwardPass pass;
  pass.stages.resize(slots_.size());
  auto run = [&](std::size_t i, const Matrix& x) -> Matrix {
    const DenseSlot& s = slots_[i];
    auto& st = pass.stages[i];
    st.input = x;
    Eigen::Map<const Matrix> w(params_.data() + s.w, s.out, s.in);
    Eigen::Map<const Vector> b(params_.data() + s.b, s.out);
    Matrix z = w * x;
    z.colwise() += b;
    if (s.norm) {
      const Vector mean = z.rowwise().mean();
      z.colwise() -= mean;
      const Vector var = z.array().square().rowwise().mean();
      st.inv_std = (var.array() + kBatchNormEps).rsqrt();
      st.xhat = (z.array().colwise() * st.inv_std.array()).matrix();
      Eigen::Map<const Vector> gamma(params_.data() + s.gamma, s.out);
      Eigen::Map<const Vector> beta(params_.data() + s.beta, s.out);
      z = (st.xhat.array().colwise() * gamma.array()).matrix();
      z.colwise() += beta;

      auto rm = stats_.segment(s.mean, s.out);
      auto rv = stats_.segment(s.var, s.out);
      rm = kBatchNormMomentum * rm + (1.0 - kBatchNormMomentum) * mean;
      if (batch > 1) {
        const double unbias = static_cast<double>(batch) / static_cast<double>(batch - 1);
        rv = kBatchNormMomentum * rv + (1.0 - kBatchNormMomentum) * unbias * var;
      }
    }
    st.pre_act = z;
    if (s.activate) z = z.array().max(spec_.leaky_slope * z.array()).matrix();
    return z;
  };

  Matrix x = run(0, inputs);
  x = run(1, x);
  for (int k = 0; k < spec_.n_res_blocks; ++k) {
    const Matrix h = run(2 + 2 * k, x);
    x += run(3 + 2 * k, h);
  }
  pass.output = run(slots_.size() - 1, x).row(0).transpose();
  return pass;
}

Vector MLPNetwork::backward(const ForwardPass& pass, std::span<const double> loss_grad) const {
  require_initialized();
  if (pass.stages.size() != slots_.size()) throw ShapeMismatch("forward pass from another network");
  const Eigen::Index batch = pass.output.size();
  if (static_cast<Eigen::Index>(loss_grad.size()) != batch) {
    throw ShapeMismatch("loss gradient length != batch size");
  }
  Vector grad = Vector::Zero(params_.size());

  // Returns d(loss)/d(stage input) given d(loss)/d(stage output).
  auto back = [&](std::size_t i, Matrix d) -> Matrix {
    const DenseSlot& s = slots_[i];
    const auto& st = pass.stages[i];
    if (s.activate) {
      d = (st.pre_act.array() > 0.0).select(d.array(), spec_.leaky_slope * d.array()).matrix();
    }
    if (s.norm) {
      Eigen::Map<const Vector> gamma(params_.data() + s.gamma, s.out);
      grad.segment(s.gamma, s.out) += (d.array() * st.xhat.array()).rowwise().sum().matrix();
      grad.segment(s.beta, s.out) += d.rowwise().sum();
      const Matrix dxhat = (d.array().colwise() * gamma.array()).matrix();
      const Vector sum_dxhat = dxhat.rowwise().sum();
      const Vector sum_dxhat_xhat = (dxhat.array() * st.xhat.array()).rowwise().sum();
      const double n = static_cast<double>(batch);
      Matrix dz = (dxhat * n).colwise() - sum_dxhat;
      dz -= (st.xhat.array().colwise() * sum_dxhat_xhat.array()).matrix();
      d = (dz.array().colwise() * (st.inv_std.array() / n)).matrix();
    }
    Eigen::Map<Matrix> gw(grad.data() + s.w, s.out, s.in);
    gw.noalias() += d * st.input.transpose();
    grad.segment(s.b, s.out) += d.rowwise().sum();
    Eigen::Map<const Matrix> w(params_.data() + s.w, s.out, s.in);
    return w.transpose() * d;
  };

  Matrix d = Eigen::Map<const Eigen::RowVectorXd>(loss_grad.data(), batch);
  d = back(slots_.size() - 1, d);
  for (int k = spec_.n_res_blocks - 1; k >= 0; --k) {
    const Matrix dh = back(3 + 2 * k, d);
    d += back(2 + 2 * k, dh);
  }
  d = back(1, d);
  back(0, d);
  return grad;
}

void copy_parameters(const MLPNetwork& src, MLPNetwork& dst) {
  if (!(src.spec() == dst.spec())) throw SpecMismatch("copy_parameters: network specs differ");
  if (!src.initialized()) throw UninitializedNetwork("copy_parameters: source is uninitialized");
  dst.load_state(src.parameters(), src.running_stats());
}

void SgdOptimizer::step(MLPNetwork& net, const Vector& grad) {
  if (grad.size() != net.parameters().size()) throw ShapeMismatch("gradient length != parameter count");
  net.parameters() -= lr_ * grad;
}

void AdamOptimizer::step(MLPNetwork& net, const Vector& grad) {
  Vector& p = net.parameters();
  if (grad.size() != p.size()) throw ShapeMismatch("gradient length != parameter count");
  if (m_.size() != p.size()) {
    m_ = Vector::Zero(p.size());
    v_ = Vector::Zero(p.size());
    t_ = 0;
  }
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  p.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

}  // namespace fibbraid
