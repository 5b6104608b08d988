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

#include "fibbraid/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "fibbraid/errors.hpp"

namespace fibbraid {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrainingSample make_sample(const UnitQuaternion& state, int depth, const GateSet& gates) {
  TrainingSample s{state, {}, depth};
  s.successors.reserve(gates.entries().size());
  for (const auto& e : gates.entries()) s.successors.emplace_back(mul(e.quaternion.raw(), state.raw()));
  return s;
}

void enumerate_words(const Quat& q, int depth, int max_depth, const GateSet& gates,
                     std::vector<TrainingSample>& out) {
  if (depth == max_depth) return;
  for (const auto& e : gates.entries()) {
    const Quat next = mul(e.quaternion.raw(), q);
    out.push_back(make_sample(UnitQuaternion(next), depth + 1, gates));
    enumerate_words(next, depth + 1, max_depth, gates, out);
  }
}

}  // namespace

void TrainingConfig::validate() const {
  network.validate();
  if (M_init < 1) throw std::invalid_argument("M_init must be >= 1");
  if (M_cap < M_init) throw std::invalid_argument("M_cap must be >= M_init");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (D_bf_data < 0 || D_bf_data > 8) throw std::invalid_argument("D_bf_data must lie in [0, 8]");
  if (batch_size < 1 || pool_walks < 1 || refresh_every < 1) {
    throw std::invalid_argument("batch_size, pool_walks and refresh_every must be positive");
  }
  if (epochs < 0) throw std::invalid_argument("epochs must be nonnegative");
  if (!(lr >= 0.0)) throw std::invalid_argument("lr must be nonnegative");
  if (!(identity_eps >= 0.0)) throw std::invalid_argument("identity_eps must be nonnegative");
}

TrainingBatch generate_training_batch(const TrainingConfig& cfg, int M, const GateSet& gates,
                                      std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("generate_training_batch: M must be >= 1");
  if (gates.empty()) throw EmptyGateSet("generate_training_batch: empty gate set");
  TrainingBatch batch;
  batch.samples.push_back(make_sample(UnitQuaternion(), 0, gates));
  enumerate_words(Quat{}, 0, std::min(cfg.D_bf_data, M), gates, batch.samples);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length(1, M);
  std::uniform_int_distribution<std::size_t> pick(0, gates.entries().size() - 1);
  batch.walk_lengths.reserve(cfg.pool_walks);
  for (int w = 0; w < cfg.pool_walks; ++w) {
    const int k = length(rng);
    batch.walk_lengths.push_back(k);
    Quat q;
    std::optional<Action> prev;
    for (int d = 1; d <= k; ++d) {
      std::size_t a = pick(rng);
      if (cfg.walk_mode == WalkMode::NonBacktracking && prev)
        while (gates.entries()[a].action == prev->inverted()) a = pick(rng);
      prev = gates.entries()[a].action;
      q = mul(gates.entries()[a].quaternion.raw(), q);
      const double n = std::sqrt(dot(q, q));
      q = {q.w / n, q.x / n, q.y / n, q.z / n};
      batch.samples.push_back(make_sample(UnitQuaternion(q), d, gates));
    }
  }
  return batch;
}

std::vector<double> compute_targets(
    const std::function<std::vector<double>(std::span<const UnitQuaternion>)>& cost_to_go,
    std::span<const TrainingSample> samples, const GateSet& gates, double identity_eps) {
  const UnitQuaternion identity;
  const std::size_t n_actions = gates.entries().size();
  std::vector<UnitQuaternion> successors;
  successors.reserve(samples.size() * n_actions);
  for (const auto& s : samples) {
    if (s.successors.size() != n_actions) throw ShapeMismatch("sample successors do not match gate set");
    successors.insert(successors.end(), s.successors.begin(), s.successors.end());
  }
  const std::vector<double> j = successors.empty() ? std::vector<double>{} : cost_to_go(successors);

  std::vector<double> targets(samples.size(), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (quaternion_distance(samples[i].state, identity) < identity_eps) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n_actions; ++a) {
      const auto& succ = successors[i * n_actions + a];
      const double jt = quaternion_distance(succ, identity) < identity_eps
                            ? 0.0
                            : std::max(0.0, j[i * n_actions + a]);
      best = std::min(best, gates.entries()[a].cost + jt);
    }
    targets[i] = best;
  }
  return targets;
}

std::vector<double> compute_targets(const MLPNetwork& target_net,
                                    std::span<const TrainingSample> samples, const GateSet& gates,
                                    double identity_eps) {
  auto eval = [&](std::span<const UnitQuaternion> states) {
    if (target_net.mode() == Mode::Eval) return target_net.forward(states);
    MLPNetwork copy = target_net;
    copy.set_mode(Mode::Eval);
    return copy.forward(states);
  };
  return compute_targets(eval, samples, gates, identity_eps);
}

void write_log_header(std::ostream& out) { out << "epoch,loss,M,mean_target\n"; }

void write_log_row(std::ostream& out, const TrainingLogRow& row) {
  out << row.epoch << ',' << std::setprecision(10) << row.loss << ',' << row.M << ','
      << row.mean_target << '\n';
}

std::vector<TrainingLogRow> read_log(std::istream& in) {
  std::vector<TrainingLogRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (line.rfind("epoch,loss,M,mean_target", 0) != 0) throw ParseError("training log: bad header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    TrainingLogRow r;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ls >> r.epoch >> c1 >> r.loss >> c2 >> r.M >> c3 >> r.mean_target) || c1 != ',' ||
        c2 != ',' || c3 != ',') {
      throw ParseError("training log: malformed row '" + line + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

ValueTrainer::ValueTrainer(TrainingConfig cfg, GateSet gates)
    : cfg_(std::move(cfg)),
      gates_(std::move(gates)),
      policy_(cfg_.network),
      target_(cfg_.network),
      optimizer_(cfg_.lr),
      rng_(mix_seed(cfg_.seed, 1)),
      M_(cfg_.M_init) {
  cfg_.validate();
  if (gates_.empty()) throw EmptyGateSet("ValueTrainer: empty gate set");
  policy_.initialize(mix_seed(cfg_.seed, 0));
  copy_parameters(policy_, target_);
  refresh_pool();
}

ValueTrainer::ValueTrainer(TrainingConfig cfg, const MLPNetwork& policy, int start_epoch, int M,
                           GateSet gates)
    : cfg_(std::move(cfg)),
      gates_(std::move(gates)),
      policy_(policy),
      target_(policy),
      optimizer_(cfg_.lr),
      rng_(mix_seed(cfg_.seed, 1 + static_cast<std::uint64_t>(start_epoch))),
      epoch_(start_epoch),
      M_(std::clamp(M, 1, cfg_.M_cap)) {
  cfg_.network = policy.spec();
  cfg_.validate();
  if (gates_.empty()) throw EmptyGateSet("ValueTrainer: empty gate set");
  policy_.set_mode(Mode::Eval);
  target_.set_mode(Mode::Eval);
  refresh_pool();
}

void ValueTrainer::refresh_pool() {
  pool_ = generate_training_batch(cfg_, M_, gates_,
                                  mix_seed(cfg_.seed, 1000003ULL + static_cast<std::uint64_t>(epoch_)));
  pool_age_ = 0;
}

TrainingLogRow ValueTrainer::step() {
  if (pool_age_ >= cfg_.refresh_every) refresh_pool();
  ++pool_age_;

  std::uniform_int_distribution<std::size_t> pick(0, pool_.samples.size() - 1);
  std::vector<TrainingSample> batch;
  batch.reserve(cfg_.batch_size);
  for (int i = 0; i < cfg_.batch_size; ++i) batch.push_back(pool_.samples[pick(rng_)]);

  const std::vector<double> targets = compute_targets(target_, batch, gates_, cfg_.identity_eps);
  std::vector<UnitQuaternion> states;
  states.reserve(batch.size());
  for (const auto& s : batch) states.push_back(s.state);

  const ForwardPass pass = policy_.forward_train(encode_states(states, cfg_.network.input_dim));
  const double n = static_cast<double>(batch.size());
  std::vector<double> grad_out(batch.size());
  double loss = 0.0, mean_target = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double r = pass.output[static_cast<Eigen::Index>(i)] - targets[i];
    loss += r * r / n;
    grad_out[i] = 2.0 * r / n;
    mean_target += targets[i] / n;
  }
  if (!std::isfinite(loss)) {
    throw DivergenceDetected("non-finite loss at epoch " + std::to_string(epoch_ + 1));
  }
  optimizer_.step(policy_, policy_.backward(pass, grad_out));
  ++epoch_;

  TrainingLogRow row{epoch_, loss, M_, mean_target};
  if (loss < cfg_.delta) {
    copy_parameters(policy_, target_);
    const int next = std::min(M_ + 1, cfg_.M_cap);
    if (next != M_) {
      M_ = next;
      refresh_pool();
    }
  }
  return row;
}

void ValueTrainer::run(const std::function<void(const TrainingLogRow&, const ValueTrainer&)>& on_epoch) {
  while (epoch_ < cfg_.epochs) {
    const TrainingLogRow row = step();
    if (on_epoch) on_epoch(row, *this);
  }
}

TrainingResult train(const TrainingConfig& cfg, const GateSet& gates) {
  ValueTrainer trainer(cfg, gates);
  TrainingResult result{trainer.policy(), {}};
  trainer.run([&](const TrainingLogRow& row, const ValueTrainer&) { result.log.push_back(row); });
  result.network = trainer.policy();
  result.network.set_mode(Mode::Eval);
  return result;
}

}  // namespace fibbraid
