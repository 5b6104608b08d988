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

#include "fibbraid/search.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "fibbraid/errors.hpp"

namespace fibbraid {

NetworkCostToGo::NetworkCostToGo(const MLPNetwork& net) : net_(&net) {
  if (!net.initialized()) throw UninitializedNetwork("NetworkCostToGo: network parameters are unset");
}

std::vector<double> NetworkCostToGo::evaluate(std::span<const UnitQuaternion> states) const {
  if (states.empty()) return {};
  std::vector<double> j;
  if (net_->mode() == Mode::Eval) {
    j = net_->forward(states);
  } else {
    MLPNetwork eval = *net_;
    eval.set_mode(Mode::Eval);
    j = eval.forward(states);
  }
  for (double& v : j) v = std::max(0.0, v);
  return j;
}

SearchConfig SearchConfig::complexity_preset(double epsilon_T) {
  SearchConfig cfg;
  cfg.D_max = 1000;
  cfg.epsilon_T = epsilon_T;
  return cfg;
}

void SearchConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
  if (D_max < 0 || D_bf < 0 || D_bf > 12) throw std::invalid_argument("need D_max >= 0 and 0 <= D_bf <= 12");
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (max_open < 1) throw std::invalid_argument("max_open must be positive");
  if (epsilon_T && !(*epsilon_T >= 0.0)) throw std::invalid_argument("epsilon_T must be nonnegative");
  if (!(dedupe_grid > 0.0)) throw std::invalid_argument("dedupe_grid must be positive");
}

std::string_view to_string(TerminatedBy t) {
  return t == TerminatedBy::Accuracy ? "Accuracy" : "DepthCap";
}

double decimal_penalty(double J, double gamma) {
  if (J <= 1e-9) return 0.0;
  const double frac = J - std::round(J);
  return gamma * frac * frac / J;
}

double evaluate_f(double G, double J, const SearchConfig& cfg) {
  return cfg.lambda * G + J + decimal_penalty(J, cfg.gamma);
}

namespace {

struct Node {
  UnitQuaternion state;
  double G = 0.0;
  double J = 0.0;
  double f = 0.0;
  double distance = 1.0;
  std::int32_t parent = -1;
  std::int8_t action = -1;
  bool open = false;
};

struct OpenKey {
  double f;
  double J;
  std::int32_t id;
  bool operator<(const OpenKey& o) const {
    if (f != o.f) return f < o.f;
    if (J != o.J) return J < o.J;
    return id < o.id;
  }
};

class Search {
 public:
  Search(const Unitary2& target, const CostToGo& heuristic, const GateSet& gates,
         const SearchConfig& cfg)
      : target_(target), heuristic_(heuristic), gates_(gates), cfg_(cfg) {
    threshold_ = cfg.epsilon_T.value_or(kExactHitDistance);
  }

  CompileReport run() {
    const auto start = std::chrono::steady_clock::now();
    const UnitQuaternion root = unitary_to_quaternion(target_);
    add_node(root, -1, -1, 0.0);

    int depth = 0;
    // Brute-force phase: level by level from the target.
    std::vector<std::int32_t> frontier = {0};
    for (int level = 1; level <= cfg_.D_bf && !done(); ++level) {
      std::vector<std::int32_t> next;
      for (std::int32_t id : frontier) expand(id, next);
      report_.nodes_expanded += frontier.size();
      frontier = std::move(next);
      depth = level;
    }
    if (!done()) {
      evaluate_and_open(frontier);
      for (int it = 0; it < cfg_.D_max && !done() && !open_.empty(); ++it) {
        std::vector<std::int32_t> popped;
        while (!open_.empty() && popped.size() < static_cast<std::size_t>(cfg_.N)) {
          const auto first = open_.begin();
          popped.push_back(first->id);
          nodes_[first->id].open = false;
          open_.erase(first);
        }
        std::vector<std::int32_t> fresh;
        for (std::int32_t id : popped) expand(id, fresh);
        report_.nodes_expanded += popped.size();
        evaluate_and_open(fresh);
        while (open_.size() > cfg_.max_open) {
          auto last = std::prev(open_.end());
          nodes_[last->id].open = false;
          open_.erase(last);
        }
        ++depth;
      }
    }

    std::vector<Action> path;
    for (std::int32_t id = best_; nodes_[id].parent >= 0; id = nodes_[id].parent) {
      path.push_back(Action::from_index(nodes_[id].action));
    }
    std::reverse(path.begin(), path.end());
    report_.word = free_reduce(invert_word(BraidWord{path}));
    report_.length = report_.word.size();
    report_.distance = quaternion_distance(word_to_quaternion(report_.word, gates_), root);
    report_.depth_reached = depth;
    report_.terminated_by = done() ? TerminatedBy::Accuracy : TerminatedBy::DepthCap;
    report_.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report_;
  }

 private:
  bool done() const { return nodes_[best_].distance < threshold_; }

  std::int32_t add_node(const UnitQuaternion& state, std::int32_t parent, int action, double G) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    Node n;
    n.state = state;
    n.parent = parent;
    n.action = static_cast<std::int8_t>(action);
    n.G = G;
    n.distance = quaternion_distance(state, identity_);
    nodes_.push_back(n);
    seen_.emplace(grid_key(state, cfg_.dedupe_grid), id);
    if (id == 0) {
      best_ = 0;
    } else {
      const Node& b = nodes_[best_];
      if (n.distance < b.distance - 1e-12 || (n.distance <= b.distance + 1e-12 && n.G < b.G)) best_ = id;
    }
    return id;
  }

  void expand(std::int32_t id, std::vector<std::int32_t>& out) {
    for (const auto& e : gates_.entries()) {
      const Node& parent = nodes_[id];
      const UnitQuaternion child(mul(e.quaternion.raw(), parent.state.raw()));
      const double G = parent.G + e.cost;
      const auto it = seen_.find(grid_key(child, cfg_.dedupe_grid));
      if (it == seen_.end()) {
        out.push_back(add_node(child, id, e.action.index(), G));
        continue;
      }
      Node& old = nodes_[it->second];
      if (old.open && G < old.G - 1e-12) {
        open_.erase(OpenKey{old.f, old.J, it->second});
        old.parent = id;
        old.action = static_cast<std::int8_t>(e.action.index());
        old.G = G;
        old.f = evaluate_f(old.G, old.J, cfg_);
        open_.insert(OpenKey{old.f, old.J, it->second});
      }
    }
  }

  void evaluate_and_open(const std::vector<std::int32_t>& ids) {
    if (ids.empty()) return;
    std::vector<UnitQuaternion> states;
    states.reserve(ids.size());
    for (auto id : ids) states.push_back(nodes_[id].state);
    const std::vector<double> j = heuristic_.evaluate(states);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      Node& n = nodes_[ids[i]];
      n.J = j[i];
      n.f = evaluate_f(n.G, n.J, cfg_);
      n.open = true;
      open_.insert(OpenKey{n.f, n.J, ids[i]});
    }
  }

  const Unitary2& target_;
  const CostToGo& heuristic_;
  const GateSet& gates_;
  const SearchConfig& cfg_;
  const UnitQuaternion identity_{};
  double threshold_ = kExactHitDistance;
  std::vector<Node> nodes_;
  std::set<OpenKey> open_;
  std::unordered_map<GridKey, std::int32_t, GridKeyHash> seen_;
  std::int32_t best_ = 0;
  CompileReport report_;
};

}  // namespace

CompileReport search(const Unitary2& target, const CostToGo& heuristic, const GateSet& gates,
                     const SearchConfig& cfg) {
  cfg.validate();
  if (gates.empty()) throw EmptyGateSet("search: empty gate set");
  if (!(unitarity_defect(target.matrix()) < kUnitarityTolerance)) {
    throw NonUnitaryInput("search: target is not unitary");
  }
  return Search(target, heuristic, gates, cfg).run();
}

CompileReport search(const Unitary2& target, const MLPNetwork& net, const GateSet& gates,
                     const SearchConfig& cfg) {
  return search(target, NetworkCostToGo(net), gates, cfg);
}

CompileReport compile_with_accuracy(const Unitary2& target, const CostToGo& heuristic,
                                    const GateSet& gates, const SearchConfig& cfg) {
  if (!cfg.epsilon_T) throw std::invalid_argument("compile_with_accuracy: epsilon_T must be set");
  return search(target, heuristic, gates, cfg);
}

std::string report_to_json(const CompileReport& r, const SearchConfig* cfg) {
  nlohmann::ordered_json j;
  j["word"] = r.word.to_string();
  j["distance"] = r.distance;
  j["length"] = r.length;
  j["nodes_expanded"] = r.nodes_expanded;
  j["depth_reached"] = r.depth_reached;
  j["wall_time_s"] = r.wall_time_s;
  j["terminated_by"] = std::string(to_string(r.terminated_by));
  if (cfg) {
    nlohmann::ordered_json c;
    c["lambda"] = cfg->lambda;
    c["gamma"] = cfg->gamma;
    c["D_max"] = cfg->D_max;
    c["D_bf"] = cfg->D_bf;
    c["N"] = cfg->N;
    c["max_open"] = cfg->max_open;
    c["epsilon_T"] = cfg->epsilon_T ? nlohmann::ordered_json(*cfg->epsilon_T) : nlohmann::ordered_json();
    c["dedupe_grid"] = cfg->dedupe_grid;
    j["config"] = std::move(c);
  }
  return j.dump();
}

}  // namespace fibbraid
