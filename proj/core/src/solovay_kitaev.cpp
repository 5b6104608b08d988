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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "fibbraid/baselines.hpp"
#include "fibbraid/errors.hpp"

namespace fibbraid {

namespace {

// SU(2) quaternion with w >= 0, i.e. rotation angle in [0, pi].
Quat short_quat(const Unitary2& u) {
  Quat q = su2_to_quat(project_to_su2(u).special.matrix());
  if (q.w < 0) q = {-q.w, -q.x, -q.y, -q.z};
  return q;
}

// Rotation axis under U = cos(t/2) I - i sin(t/2) n.sigma; zero for the identity.
std::array<double, 3> rotation_axis(const Quat& q) {
  const double s = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  if (s < 1e-300) return {0, 0, 0};
  return {-q.x / s, -q.y / s, -q.z / s};
}

Unitary2 rotation_between(const std::array<double, 3>& from, const std::array<double, 3>& to) {
  const std::array<double, 3> cross = {from[1] * to[2] - from[2] * to[1],
                                       from[2] * to[0] - from[0] * to[2],
                                       from[0] * to[1] - from[1] * to[0]};
  const double c = from[0] * to[0] + from[1] * to[1] + from[2] * to[2];
  const double s = std::sqrt(cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]);
  if (s < 1e-15) {
    if (c > 0) return Unitary2::identity();
    // Antiparallel: half turn about any axis orthogonal to `from`.
    std::array<double, 3> ortho = std::abs(from[0]) < 0.9 ? std::array<double, 3>{1, 0, 0}
                                                          : std::array<double, 3>{0, 1, 0};
    const double d = ortho[0] * from[0] + ortho[1] * from[1] + ortho[2] * from[2];
    for (int i = 0; i < 3; ++i) ortho[i] -= d * from[i];
    return axis_rotation(ortho, std::numbers::pi);
  }
  return axis_rotation(cross, std::atan2(s, c));
}

struct Approx {
  BraidWord word;
  Unitary2 u;
};

class SolovayKitaev {
 public:
  SolovayKitaev(const SkBaseNet& base, const GateSet& gates) : base_(base), gates_(gates) {}

  Approx run(const Unitary2& target, int level) {
    if (level == 0) {
      const std::size_t i = base_.nearest(su2_to_quat(project_to_su2(target).special.matrix()));
      BraidWord w = base_.word(i);
      Unitary2 u = word_to_unitary(w, gates_);
      return {std::move(w), u};
    }
    Approx prev = run(target, level - 1);
    const Unitary2 residual = target * prev.u.adjoint();
    try {
      return commutator_step(residual, prev, level);
    } catch (const CommutatorDecompositionFailure&) {
      // Split the residual into two half-angle rotations.
      const Quat q = short_quat(residual);
      const Unitary2 half = axis_rotation(rotation_axis(q), rotation_angle(residual) / 2);
      Approx mid = commutator_step(half, prev, level);
      return commutator_step(target * mid.u.adjoint(), mid, level);
    }
  }

 private:
  Approx commutator_step(const Unitary2& residual, const Approx& prev, int level) {
    const GroupCommutator gc = gc_decompose(residual);
    const Approx v = run(gc.V, level - 1);
    const Approx w = run(gc.W, level - 1);
    // Matrix V W V^dagger W^dagger prev, i.e. time order prev, W^-1, V^-1, W, V.
    BraidWord word = concat(prev.word, invert_word(w.word));
    word = concat(word, invert_word(v.word));
    word = concat(word, w.word);
    word = concat(word, v.word);
    const Unitary2 u = v.u * w.u * v.u.adjoint() * w.u.adjoint() * prev.u;
    return {free_reduce(word), u};
  }

  const SkBaseNet& base_;
  const GateSet& gates_;
};

}  // namespace

std::size_t SkBaseNet::nearest(const Quat& q) const {
  std::size_t best = 0;
  double best_dot = -1.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double d = std::abs(dot(states[i], q));
    if (d > best_dot) {
      best_dot = d;
      best = i;
    }
  }
  return best;
}

SkBaseNet sk_build_base(int depth, const GateSet& gates) {
  const BfsTable table = BfsTable::build(depth, gates);
  SkBaseNet net;
  net.depth = depth;
  table.for_each([&](const BraidWord& w, const UnitQuaternion& s) {
    net.packed.push_back(pack_word(w));
    net.lengths.push_back(static_cast<std::uint8_t>(w.size()));
    net.states.push_back(s.raw());
  });
  // Deterministic order independent of hash iteration: by length then word.
  std::vector<std::size_t> idx(net.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (net.lengths[a] != net.lengths[b]) return net.lengths[a] < net.lengths[b];
    return net.packed[a] < net.packed[b];
  });
  SkBaseNet sorted;
  sorted.depth = depth;
  for (std::size_t i : idx) {
    sorted.packed.push_back(net.packed[i]);
    sorted.lengths.push_back(net.lengths[i]);
    sorted.states.push_back(net.states[i]);
  }
  double radius = 0.0;
  for (std::uint64_t s = 0; s < 64; ++s) {
    const Quat q = su2_to_quat(random_su2(0x5eed0000ULL + s).matrix());
    radius = std::max(radius, quaternion_distance(sorted.states[sorted.nearest(q)], q));
  }
  sorted.covering_radius = radius;
  return sorted;
}

double rotation_angle(const Unitary2& u) {
  const Quat q = short_quat(u);
  const double s = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  return 2.0 * std::atan2(s, q.w);
}

GroupCommutator gc_decompose(const Unitary2& u) {
  const Quat q = short_quat(u);
  const double theta = rotation_angle(u);
  if (theta < 1e-15) return {Unitary2::identity(), Unitary2::identity()};

  const double s = std::min(1.0, std::sin(theta / 2));
  const double u2 = std::sqrt(std::max(0.0, (1.0 - std::sqrt(1.0 - s * s)) / 2.0));
  const double phi = 2.0 * std::asin(std::sqrt(u2));

  const Unitary2 v0 = axis_rotation({1, 0, 0}, phi);
  const Unitary2 w0 = axis_rotation({0, 1, 0}, phi);
  const Unitary2 c = v0 * w0 * v0.adjoint() * w0.adjoint();
  const Unitary2 align = rotation_between(rotation_axis(short_quat(c)), rotation_axis(q));
  GroupCommutator gc{align * v0 * align.adjoint(), align * w0 * align.adjoint()};

  const Unitary2 back = gc.V * gc.W * gc.V.adjoint() * gc.W.adjoint();
  const double err = unitary_distance(back, u);
  if (!(err < 1e-8)) {
    throw CommutatorDecompositionFailure("group commutator recomposition error " + std::to_string(err));
  }
  return gc;
}

CompileReport sk_compile(const Unitary2& target, int level, const SkBaseNet& base,
                         const GateSet& gates) {
  if (level < 0) throw std::invalid_argument("sk_compile: negative level");
  if (base.size() == 0) throw std::invalid_argument("sk_compile: empty base net");
  const auto start = std::chrono::steady_clock::now();
  SolovayKitaev sk(base, gates);
  const Approx a = sk.run(target, level);
  CompileReport r;
  r.word = a.word;
  r.length = a.word.size();
  r.distance = quaternion_distance(word_to_quaternion(a.word, gates), unitary_to_quaternion(target));
  r.depth_reached = level;
  r.terminated_by = TerminatedBy::DepthCap;
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace fibbraid
