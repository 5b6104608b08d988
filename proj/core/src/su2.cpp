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

#include "fibbraid/su2.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "fibbraid/errors.hpp"

namespace fibbraid {

double unitarity_defect(const Matrix2& m) {
  return (m.adjoint() * m - Matrix2::Identity()).norm();
}

Unitary2::Unitary2(const Matrix2& m) : m_(m) {
  if (!m.allFinite()) throw NonUnitaryInput("matrix has non-finite entries");
  const double defect = unitarity_defect(m);
  if (!(defect < kUnitarityTolerance)) {
    throw NonUnitaryInput("matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
}

PhaseDecomposition project_to_su2(const Unitary2& u) {
  const Complex phase = std::sqrt(u.determinant());
  const Complex unit_phase = phase / std::abs(phase);
  return {Unitary2::trusted(u.matrix() / unit_phase), unit_phase};
}

double quaternion_distance(const Quat& a, const Quat& b) {
  const double p[4] = {a.w, a.x, a.y, a.z};
  const double q[4] = {b.w, b.x, b.y, b.z};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double minor = p[i] * q[j] - p[j] * q[i];
      sum += minor * minor;
    }
  }
  return std::min(1.0, std::sqrt(sum));
}

Quat canonical_sign(const Quat& q) {
  for (double c : {q.w, q.x, q.y, q.z}) {
    if (std::abs(c) > kCanonicalSignThreshold) {
      return c > 0 ? q : Quat{-q.w, -q.x, -q.y, -q.z};
    }
  }
  return q;
}

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) {
  const double norm = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("UnitQuaternion: zero or non-finite vector");
  }
  q_ = canonical_sign(Quat{w / norm, x / norm, y / norm, z / norm});
}

Quat su2_to_quat(const Matrix2& s) {
  return {s(0, 0).real(), s(0, 1).imag(), s(0, 1).real(), s(0, 0).imag()};
}

Matrix2 quat_to_su2(const Quat& q) {
  Matrix2 m;
  m << Complex(q.w, q.z), Complex(q.y, q.x),
       Complex(-q.y, q.x), Complex(q.w, -q.z);
  return m;
}

Unitary2 UnitQuaternion::to_unitary() const { return Unitary2::trusted(quat_to_su2(q_)); }

UnitQuaternion unitary_to_quaternion(const Unitary2& u) {
  const Matrix2 s = project_to_su2(u).special.matrix();
  // Average the two redundant parametrizations of each component.
  const double w = 0.5 * (s(0, 0).real() + s(1, 1).real());
  const double z = 0.5 * (s(0, 0).imag() - s(1, 1).imag());
  const double y = 0.5 * (s(0, 1).real() - s(1, 0).real());
  const double x = 0.5 * (s(0, 1).imag() + s(1, 0).imag());
  return UnitQuaternion(w, x, y, z);
}

double unitary_distance(const Unitary2& a, const Unitary2& b) {
  return quaternion_distance(unitary_to_quaternion(a), unitary_to_quaternion(b));
}

Unitary2 random_su2(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Quat q;
  double norm = 0.0;
  do {
    q = {normal(rng), normal(rng), normal(rng), normal(rng)};
    norm = std::sqrt(dot(q, q));
  } while (norm < 1e-12);
  q = {q.w / norm, q.x / norm, q.y / norm, q.z / norm};
  return Unitary2::trusted(quat_to_su2(q));
}

Unitary2 named_gate(std::string_view name) {
  using std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  Matrix2 m;
  if (name == "I") {
    m = Matrix2::Identity();
  } else if (name == "X") {
    m << 0, 1, 1, 0;
  } else if (name == "Y") {
    m << 0, -i, i, 0;
  } else if (name == "Z") {
    m << 1, 0, 0, -1;
  } else if (name == "H") {
    m << 1 / sqrt2, 1 / sqrt2, 1 / sqrt2, -1 / sqrt2;
  } else if (name == "S") {
    m << 1, 0, 0, i;
  } else if (name == "T") {
    m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
  } else {
    throw ParseError("unknown gate name '" + std::string(name) + "'");
  }
  return Unitary2::trusted(m);
}

Unitary2 axis_rotation(const std::array<double, 3>& axis, double angle) {
  const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (n == 0.0) return Unitary2::identity();
  const double s = -std::sin(angle / 2) / n;
  return Unitary2::trusted(quat_to_su2({std::cos(angle / 2), s * axis[0], s * axis[1], s * axis[2]}));
}

Unitary2 rz(double angle) { return axis_rotation({0, 0, 1}, angle); }
Unitary2 ry(double angle) { return axis_rotation({0, 1, 0}, angle); }

GridKey grid_key(const UnitQuaternion& q, double grid) {
  const auto c = q.components();
  GridKey key;
  for (int i = 0; i < 4; ++i) key.cell[i] = static_cast<std::int64_t>(std::llround(c[i] / grid));
  return key;
}

std::size_t GridKeyHash::operator()(const GridKey& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto c : k.cell) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace fibbraid
