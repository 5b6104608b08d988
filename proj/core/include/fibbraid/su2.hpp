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

// Single-qubit unitaries and their projective quaternion encoding.
//
// Quaternion convention (used everywhere in the library): the unit
// quaternion (w, x, y, z) stands for the SU(2) matrix
//
//     U = w I + i (x X + y Y + z Z) = [[w + i z,  y + i x],
//                                      [-y + i x, w - i z]]
//
// so w = Re u00, z = Im u00, y = Re u01, x = Im u01. Because U and -U
// describe the same physical gate, a UnitQuaternion is kept in canonical
// sign: the first component (in w, x, y, z order) with magnitude above
// kCanonicalSignThreshold is positive.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

#include <Eigen/Core>

namespace fibbraid {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kCanonicalSignThreshold = 1e-9;

/// A 2x2 unitary matrix. Construction from an arbitrary matrix checks
/// ||U^dagger U - I||_F < kUnitarityTolerance and throws NonUnitaryInput.
class Unitary2 {
 public:
  Unitary2() : m_(Matrix2::Identity()) {}
  explicit Unitary2(const Matrix2& m);

  static Unitary2 identity() { return {}; }
  // For values that are unitary by construction (products, adjoints).
  static Unitary2 trusted(const Matrix2& m) {
    Unitary2 u;
    u.m_ = m;
    return u;
  }

  const Matrix2& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }
  Complex determinant() const { return m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0); }
  Unitary2 adjoint() const { return trusted(m_.adjoint()); }
  Unitary2 operator*(const Unitary2& rhs) const { return trusted(m_ * rhs.m_); }

 private:
  Matrix2 m_;
};

/// Frobenius norm of U^dagger U - I.
double unitarity_defect(const Matrix2& m);

struct PhaseDecomposition {
  Unitary2 special;  // det == 1
  Complex phase;     // phase^2 == det(input); special * phase == input
};

/// Splits U into a special-unitary part and a unit-modulus scalar. The
/// phase is the principal square root of det(U).
PhaseDecomposition project_to_su2(const Unitary2& u);

/// Plain 4-vector used in arithmetic hot paths. No invariants.
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;
  friend bool operator==(const Quat&, const Quat&) = default;
};

/// Quaternion of the matrix product A * B under the convention above.
inline Quat mul(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + b.w * a.x - (a.y * b.z - a.z * b.y),
          a.w * b.y + b.w * a.y - (a.z * b.x - a.x * b.z),
          a.w * b.z + b.w * a.z - (a.x * b.y - a.y * b.x)};
}

inline Quat conj(const Quat& a) { return {a.w, -a.x, -a.y, -a.z}; }

inline double dot(const Quat& a, const Quat& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// sqrt(1 - <a, b>^2) for unit a, b, evaluated through the Lagrange
/// identity so that it stays accurate for nearly parallel inputs.
double quaternion_distance(const Quat& a, const Quat& b);

/// A unit quaternion in canonical sign; the search and network state.
class UnitQuaternion {
 public:
  UnitQuaternion() = default;  // identity
  /// Normalizes and canonicalizes. Throws std::invalid_argument on a zero vector.
  UnitQuaternion(double w, double x, double y, double z);
  explicit UnitQuaternion(const Quat& q) : UnitQuaternion(q.w, q.x, q.y, q.z) {}

  double w() const { return q_.w; }
  double x() const { return q_.x; }
  double y() const { return q_.y; }
  double z() const { return q_.z; }
  const Quat& raw() const { return q_; }
  std::array<double, 4> components() const { return {q_.w, q_.x, q_.y, q_.z}; }

  /// The SU(2) representative with this sign.
  Unitary2 to_unitary() const;

  friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

 private:
  Quat q_;
};

/// Flips the sign of q so the first component above kCanonicalSignThreshold
/// in magnitude is positive.
Quat canonical_sign(const Quat& q);

/// Raw quaternion of an SU(2) matrix; no canonicalization.
Quat su2_to_quat(const Matrix2& special);
Matrix2 quat_to_su2(const Quat& q);

/// Projects U to SU(2) and returns its canonical quaternion.
UnitQuaternion unitary_to_quaternion(const Unitary2& u);

inline double quaternion_distance(const UnitQuaternion& a, const UnitQuaternion& b) {
  return quaternion_distance(a.raw(), b.raw());
}

/// Quaternion distance between the projective classes of two unitaries.
double unitary_distance(const Unitary2& a, const Unitary2& b);

/// Haar-random SU(2) element, deterministic in the seed.
Unitary2 random_su2(std::uint64_t seed);

/// Named single-qubit gates: I, X, Y, Z, H, S, T. Throws ParseError otherwise.
Unitary2 named_gate(std::string_view name);

/// Rotation exp(-i angle/2 (n . sigma)) about a unit axis.
Unitary2 axis_rotation(const std::array<double, 3>& axis, double angle);

/// Rz(t) = exp(-i t Z / 2), Ry(t) = exp(-i t Y / 2).
Unitary2 rz(double angle);
Unitary2 ry(double angle);

/// Integer grid key of a canonical quaternion, used to deduplicate states
/// on the continuous state space.
struct GridKey {
  std::array<std::int64_t, 4> cell;
  friend bool operator==(const GridKey&, const GridKey&) = default;
};

GridKey grid_key(const UnitQuaternion& q, double grid);

struct GridKeyHash {
  std::size_t operator()(const GridKey& k) const noexcept;
};

}  // namespace fibbraid
