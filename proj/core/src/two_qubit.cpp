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

#include "fibbraid/two_qubit.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "fibbraid/errors.hpp"

namespace fibbraid {
namespace {

using json = nlohmann::json;
using Real4 = Eigen::Matrix4d;
constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

Matrix4 magic_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix4 b;
  b << 1, 0, 0, kI,
       0, kI, 1, 0,
       0, kI, -1, 0,
       1, 0, 0, -kI;
  return b * s;
}

Matrix4 pauli_pair(const Matrix2& p) { return kron(p, p); }

// Nearest unitary in the polar sense; strips round-off from factorizations.
Matrix2 unitarize(const Matrix2& m) {
  Eigen::JacobiSVD<Matrix2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Splits a local 4x4 unitary L = A (x) B (up to phase) into A and B.
std::pair<Matrix2, Matrix2> split_local(const Matrix4& l) {
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double n = l.block<2, 2>(2 * i, 2 * j).squaredNorm();
      if (n > best) {
        best = n;
        bi = i;
        bj = j;
      }
    }
  const Matrix2 blk = l.block<2, 2>(2 * bi, 2 * bj);
  Matrix2 b = blk / std::sqrt(blk.determinant());
  b = unitarize(b);
  Matrix2 a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      a(i, j) = (b.adjoint() * l.block<2, 2>(2 * i, 2 * j)).trace() / 2.0;
  return {unitarize(a), b};
}

// Orthonormal real eigenvectors shared by the commuting symmetric matrices
// re and im. Eigenspaces of re that are degenerate are split by im.
Real4 joint_eigenvectors(const Real4& re, const Real4& im) {
  Eigen::SelfAdjointEigenSolver<Real4> es(re);
  Real4 v = es.eigenvectors();
  const Eigen::Vector4d ev = es.eigenvalues();
  int start = 0;
  while (start < 4) {
    int end = start + 1;
    while (end < 4 && std::abs(ev(end) - ev(start)) < 1e-7) ++end;
    const int n = end - start;
    if (n > 1) {
      const Eigen::MatrixXd basis = v.middleCols(start, n);
      const Eigen::MatrixXd sub = basis.transpose() * im * basis;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(sub);
      v.middleCols(start, n) = basis * es2.eigenvectors();
    }
    start = end;
  }
  return v;
}

void fix_column_sign(Real4& p, int col) {
  for (int r = 0; r < 4; ++r) {
    if (std::abs(p(r, col)) > 1e-9) {
      if (p(r, col) < 0) p.col(col) *= -1.0;
      return;
    }
  }
}

Matrix2 as_matrix(const Unitary2& u) { return u.matrix(); }

Matrix4 placement_matrix(const Matrix4& control0, const CnotPlacement& c) {
  if (c.control == 0) return control0;
  const Matrix4 s = swap_matrix();
  return s * control0 * s;
}

// Shared recomposition over the fixed topology. `two` maps a placement to
// its 4x4 matrix.
template <typename TwoFn>
Matrix4 recompose_topology(const std::array<Matrix2, 7>& g, const std::array<Slot, 7>& slots,
                           const std::array<CnotPlacement, 3>& cnots, TwoFn two) {
  // Time order; each new gate left-multiplies.
  Matrix4 u = Matrix4::Identity();
  auto local = [&](int k) { u = on_wire(g[k], slots[k].wire) * u; };
  local(0);
  local(1);
  u = two(cnots[0]) * u;
  local(2);
  local(3);
  u = two(cnots[1]) * u;
  local(4);
  u = two(cnots[2]) * u;
  local(5);
  local(6);
  return u;
}

Complex parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("matrix entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Unitary4::Unitary4(const Matrix4& m) : m_(m) {
  const double defect = (m.adjoint() * m - Matrix4::Identity()).norm();
  if (!(defect < kUnitarityTolerance))
    throw NonUnitaryInput("4x4 matrix is not unitary (defect " + std::to_string(defect) + ")");
}

Matrix4 kron(const Matrix2& wire0, const Matrix2& wire1) {
  Matrix4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.block<2, 2>(2 * i, 2 * j) = wire0(i, j) * wire1;
  return r;
}

Matrix4 on_wire(const Matrix2& g, int wire) {
  return wire == 0 ? kron(g, Matrix2::Identity()) : kron(Matrix2::Identity(), g);
}

Matrix4 cnot_matrix(int control, int target) {
  if (control == target || control < 0 || control > 1 || target < 0 || target > 1)
    throw ParseError("invalid CNOT wires");
  const Matrix2 x = named_gate("X").matrix();
  Matrix2 p0 = Matrix2::Zero(), p1 = Matrix2::Zero();
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  if (control == 0) return kron(p0, Matrix2::Identity()) + kron(p1, x);
  return kron(Matrix2::Identity(), p0) + kron(x, p1);
}

Matrix4 ideal_controlled_ix(int control) {
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = kI;
  m(3, 2) = kI;
  if (control == 0) return m;
  const Matrix4 s = swap_matrix();
  return s * m * s;
}

Matrix4 swap_matrix() {
  Matrix4 s = Matrix4::Zero();
  s(0, 0) = 1;
  s(1, 2) = 1;
  s(2, 1) = 1;
  s(3, 3) = 1;
  return s;
}

Unitary4 random_su4(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix4 z;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<Matrix4> qr(z);
  Matrix4 q = qr.householderQ();
  const Matrix4 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 4; ++k) {
    const Complex d = r(k, k);
    q.col(k) *= d / std::abs(d);
  }
  q /= std::pow(q.determinant(), 0.25);
  return Unitary4::trusted(q);
}

Unitary4 named_gate4(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "I") return Unitary4::trusted(Matrix4::Identity());
  if (up == "CNOT" || up == "CX") return Unitary4::trusted(cnot_matrix(0, 1));
  if (up == "CZ") {
    Matrix4 m = Matrix4::Identity();
    m(3, 3) = -1;
    return Unitary4::trusted(m);
  }
  if (up == "SWAP") return Unitary4::trusted(swap_matrix());
  if (up == "CIX") return Unitary4::trusted(ideal_controlled_ix(0));
  throw ParseError("unknown two-qubit gate: " + std::string(name));
}

double spectral_distance(const Matrix4& a, const Matrix4& b) {
  // ||a - e^{i phi} b||_2 = max_k |1 - e^{i(phi + alpha_k)}| for the
  // eigenphases alpha_k of a^dagger b (a normal matrix when both are
  // unitary). The best phi centers the smallest arc holding all alpha_k.
  const Matrix4 w = a.adjoint() * b;
  Eigen::ComplexEigenSolver<Matrix4> es(w, false);
  std::array<double, 4> ang;
  for (int k = 0; k < 4; ++k) ang[k] = std::arg(es.eigenvalues()(k));
  std::sort(ang.begin(), ang.end());
  double gap = ang[0] + 2 * kPi - ang[3];
  int after = 0;  // arc starts at ang[after]
  for (int k = 1; k < 4; ++k) {
    if (ang[k] - ang[k - 1] > gap) {
      gap = ang[k] - ang[k - 1];
      after = k;
    }
  }
  const double width = 2 * kPi - gap;
  const double mid = ang[after] + width / 2;
  // Exact for unitary inputs; the direct norm covers round-off and
  // non-unitary fixtures.
  const Matrix4 diff = a - std::exp(-kI * mid) * b;
  Eigen::JacobiSVD<Matrix4> svd(diff);
  return svd.singularValues()(0);
}

Matrix4 TwoQubitCircuit::recompose() const {
  std::array<Matrix2, 7> g;
  for (int k = 0; k < 7; ++k) g[k] = as_matrix(slots[k].gate);
  return recompose_topology(g, slots, cnots,
                            [](const CnotPlacement& c) { return cnot_matrix(c.control, c.target); });
}

TwoQubitCircuit kak_decompose(const Unitary4& u_in) {
  Matrix4 u = u_in.matrix();
  u /= std::pow(u.determinant(), 0.25);

  const Matrix4 b = magic_basis();
  const Matrix4 ub = b.adjoint() * u * b;
  const Matrix4 m = ub.transpose() * ub;

  Real4 p = joint_eigenvectors(m.real(), m.imag());
  std::array<double, 4> theta;
  for (int k = 0; k < 4; ++k) {
    const Complex lam = (p.col(k).cast<Complex>().transpose() * m * p.col(k).cast<Complex>())(0, 0);
    theta[k] = std::arg(lam) / 2.0;
  }
  // Descending eigenphase order, then the sign rule on each column.
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return theta[i] > theta[j] + 1e-12; });
  Real4 ps;
  std::array<double, 4> ts;
  for (int k = 0; k < 4; ++k) {
    ps.col(k) = p.col(order[k]);
    ts[k] = theta[order[k]];
    fix_column_sign(ps, k);
  }
  if (ps.determinant() < 0) ps.col(3) *= -1.0;

  // det(K1) = exp(-i sum theta) must be +1.
  double sum = ts[0] + ts[1] + ts[2] + ts[3];
  const long turns = std::lround(sum / kPi);
  if (turns % 2 != 0) ts[0] -= kPi;

  Eigen::Vector4cd dinv;
  for (int k = 0; k < 4; ++k) dinv(k) = std::exp(-kI * ts[k]);
  const Matrix4 k1c = ub * ps.cast<Complex>() * dinv.asDiagonal();
  const Real4 k1 = k1c.real();
  const Real4 k2 = ps.transpose();

  const auto [a1, a2] = split_local(b * k1.cast<Complex>() * b.adjoint());
  const auto [a3, a4] = split_local(b * k2.cast<Complex>() * b.adjoint());

  // theta_k = phi0 + a hx_k + b hy_k + c hz_k, where h are the magic-basis
  // eigenvalues of XX, YY, ZZ. The coefficient columns are orthogonal.
  const Matrix4 hx = b.adjoint() * pauli_pair(named_gate("X").matrix()) * b;
  const Matrix4 hy = b.adjoint() * pauli_pair(named_gate("Y").matrix()) * b;
  const Matrix4 hz = b.adjoint() * pauli_pair(named_gate("Z").matrix()) * b;
  double ca = 0, cb = 0, cc = 0;
  for (int k = 0; k < 4; ++k) {
    ca += ts[k] * hx(k, k).real() / 4.0;
    cb += ts[k] * hy(k, k).real() / 4.0;
    cc += ts[k] * hz(k, k).real() / 4.0;
  }

  const double t1 = kPi / 2 - 2 * cc;
  const double t2 = 2 * ca - kPi / 2;
  const double t3 = kPi / 2 - 2 * cb;

  TwoQubitCircuit c;
  c.canonical = {ca, cb, cc};
  auto slot = [](const Matrix2& g, int wire) { return Slot{Unitary2::trusted(g), wire}; };
  c.slots[0] = slot(a3, 0);
  c.slots[1] = slot(rz(-kPi / 2).matrix() * a4, 1);
  c.slots[2] = slot(rz(t1).matrix(), 0);
  c.slots[3] = slot(ry(t2).matrix(), 1);
  c.slots[4] = slot(ry(t3).matrix(), 1);
  c.slots[5] = slot(a1 * rz(kPi / 2).matrix(), 0);
  c.slots[6] = slot(a2, 1);
  c.cnots = {CnotPlacement{1, 0}, CnotPlacement{0, 1}, CnotPlacement{1, 0}};
  return c;
}

CixFixture CixFixture::synthetic_default() {
  CixFixture f;
  f.matrix = Unitary4::trusted(ideal_controlled_ix(0));
  f.length = 140;
  f.error = 0.0;
  f.leakage = 0.0;
  f.charge = "I";
  f.synthetic = true;
  return f;
}

CixFixture CixFixture::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("fixture is not valid JSON: ") + e.what());
  }
  CixFixture f;
  try {
    for (const auto& t : j.at("word")) f.word.push_back(t.get<std::string>());
    const json& mj = j.at("matrix");
    if (!mj.is_array() || mj.size() != 4) throw ParseError("fixture matrix must be 4x4");
    Matrix4 m;
    for (int r = 0; r < 4; ++r) {
      if (!mj[r].is_array() || mj[r].size() != 4) throw ParseError("fixture matrix must be 4x4");
      for (int c = 0; c < 4; ++c) m(r, c) = parse_complex(mj[r][c]);
    }
    f.length = j.at("length").get<int>();
    f.error = j.at("error").get<double>();
    f.leakage = j.at("leakage").get<double>();
    f.charge = j.at("charge").get<std::string>();
    f.synthetic = j.value("synthetic", false);
    f.matrix = Unitary4(m);
  } catch (const json::exception& e) {
    throw ParseError(std::string("fixture field error: ") + e.what());
  }
  if (f.charge != "I" && f.charge != "tau") throw ParseError("fixture charge must be \"I\" or \"tau\"");
  if (f.length < 0 || f.error < 0 || f.leakage < 0) throw ParseError("fixture metadata must be nonnegative");
  const double err = spectral_distance(ideal_controlled_ix(0), f.matrix.matrix());
  if (err > f.error + 1e-9)
    throw ParseError("fixture matrix is " + std::to_string(err) + " from controlled-iX, declared " +
                     std::to_string(f.error));
  return f;
}

CixFixture CixFixture::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fixture " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string CixFixture::to_json() const {
  json j;
  j["word"] = word;
  json mj = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back({matrix.matrix()(r, c).real(), matrix.matrix()(r, c).imag()});
    mj.push_back(row);
  }
  j["matrix"] = mj;
  j["length"] = length;
  j["error"] = error;
  j["leakage"] = leakage;
  j["charge"] = charge;
  j["synthetic"] = synthetic;
  return j.dump(2);
}

Matrix4 HybridCircuit::recompose() const {
  std::array<Unitary2, 7> g;
  for (int k = 0; k < 7; ++k) g[k] = slots[k].gate;
  return recompose(g);
}

Matrix4 HybridCircuit::recompose(const std::array<Unitary2, 7>& gates) const {
  std::array<Matrix2, 7> g;
  for (int k = 0; k < 7; ++k) g[k] = gates[k].matrix();
  return recompose_topology(g, slots, placements,
                            [this](const CnotPlacement& c) { return placement_matrix(cix, c); });
}

HybridCircuit substitute_cnots(const TwoQubitCircuit& c, const CixFixture* fixture) {
  HybridCircuit h;
  h.slots = c.slots;
  h.placements = c.cnots;
  h.ideal_cnot_mode = fixture == nullptr;
  h.cix = fixture ? fixture->matrix.matrix() : ideal_controlled_ix(0);
  // Slot feeding each CNOT on its control wire.
  constexpr std::array<int, 3> kPreceding{1, 2, 4};
  const Matrix2 corr = rz(-kPi / 2).matrix();
  for (int k = 0; k < 3; ++k) {
    Slot& s = h.slots[kPreceding[k]];
    s.gate = Unitary2::trusted(corr * s.gate.matrix());
  }
  return h;
}

SlotCompiler search_slot_compiler(const CostToGo& heuristic, const GateSet& gates,
                                  const SearchConfig& cfg) {
  return [&heuristic, &gates, cfg](const Unitary2& target) {
    SlotCompilation out;
    out.report = search(target, heuristic, gates, cfg);
    out.realized = word_to_unitary(out.report.word, gates);
    return out;
  };
}

SlotCompiler exact_slot_compiler() {
  return [](const Unitary2& target) {
    SlotCompilation out;
    out.report.distance = 0.0;
    out.report.terminated_by = TerminatedBy::Accuracy;
    out.realized = target;
    return out;
  };
}

TwoQubitReport compile_two_qubit(const Unitary4& u, const SlotCompiler& compile_slot,
                                 const CixFixture* fixture) {
  const auto t0 = std::chrono::steady_clock::now();
  const TwoQubitCircuit c = kak_decompose(u);
  const HybridCircuit h = substitute_cnots(c, fixture);

  TwoQubitReport r;
  std::array<Unitary2, 7> realized;
  for (int k = 0; k < 7; ++k) {
    r.slot_targets[k] = h.slots[k].gate;
    r.slots[k] = compile_slot(h.slots[k].gate);
    realized[k] = r.slots[k].realized;
    r.slot_length += r.slots[k].report.length;
  }
  r.ideal_cnot_mode = h.ideal_cnot_mode;
  r.fixture_length = fixture ? fixture->length : 0;
  r.fixture_error = fixture ? fixture->error : 0.0;
  r.fixture_charge = fixture ? fixture->charge : "";
  r.total_length = r.slot_length + 3 * static_cast<std::size_t>(r.fixture_length);
  r.error = spectral_distance(u.matrix(), h.recompose(realized));
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

TwoQubitReport compile_two_qubit(const Unitary4& u, const CostToGo& heuristic,
                                 const GateSet& gates, const SearchConfig& cfg,
                                 const CixFixture* fixture) {
  return compile_two_qubit(u, search_slot_compiler(heuristic, gates, cfg), fixture);
}

std::string two_qubit_report_to_json(const TwoQubitReport& r) {
  json j = json::object();
  j["error"] = r.error;
  j["total_length"] = r.total_length;
  j["slot_length"] = r.slot_length;
  j["fixture_length"] = r.fixture_length;
  j["fixture_error"] = r.fixture_error;
  j["fixture_charge"] = r.fixture_charge;
  j["ideal_cnot_mode"] = r.ideal_cnot_mode;
  json slots = json::array();
  for (const auto& s : r.slots) {
    slots.push_back({{"word", s.report.word.to_string()},
                     {"length", s.report.length},
                     {"distance", s.report.distance},
                     {"terminated_by", std::string(to_string(s.report.terminated_by))}});
  }
  j["slots"] = slots;
  j["wall_time_s"] = r.wall_time_s;
  return j.dump(2);
}

}  // namespace fibbraid
