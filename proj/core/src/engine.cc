// Copyright 2026 The fbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fbsim/engine.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <string>

#include "json.hpp"

#include "fbsim/error.h"

namespace fbsim {
namespace {

using Mat2 = std::array<cplx, 4>;  // row-major {m00, m01, m10, m11}

constexpr double kPi = std::numbers::pi;

std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

// Enumerates indices whose bits at `fixed` (sorted ascending) equal `value`.
// The callback receives each index once, in increasing order of the free bits.
template <typename F>
void for_each_index(int n_qubits, const std::vector<int>& fixed,
                    std::uint64_t value, F&& f) {
  const int free_bits = n_qubits - static_cast<int>(fixed.size());
  const std::uint64_t count = std::uint64_t{1} << free_bits;
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t idx = k;
    for (int p : fixed) {
      const std::uint64_t low = idx & (bit(p) - 1);
      idx = ((idx >> p) << (p + 1)) | low;
    }
    f(idx | value);
  }
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::uint64_t mask_of(const std::vector<int>& qs) {
  std::uint64_t m = 0;
  for (int q : qs) m |= bit(q);
  return m;
}

void check_qubits(const StateVector& s, const Gate& g) {
  std::set<int> seen;
  for (int q : g.qubits()) {
    if (q < 0 || q >= s.n_qubits()) {
      throw LayoutError(std::string("gate ") + gate_name(g.kind) +
                        " touches qubit " + std::to_string(q) +
                        " outside a " + std::to_string(s.n_qubits()) +
                        "-qubit state");
    }
    if (!seen.insert(q).second) {
      throw LayoutError(std::string("gate ") + gate_name(g.kind) +
                        " repeats qubit " + std::to_string(q));
    }
  }
}

// Multiplies amplitudes by `factor` wherever every qubit in `ones` is |1>.
void apply_phase_mask(StateVector& s, const std::vector<int>& ones,
                      cplx factor) {
  const std::vector<int> fixed = sorted_unique(ones);
  const std::uint64_t value = mask_of(fixed);
  auto& a = s.amplitudes();
  for_each_index(s.n_qubits(), fixed, value,
                 [&](std::uint64_t i) { a[i] *= factor; });
}

void apply_mat2(StateVector& s, int target, const std::vector<int>& controls,
                const Mat2& m) {
  std::vector<int> fixed = controls;
  fixed.push_back(target);
  fixed = sorted_unique(fixed);
  const std::uint64_t value = mask_of(controls);
  const std::uint64_t t = bit(target);
  auto& a = s.amplitudes();
  for_each_index(s.n_qubits(), fixed, value, [&](std::uint64_t i0) {
    const cplx a0 = a[i0];
    const cplx a1 = a[i0 | t];
    a[i0] = m[0] * a0 + m[1] * a1;
    a[i0 | t] = m[2] * a0 + m[3] * a1;
  });
}

void apply_diag2(StateVector& s, int target, const std::vector<int>& controls,
                 cplx d0, cplx d1) {
  std::vector<int> fixed = controls;
  fixed.push_back(target);
  fixed = sorted_unique(fixed);
  const std::uint64_t value = mask_of(controls);
  const std::uint64_t t = bit(target);
  auto& a = s.amplitudes();
  for_each_index(s.n_qubits(), fixed, value, [&](std::uint64_t i0) {
    a[i0] *= d0;
    a[i0 | t] *= d1;
  });
}

void apply_swap(StateVector& s, int q0, int q1,
                const std::vector<int>& controls) {
  if (q0 == q1) return;
  std::vector<int> fixed = controls;
  fixed.push_back(q0);
  fixed.push_back(q1);
  fixed = sorted_unique(fixed);
  const std::uint64_t value = mask_of(controls);
  auto& a = s.amplitudes();
  for_each_index(s.n_qubits(), fixed, value, [&](std::uint64_t i) {
    std::swap(a[i | bit(q0)], a[i | bit(q1)]);
  });
}

void apply_dense(StateVector& s, const std::vector<int>& span,
                 const std::vector<int>& controls, const Eigen::MatrixXcd& m) {
  const int k = static_cast<int>(span.size());
  const std::uint64_t d = std::uint64_t{1} << k;
  if (m.rows() != static_cast<Eigen::Index>(d) || m.cols() != m.rows()) {
    throw LayoutError("dense gate matrix does not match its span");
  }
  std::vector<std::uint64_t> offset(d, 0);
  for (std::uint64_t r = 0; r < d; ++r) {
    for (int b = 0; b < k; ++b) {
      if (r & bit(b)) offset[r] |= bit(span[b]);
    }
  }
  std::vector<int> fixed = controls;
  fixed.insert(fixed.end(), span.begin(), span.end());
  fixed = sorted_unique(fixed);
  const std::uint64_t value = mask_of(controls);
  auto& a = s.amplitudes();
  Eigen::VectorXcd v(d), w(d);
  for_each_index(s.n_qubits(), fixed, value, [&](std::uint64_t base) {
    for (std::uint64_t r = 0; r < d; ++r) v[r] = a[base | offset[r]];
    w.noalias() = m * v;
    for (std::uint64_t r = 0; r < d; ++r) a[base | offset[r]] = w[r];
  });
}

const Mat2 kHadamard = {cplx(std::numbers::sqrt2 / 2), cplx(std::numbers::sqrt2 / 2),
                        cplx(std::numbers::sqrt2 / 2), cplx(-std::numbers::sqrt2 / 2)};

Mat2 rx_matrix(double theta) {
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  return {cplx(c), cplx(0, -sn), cplx(0, -sn), cplx(c)};
}

Mat2 ry_matrix(double theta) {
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  return {cplx(c), cplx(-sn), cplx(sn), cplx(c)};
}

// Uncentered transform network; little-endian span, bit reversal at the end.
void qft_network(StateVector& s, const std::vector<int>& span, bool inverse,
                 const std::vector<int>& controls) {
  const int n = static_cast<int>(span.size());
  auto phase_pair = [&](int a, int b, double theta) {
    std::vector<int> ones = controls;
    ones.push_back(a);
    ones.push_back(b);
    apply_phase_mask(s, ones, std::polar(1.0, -theta));
  };
  if (!inverse) {
    for (int i = n - 1; i >= 0; --i) {
      apply_mat2(s, span[i], controls, kHadamard);
      for (int m = i - 1; m >= 0; --m) {
        phase_pair(span[i], span[m], -kPi / static_cast<double>(bit(i - m)));
      }
    }
    for (int i = 0; i < n / 2; ++i) apply_swap(s, span[i], span[n - 1 - i], controls);
  } else {
    for (int i = 0; i < n / 2; ++i) apply_swap(s, span[i], span[n - 1 - i], controls);
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < i; ++m) {
        phase_pair(span[i], span[m], kPi / static_cast<double>(bit(i - m)));
      }
      apply_mat2(s, span[i], controls, kHadamard);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- layout

QubitLayout QubitLayout::standard(int n_orbitals, int n_oscillators, int n_x,
                                  int n_ancillas, int max_qubits) {
  if (n_orbitals < 0 || n_oscillators < 0 || n_ancillas < 0) {
    throw LayoutError("negative register count");
  }
  if (n_oscillators > 0 && n_x < 1) throw LayoutError("register width < 1");
  QubitLayout l;
  l.max_qubits = max_qubits;
  int q = 0;
  for (int i = 0; i < n_orbitals; ++i) l.fermion_qubits.push_back(q++);
  for (int k = 0; k < n_oscillators; ++k) {
    l.boson_registers.push_back({k, q, n_x});
    q += n_x;
  }
  for (int i = 0; i < n_ancillas; ++i) l.ancilla_qubits.push_back(q++);
  l.total_qubits = q;
  l.validate();
  return l;
}

int QubitLayout::fermion(int orbital) const {
  if (orbital < 0 || orbital >= static_cast<int>(fermion_qubits.size())) {
    throw LayoutError("orbital " + std::to_string(orbital) + " not in layout");
  }
  return fermion_qubits[orbital];
}

const Register& QubitLayout::reg(int oscillator) const {
  if (oscillator < 0 ||
      oscillator >= static_cast<int>(boson_registers.size())) {
    throw LayoutError("oscillator " + std::to_string(oscillator) +
                      " not in layout");
  }
  return boson_registers[oscillator];
}

std::vector<int> QubitLayout::register_qubits(int oscillator) const {
  const Register& r = reg(oscillator);
  std::vector<int> qs(r.width);
  for (int b = 0; b < r.width; ++b) qs[b] = r.first + b;
  return qs;
}

int QubitLayout::n_x() const {
  return boson_registers.empty() ? 0 : boson_registers.front().width;
}

void QubitLayout::validate() const {
  std::vector<int> all = fermion_qubits;
  for (const Register& r : boson_registers) {
    for (int b = 0; b < r.width; ++b) all.push_back(r.first + b);
  }
  all.insert(all.end(), ancilla_qubits.begin(), ancilla_qubits.end());
  std::set<int> seen;
  for (int q : all) {
    if (q < 0 || q >= total_qubits) {
      throw LayoutError("qubit " + std::to_string(q) + " outside layout");
    }
    if (!seen.insert(q).second) {
      throw LayoutError("qubit " + std::to_string(q) + " assigned twice");
    }
  }
  if (total_qubits > max_qubits) {
    throw LayoutError("layout needs " + std::to_string(total_qubits) +
                      " qubits, maximum is " + std::to_string(max_qubits));
  }
}

// ---------------------------------------------------------------- gates

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kPhaseShift: return "PhaseShift";
    case GateKind::kRz: return "Rz";
    case GateKind::kRx: return "Rx";
    case GateKind::kRy: return "Ry";
    case GateKind::kRxHalfPi: return "RxHalfPi";
    case GateKind::kH: return "Hadamard";
    case GateKind::kX: return "PauliX";
    case GateKind::kY: return "PauliY";
    case GateKind::kZ: return "PauliZ";
    case GateKind::kCPhase: return "CPhase";
    case GateKind::kMultiCPhase: return "MultiCPhase";
    case GateKind::kQFT: return "QFTBlock";
    case GateKind::kDense: return "DenseUnitary";
    case GateKind::kGlobalPhase: return "GlobalPhase";
  }
  return "?";
}

Gate Gate::phase(int q, double theta) {
  Gate g;
  g.kind = GateKind::kPhaseShift;
  g.targets = {q};
  g.theta = theta;
  return g;
}

Gate Gate::rz(int q, double theta) {
  Gate g = phase(q, theta);
  g.kind = GateKind::kRz;
  return g;
}

Gate Gate::rx(int q, double theta) {
  Gate g = phase(q, theta);
  g.kind = GateKind::kRx;
  return g;
}

Gate Gate::ry(int q, double theta) {
  Gate g = phase(q, theta);
  g.kind = GateKind::kRy;
  return g;
}

Gate Gate::rx_half_pi(int q, bool adjoint) {
  Gate g;
  g.kind = GateKind::kRxHalfPi;
  g.targets = {q};
  g.inverse = adjoint;
  return g;
}

Gate Gate::h(int q) {
  Gate g;
  g.kind = GateKind::kH;
  g.targets = {q};
  return g;
}

Gate Gate::x(int q) {
  Gate g;
  g.kind = GateKind::kX;
  g.targets = {q};
  return g;
}

Gate Gate::y(int q) {
  Gate g;
  g.kind = GateKind::kY;
  g.targets = {q};
  return g;
}

Gate Gate::z(int q) {
  Gate g;
  g.kind = GateKind::kZ;
  g.targets = {q};
  return g;
}

Gate Gate::cnot(int control, int target) {
  Gate g = x(target);
  g.controls = {control};
  return g;
}

Gate Gate::cphase(int a, int b, double theta) {
  Gate g;
  g.kind = GateKind::kCPhase;
  g.targets = {a, b};
  g.theta = theta;
  return g;
}

Gate Gate::multi_cphase(std::vector<int> qubits, double theta) {
  Gate g;
  g.kind = GateKind::kMultiCPhase;
  g.targets = std::move(qubits);
  g.theta = theta;
  return g;
}

Gate Gate::qft(std::vector<int> span, bool inverse, bool centered) {
  Gate g;
  g.kind = GateKind::kQFT;
  g.targets = std::move(span);
  g.inverse = inverse;
  g.centered = centered;
  return g;
}

Gate Gate::dense(std::vector<int> span, Eigen::MatrixXcd m) {
  if (static_cast<int>(span.size()) > kMaxDenseSpan) {
    throw LayoutError("dense gate span above 12 qubits");
  }
  const Eigen::Index d = Eigen::Index{1} << span.size();
  if (m.rows() != d || m.cols() != d) {
    throw LayoutError("dense gate matrix does not match its span");
  }
  const double dev =
      (m.adjoint() * m - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > 1e-10) throw NumericError("dense gate matrix is not unitary");
  Gate g;
  g.kind = GateKind::kDense;
  g.targets = std::move(span);
  g.matrix = std::make_shared<const Eigen::MatrixXcd>(std::move(m));
  return g;
}

Gate Gate::global_phase(double theta) {
  Gate g;
  g.kind = GateKind::kGlobalPhase;
  g.theta = theta;
  return g;
}

Gate Gate::with_control(int q) const {
  Gate g = *this;
  g.controls.push_back(q);
  return g;
}

Gate Gate::adjoint() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::kPhaseShift:
    case GateKind::kRz:
    case GateKind::kRx:
    case GateKind::kRy:
    case GateKind::kCPhase:
    case GateKind::kMultiCPhase:
    case GateKind::kGlobalPhase:
      g.theta = -theta;
      break;
    case GateKind::kRxHalfPi:
    case GateKind::kQFT:
      g.inverse = !inverse;
      break;
    case GateKind::kDense:
      g.matrix = std::make_shared<const Eigen::MatrixXcd>(matrix->adjoint());
      break;
    case GateKind::kH:
    case GateKind::kX:
    case GateKind::kY:
    case GateKind::kZ:
      break;
  }
  return g;
}

bool Gate::is_diagonal() const {
  switch (kind) {
    case GateKind::kPhaseShift:
    case GateKind::kRz:
    case GateKind::kZ:
    case GateKind::kCPhase:
    case GateKind::kMultiCPhase:
    case GateKind::kGlobalPhase:
      return true;
    default:
      return false;
  }
}

std::vector<int> Gate::qubits() const {
  std::vector<int> q = targets;
  q.insert(q.end(), controls.begin(), controls.end());
  return q;
}

void Circuit::append(const Circuit& other) {
  n_qubits = std::max(n_qubits, other.n_qubits);
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

Circuit Circuit::adjoint() const {
  Circuit c;
  c.n_qubits = n_qubits;
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    c.gates.push_back(it->adjoint());
  }
  return c;
}

Circuit Circuit::controlled(int q) const {
  Circuit c;
  c.n_qubits = std::max(n_qubits, q + 1);
  c.gates.reserve(gates.size());
  for (const Gate& g : gates) c.gates.push_back(g.with_control(q));
  return c;
}

double Circuit::classical_phase() const {
  double t = 0.0;
  for (const Gate& g : gates) {
    if (g.kind == GateKind::kGlobalPhase && g.controls.empty()) t += g.theta;
  }
  return t;
}

std::map<std::string, std::int64_t> Circuit::census() const {
  std::map<std::string, std::int64_t> out;
  for (const Gate& g : gates) ++out[gate_name(g.kind)];
  return out;
}

void dump_jsonl(const Circuit& c, std::ostream& os) {
  for (const Gate& g : c.gates) {
    nlohmann::ordered_json j;
    j["kind"] = gate_name(g.kind);
    j["targets"] = g.targets;
    j["controls"] = g.controls;
    j["theta"] = g.theta;
    if (g.kind == GateKind::kQFT) {
      j["inverse"] = g.inverse;
      j["centered"] = g.centered;
    }
    if (g.kind == GateKind::kRxHalfPi) j["inverse"] = g.inverse;
    os << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------- state

StateVector::StateVector(int n_qubits, std::uint64_t basis_index)
    : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > 30) {
    throw LayoutError("state vector size out of range");
  }
  amps_.assign(std::uint64_t{1} << n_qubits, cplx(0.0, 0.0));
  set_basis(basis_index);
}

void StateVector::set_basis(std::uint64_t index) {
  if (index >= amps_.size()) throw LayoutError("basis index out of range");
  std::fill(amps_.begin(), amps_.end(), cplx(0.0, 0.0));
  amps_[index] = 1.0;
  global_phase_ = 0.0;
}

void StateVector::absorb_global_phase() {
  if (global_phase_ == 0.0) return;
  const cplx f = std::polar(1.0, global_phase_);
  for (cplx& a : amps_) a *= f;
  global_phase_ = 0.0;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cplx& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

cplx StateVector::inner(const StateVector& other) const {
  if (other.dim() != dim()) throw LayoutError("state dimensions differ");
  cplx s = 0.0;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    s += std::conj(amps_[i]) * other.amps_[i];
  }
  return s * std::polar(1.0, other.global_phase_ - global_phase_);
}

void qft(StateVector& s, const std::vector<int>& span, bool centered,
         bool inverse, const std::vector<int>& controls) {
  if (span.empty()) return;
  if (!centered) {
    qft_network(s, span, inverse, controls);
    return;
  }
  // Centered F = Z_0 Q^dagger Z_0 and F^dagger = Z_0 Q Z_0, Z_0 on the
  // least significant qubit of the span.
  std::vector<int> z_ones = controls;
  z_ones.push_back(span[0]);
  apply_phase_mask(s, z_ones, cplx(-1.0, 0.0));
  qft_network(s, span, !inverse, controls);
  apply_phase_mask(s, z_ones, cplx(-1.0, 0.0));
}

void apply(StateVector& s, const Gate& g) {
  check_qubits(s, g);
  const std::vector<int>& c = g.controls;
  switch (g.kind) {
    case GateKind::kPhaseShift:
    case GateKind::kCPhase:
    case GateKind::kMultiCPhase:
      apply_phase_mask(s, g.qubits(), std::polar(1.0, -g.theta));
      return;
    case GateKind::kZ:
      apply_phase_mask(s, g.qubits(), cplx(-1.0, 0.0));
      return;
    case GateKind::kGlobalPhase:
      if (c.empty()) {
        s.add_global_phase(g.theta);
      } else {
        apply_phase_mask(s, c, std::polar(1.0, g.theta));
      }
      return;
    case GateKind::kRz:
      apply_diag2(s, g.targets.at(0), c, std::polar(1.0, g.theta / 2),
                  std::polar(1.0, -g.theta / 2));
      return;
    case GateKind::kRx:
      apply_mat2(s, g.targets.at(0), c, rx_matrix(g.theta));
      return;
    case GateKind::kRy:
      apply_mat2(s, g.targets.at(0), c, ry_matrix(g.theta));
      return;
    case GateKind::kRxHalfPi:
      apply_mat2(s, g.targets.at(0), c,
                 rx_matrix(g.inverse ? -kPi / 2 : kPi / 2));
      return;
    case GateKind::kH:
      apply_mat2(s, g.targets.at(0), c, kHadamard);
      return;
    case GateKind::kX:
      apply_mat2(s, g.targets.at(0), c, {cplx(0), cplx(1), cplx(1), cplx(0)});
      return;
    case GateKind::kY:
      apply_mat2(s, g.targets.at(0), c,
                 {cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)});
      return;
    case GateKind::kQFT:
      qft(s, g.targets, g.centered, g.inverse, c);
      return;
    case GateKind::kDense:
      apply_dense(s, g.targets, c, *g.matrix);
      return;
  }
}

void run(StateVector& s, const Circuit& c) {
  for (const Gate& g : c.gates) apply(s, g);
}

Eigen::MatrixXcd circuit_matrix(const Circuit& c) {
  if (c.n_qubits > 14) throw LayoutError("circuit_matrix limited to 14 qubits");
  const std::uint64_t d = std::uint64_t{1} << c.n_qubits;
  Eigen::MatrixXcd m(d, d);
  for (std::uint64_t col = 0; col < d; ++col) {
    StateVector s(c.n_qubits, col);
    run(s, c);
    const cplx f = std::polar(1.0, s.global_phase());
    for (std::uint64_t r = 0; r < d; ++r) m(r, col) = f * s[r];
  }
  return m;
}

// ---------------------------------------------------------------- readout

double expectation_diagonal(const StateVector& s,
                            const std::vector<double>& values_by_index) {
  if (values_by_index.size() != s.dim()) {
    throw LayoutError("observable dimension mismatch");
  }
  double e = 0.0;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    e += std::norm(s[i]) * values_by_index[i];
  }
  return e;
}

cplx expectation_local(const StateVector& s, const std::vector<int>& span,
                       const Eigen::MatrixXcd& op) {
  const Eigen::Index d = Eigen::Index{1} << span.size();
  if (op.rows() != d || op.cols() != d) {
    throw LayoutError("observable dimension mismatch");
  }
  std::vector<std::uint64_t> offset(d, 0);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (std::size_t b = 0; b < span.size(); ++b) {
      if (r & (Eigen::Index{1} << b)) offset[r] |= bit(span[b]);
    }
  }
  const std::vector<int> fixed = sorted_unique(span);
  const auto& a = s.amplitudes();
  cplx e = 0.0;
  Eigen::VectorXcd v(d);
  for_each_index(s.n_qubits(), fixed, 0, [&](std::uint64_t base) {
    for (Eigen::Index r = 0; r < d; ++r) v[r] = a[base | offset[r]];
    e += v.dot(op * v);
  });
  return e;
}

double expectation_register_x(const StateVector& s, const Register& r,
                              const grid::GridSpec& g) {
  const std::uint64_t mask = (std::uint64_t{1} << r.width) - 1;
  double e = 0.0;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    const std::int64_t j = static_cast<std::int64_t>((i >> r.first) & mask);
    e += std::norm(s[i]) * g.x(j);
  }
  return e;
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + counter;
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::vector<double> marginal_probabilities(const StateVector& s,
                                           const std::vector<int>& qubits) {
  const int k = static_cast<int>(qubits.size());
  if (k > 26) throw LayoutError("too many measured qubits");
  for (int q : qubits) {
    if (q < 0 || q >= s.n_qubits()) throw LayoutError("measured qubit out of range");
  }
  std::vector<double> p(std::uint64_t{1} << k, 0.0);
  bool contiguous = k > 0;
  for (int b = 1; b < k; ++b) contiguous &= qubits[b] == qubits[0] + b;
  const auto& a = s.amplitudes();
  if (contiguous) {
    const int shift = qubits[0];
    const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
      p[(i >> shift) & mask] += std::norm(a[i]);
    }
  } else {
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
      std::uint64_t o = 0;
      for (int b = 0; b < k; ++b) {
        if (i & bit(qubits[b])) o |= bit(b);
      }
      p[o] += std::norm(a[i]);
    }
  }
  return p;
}

std::vector<std::int64_t> sample_distribution(const std::vector<double>& probs,
                                              std::int64_t shots,
                                              std::uint64_t seed) {
  if (shots < 1) throw ConfigError("shots must be >= 1");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  std::vector<std::int64_t> counts(probs.size(), 0);
  for (std::int64_t t = 0; t < shots; ++t) {
    const double u = counter_uniform(seed, static_cast<std::uint64_t>(t)) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= probs.size()) idx = probs.size() - 1;
    while (probs[idx] == 0.0 && idx > 0) --idx;  // guard u == acc rounding
    ++counts[idx];
  }
  return counts;
}

std::vector<std::int64_t> sample(const StateVector& s,
                                 const std::vector<int>& qubits,
                                 std::int64_t shots, std::uint64_t seed) {
  return sample_distribution(marginal_probabilities(s, qubits), shots, seed);
}

}  // namespace fbsim
