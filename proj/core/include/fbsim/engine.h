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

// Flat-buffer state-vector simulator. Qubit q is bit q of the amplitude
// index; a boson register stores its integer value little-endian.

#ifndef FBSIM_ENGINE_H_
#define FBSIM_ENGINE_H_

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fbsim/grid.h"

namespace fbsim {

using cplx = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 26;
inline constexpr int kMaxDenseSpan = 12;

struct Register {
  int oscillator = 0;
  int first = 0;  // lowest (least significant) qubit
  int width = 0;
};

struct QubitLayout {
  std::vector<int> fermion_qubits;  // orbital -> qubit (Jordan-Wigner order)
  std::vector<Register> boson_registers;  // index = oscillator id
  std::vector<int> ancilla_qubits;
  int total_qubits = 0;
  int max_qubits = kDefaultMaxQubits;

  // Fermions first, then one register per oscillator, then ancillas.
  static QubitLayout standard(int n_orbitals, int n_oscillators, int n_x,
                              int n_ancillas = 0,
                              int max_qubits = kDefaultMaxQubits);

  int fermion(int orbital) const;
  const Register& reg(int oscillator) const;
  std::vector<int> register_qubits(int oscillator) const;
  int n_x() const;  // common register width, 0 when there are no registers
  // Throws LayoutError on overlap, out-of-range or too many qubits.
  void validate() const;
};

enum class GateKind {
  kPhaseShift,   // diag(1, e^{-i theta})
  kRz,           // diag(e^{i theta/2}, e^{-i theta/2})
  kRx,           // exp(-i theta X / 2)
  kRy,           // exp(-i theta Y / 2)
  kRxHalfPi,     // Rx(pi/2); inverse flag gives Rx(-pi/2)
  kH,
  kX,
  kY,
  kZ,
  kCPhase,       // e^{-i theta} on |11>
  kMultiCPhase,  // e^{-i theta} when every target is |1>
  kQFT,          // register transform, see qft() below
  kDense,        // matrix on targets (bit r of the row index = targets[r])
  kGlobalPhase,  // multiplies by e^{i theta}
};

const char* gate_name(GateKind kind);

struct Gate {
  GateKind kind = GateKind::kPhaseShift;
  std::vector<int> targets;
  std::vector<int> controls;  // gate acts only where every control is |1>
  double theta = 0.0;
  bool inverse = false;
  bool centered = false;
  std::shared_ptr<const Eigen::MatrixXcd> matrix;

  static Gate phase(int q, double theta);
  static Gate rz(int q, double theta);
  static Gate rx(int q, double theta);
  static Gate ry(int q, double theta);
  static Gate rx_half_pi(int q, bool adjoint = false);
  static Gate h(int q);
  static Gate x(int q);
  static Gate y(int q);
  static Gate z(int q);
  static Gate cnot(int control, int target);
  static Gate cphase(int a, int b, double theta);
  static Gate multi_cphase(std::vector<int> qubits, double theta);
  static Gate qft(std::vector<int> span, bool inverse, bool centered = false);
  static Gate dense(std::vector<int> span, Eigen::MatrixXcd m);
  static Gate global_phase(double theta);

  Gate with_control(int q) const;
  Gate adjoint() const;
  bool is_diagonal() const;
  // All qubits read or written, controls included.
  std::vector<int> qubits() const;
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  void add(Gate g) { gates.push_back(std::move(g)); }
  void append(const Circuit& other);
  Circuit adjoint() const;
  Circuit controlled(int q) const;
  // Sum of uncontrolled GlobalPhase angles.
  double classical_phase() const;
  std::map<std::string, std::int64_t> census() const;
};

// One gate per line: {"kind","targets","controls","theta"}.
void dump_jsonl(const Circuit& c, std::ostream& os);

class StateVector {
 public:
  explicit StateVector(int n_qubits, std::uint64_t basis_index = 0);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t dim() const { return amps_.size(); }
  std::vector<cplx>& amplitudes() { return amps_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx& operator[](std::uint64_t i) { return amps_[i]; }
  const cplx& operator[](std::uint64_t i) const { return amps_[i]; }

  // Physical state = e^{i global_phase} * amplitudes.
  double global_phase() const { return global_phase_; }
  void add_global_phase(double t) { global_phase_ += t; }
  void absorb_global_phase();

  double norm() const;
  // <this|other> including both global phases.
  cplx inner(const StateVector& other) const;

  void set_basis(std::uint64_t index);

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
  double global_phase_ = 0.0;
};

void apply(StateVector& s, const Gate& g);
void run(StateVector& s, const Circuit& c);

// Register Fourier transform. Uncentered forward maps
// |j> -> N^{-1/2} sum_n e^{+2 pi i j n / N} |n>; centered forward is the
// matrix exp(-i x_j p_m)/sqrt(N) of grid::centered_dft.
void qft(StateVector& s, const std::vector<int>& span, bool centered,
         bool inverse, const std::vector<int>& controls = {});

// Dense 2^n x 2^n matrix of a circuit (n <= 14), global phases included.
Eigen::MatrixXcd circuit_matrix(const Circuit& c);

// sum_i |a_i|^2 f(i).
double expectation_diagonal(const StateVector& s,
                            const std::vector<double>& values_by_index);
// <psi| O_span |psi> for a dense operator on the listed qubits.
cplx expectation_local(const StateVector& s, const std::vector<int>& span,
                       const Eigen::MatrixXcd& op);
// Diagonal of x_op on one register, indexed by full-state basis index.
double expectation_register_x(const StateVector& s, const Register& r,
                              const grid::GridSpec& g);

// Counter-based uniform in [0,1): splitmix64 of (seed, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

// Marginal probabilities over `qubits` (bit r of the outcome = qubits[r]).
std::vector<double> marginal_probabilities(const StateVector& s,
                                           const std::vector<int>& qubits);
// Histogram of `shots` draws; deterministic for fixed seed.
std::vector<std::int64_t> sample(const StateVector& s,
                                 const std::vector<int>& qubits,
                                 std::int64_t shots, std::uint64_t seed);
std::vector<std::int64_t> sample_distribution(const std::vector<double>& probs,
                                              std::int64_t shots,
                                              std::uint64_t seed);

}  // namespace fbsim

#endif  // FBSIM_ENGINE_H_
