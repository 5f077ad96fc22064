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

// Register state preparation: the oscillator ground state chi_0 (written
// directly or grown by a variational circuit) and fermion occupations.

#ifndef FBSIM_PREP_H_
#define FBSIM_PREP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fbsim/engine.h"

namespace fbsim::prep {

// chi_0 on an n_x-qubit register, renormalized. Index = register value.
std::vector<cplx> gaussian_amplitudes(int n_x);

// Writes chi_0 into register `r`. The register must be in |0...0>;
// everything else in the state is kept as is.
void prepare_gaussian_exact(StateVector& s, const Register& r);

// Ry tree on the register: level k rotates qubit (width-1-k) under all 2^k
// patterns of the more significant qubits. Starting from |0...0> it gives
// chi_0. Used for gate counts; simulation uses the direct write above.
Circuit gaussian_tree_circuit(const Register& r, int n_qubits);

struct TreeResources {
  std::int64_t rotations = 0;        // 2^n_x - 1 (multi-)controlled Ry
  int max_controls = 0;              // n_x - 1
  std::int64_t two_qubit_gates = 0;  // sum_k 2^k * 2 k^2
};
TreeResources gaussian_tree_resources(int n_x);

struct SpsaOptions {
  double a = 0.2;
  double c = 0.1;
  double alpha = 0.602;
  double gamma = 0.101;
  double stability_fraction = 0.1;  // A = fraction * iterations
  int budget = 2000;                // loss evaluations per restart
  int restarts = 8;
};

struct StepAngles {
  double rho_p = 0.1;
  double rho_x = 0.1;
  std::vector<double> theta_z, theta_x, theta_y;  // one per qubit, little-endian
};

struct VariationalSchedule {
  int n_x = 0;
  std::vector<StepAngles> steps;
  std::uint64_t seed = 0;  // seed of the restart that produced the angles
  SpsaOptions spsa;
  double fidelity = 0.0;
  std::vector<double> best_trace;  // best-so-far fidelity per iteration

  int n_steps() const { return static_cast<int>(steps.size()); }
  void validate() const;
};

// Identity-adjacent start: theta = 0, rho_x = rho_p = 0.1.
VariationalSchedule initial_schedule(int n_x, int n_steps);

// Step s applies exp(-i rho_p p^2), exp(-i rho_x x^2), then Rz, Rx, Ry on
// every register qubit. The register starts on the grid point x = 0.
Circuit variational_circuit(const Register& r, int n_qubits,
                            const VariationalSchedule& sched);

struct PreparedState {
  StateVector state;
  double fidelity = 0.0;  // |<phi_v|chi_0>|^2
};
PreparedState prepare_gaussian_variational(const VariationalSchedule& sched);

// SPSA over all angles; restarts use seeds seed, seed+1, ...; the best
// fidelity wins, ties going to the lower seed.
VariationalSchedule optimize_gaussian(int n_x, int n_steps, std::uint64_t seed,
                                      const SpsaOptions& opts = {});

std::string schedule_to_json(const VariationalSchedule& s);
VariationalSchedule schedule_from_json(const std::string& text);

// X on the fermion qubit of every listed orbital.
void prepare_fermion_product(StateVector& s, const QubitLayout& l,
                             const std::vector<int>& orbitals);

}  // namespace fbsim::prep

#endif  // FBSIM_PREP_H_
