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

// Circuits for exp(-i theta O) for every term kind of model.h.
//
// Every builder returns a circuit whose matrix, including the GlobalPhase
// gates it emits for constant offsets, equals the exponential exactly. The
// register value of a boson register is j = sum_r 2^r b_r; x = (j - N/2) delta
// and, in the momentum frame, p = delta * (j - N b_{n-1}).

#ifndef FBSIM_SYNTH_H_
#define FBSIM_SYNTH_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fbsim/engine.h"
#include "fbsim/model.h"

namespace fbsim::synth {

enum class Quadrature { kX, kP };

Circuit synth_X(const QubitLayout& l, int site, double theta);
Circuit synth_X2(const QubitLayout& l, int site, double theta);
Circuit synth_XX(const QubitLayout& l, int site_a, int site_b, double theta);
// kind in {P, P2, PP, XPCross}; XPCross takes {x_site, p_site}.
Circuit synth_momentum_variant(const QubitLayout& l, TermKind kind,
                               const std::vector<int>& sites, double theta);
// exp(-i theta n_i A_s), A = x or p.
Circuit synth_density(const QubitLayout& l, int orbital, int site,
                      double theta, Quadrature q = Quadrature::kX);

struct SiteAngle {
  int site = 0;
  double theta = 0.0;
  Quadrature q = Quadrature::kX;
};

// exp(-i (c_i^+ c_j + h.c.)(theta0 + sum_m theta_m A_m)), i < j.
Circuit synth_hopping(const QubitLayout& l, int i, int j,
                      const std::vector<SiteAngle>& sites, double theta0);
// exp(-i theta i(c_i^+ c_j - c_j^+ c_i) A_s), i < j.
Circuit synth_current(const QubitLayout& l, int i, int j, int site,
                      double theta, Quadrature q = Quadrature::kX);
// exp(-i theta (x^u p^v + p^v x^u)) by dense diagonalization, n_x <= 8.
Circuit synth_xp_self(const QubitLayout& l, int site, int u, int v,
                      double theta);
// exp(-i theta prod_k A_k) over distinct sites, ops[k] in {'X','P'}.
Circuit synth_boson_product(const QubitLayout& l,
                            const std::vector<int>& sites,
                            const std::string& ops, double theta);

// exp(-i t.coeff dt O_t). Throws UnsupportedError for FermionTwoBody.
Circuit synth_term(const QubitLayout& l, const Term& t, double dt);

// Removes QFT blocks immediately undone by their inverse on the same span
// (no gate touching the span in between). Returns the number of pairs removed.
int cancel_qft_pairs(Circuit& c);

// Gate layers; every gate occupies its qubits for one layer. GlobalPhase
// gates without controls take no layer.
int circuit_depth(const Circuit& c);

struct SynthesizedStep {
  Circuit circuit;
  double classical_phase = 0.0;
  std::map<std::string, std::int64_t> gate_counts;  // GlobalPhase excluded
  int depth = 0;
};

SynthesizedStep synth_trotter_step(const TrotterPlan& plan,
                                   const QubitLayout& l);

struct TermResources {
  std::string kind;
  std::int64_t gates = 0;
  int depth = 0;
};

struct ResourceReport {
  std::vector<TermResources> terms;  // plan order
  std::map<std::string, std::int64_t> totals;
  std::int64_t total_gates = 0;
  int total_depth = 0;
};

ResourceReport resource_report(const TrotterPlan& plan, const QubitLayout& l);
std::string resource_report_json(const ResourceReport& r);

// Expands diag(exp(-i phi_k)) on `qubits` into PhaseShift, CPhase and
// MultiCPhase gates (one per non-zero multilinear monomial) plus a
// GlobalPhase for the constant monomial.
Circuit lower_diagonal(const std::vector<int>& qubits,
                       const std::vector<double>& phases, int n_qubits);

// Two-qubit-gate cost of an m-qubit MultiCPhase: 1 for m <= 2, 2(m-1)^2
// otherwise (quadratic ancilla-free decomposition).
std::int64_t multicphase_cost(int m);

struct XpSelfResources {
  std::int64_t multicphase = 0;     // 2^n_x - 1 monomials
  std::int64_t two_qubit_phase = 0; // sum of multicphase_cost
  std::int64_t basis_change = 0;    // 2 * 4^n_x for U and U^dagger
};
XpSelfResources xp_self_resources(int n_x);

}  // namespace fbsim::synth

#endif  // FBSIM_SYNTH_H_
