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

// Fermion-boson Hamiltonians as lists of Hermitian terms in X/P form.
// H = shift + sum_k coeff_k O_k, where O_k is fixed by the term kind:
//
//   X, X2, P, P2        x_s, x_s^2, p_s, p_s^2
//   XX, PP              x_a x_b, p_a p_b                 (a != b)
//   XPCross             x_a p_b                          (a != b)
//   XPSelf              x^u p^v + p^v x^u                (one site)
//   Product             prod_k A_k, A_k = x or p per ops (distinct sites)
//   DensX, DensP        n_i x_s, n_i p_s
//   Hop                 c_i^+ c_j + c_j^+ c_i            (i < j)
//   HopX, HopP          (c_i^+ c_j + h.c.) x_s, ... p_s
//   CurX, CurP          i (c_i^+ c_j - c_j^+ c_i) x_s, ... p_s
//   HopMultiX           (c_i^+ c_j + h.c.)(offset + sum_m weights_m x_m)
//   FermionTwoBody      stored only; no circuit exists for it

#ifndef FBSIM_MODEL_H_
#define FBSIM_MODEL_H_

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fbsim {

enum class TermKind {
  kX,
  kX2,
  kXX,
  kP,
  kP2,
  kPP,
  kXPCross,
  kXPSelf,
  kProduct,
  kDensX,
  kDensP,
  kHopX,
  kHopP,
  kCurX,
  kCurP,
  kHop,
  kHopMultiX,
  kFermionTwoBody,
};

const char* term_name(TermKind kind);
TermKind term_kind_from_name(const std::string& name);  // throws ModelError

enum class TermGroup { kFermion = 0, kFermionBoson = 1, kBosonLocal = 2, kBosonCross = 3 };
TermGroup term_group(TermKind kind);

struct Term {
  TermKind kind = TermKind::kX;
  std::vector<int> sites;
  std::vector<int> orbitals;
  double coeff = 0.0;
  int u = 1;  // XPSelf exponents
  int v = 1;
  std::string ops;  // Product: one 'X' or 'P' per site
  double offset = 0.0;          // HopMultiX
  std::vector<double> weights;  // HopMultiX, one per site

  bool operator==(const Term&) const = default;
};

struct HamiltonianSpec {
  int n_orbitals = 0;
  int n_oscillators = 0;
  std::vector<Term> terms;
  double shift = 0.0;

  // Throws ModelError when a term is malformed or indexes out of range.
  void validate() const;
};

// Boson cubic/quartic vertex: ops[k] is 'c' (creation) or 'a' for sites[k].
struct BosonVertex {
  std::string ops;
  std::vector<int> sites;
  std::complex<double> coeff;
};

struct FermionBosonCoupling {
  int i = 0;
  int j = 0;
  int n = 0;
  std::complex<double> g;
};

struct FermionTwoBody {
  int i = 0, j = 0, k = 0, l = 0;
  double coeff = 0.0;
};

struct SecondQuantized {
  int n_orbitals = 0;
  Eigen::MatrixXcd xi;      // Hermitian, n x n
  Eigen::VectorXcd zeta;    // size n (may be empty)
  Eigen::MatrixXcd lambda;  // symmetric, n x n (may be empty)
  std::vector<BosonVertex> vertices;
  std::vector<FermionBosonCoupling> couplings;
  std::vector<FermionTwoBody> two_body;
  std::vector<double> l;    // empty means l_n = xi_nn
};

// Substitutes b = sqrt(l/2) x + i p / sqrt(2 l). The constant from b^+ b is
// accumulated into HamiltonianSpec::shift.
HamiltonianSpec from_second_quantized(const SecondQuantized& sq);

HamiltonianSpec holstein(double t, double g, double omega, int sites,
                         bool periodic = false);
double holstein_alpha(double g, double omega, double t);
double holstein_g(double alpha, double omega, double t);

struct TrotterPlan {
  double dt = 0.0;
  int steps = 0;
  std::vector<Term> ordered_terms;
};

// Sweep: fermion, fermion-boson, boson-local, boson-cross terms; index order
// inside each group, insertion order among equal indices.
TrotterPlan trotter_plan(const HamiltonianSpec& h, double total_t, int steps);

std::string model_to_json(const HamiltonianSpec& h);
HamiltonianSpec model_from_json(const std::string& text);

}  // namespace fbsim

#endif  // FBSIM_MODEL_H_
