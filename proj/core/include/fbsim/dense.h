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

// Explicit matrices of model operators on a qubit layout. Built from the
// grid operators and explicit Jordan-Wigner matrices, independent of the
// circuit synthesis, so the two can be checked against each other.

#ifndef FBSIM_DENSE_H_
#define FBSIM_DENSE_H_

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fbsim/engine.h"
#include "fbsim/model.h"

namespace fbsim::dense {

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;

inline constexpr int kMaxDenseQubits = 12;
inline constexpr int kMaxSparseQubits = 16;

// Local matrix on `qubits` (bit r of its index = qubits[r]) lifted to the
// full register of n qubits.
SparseOp embed(const Eigen::MatrixXcd& local, const std::vector<int>& qubits,
               int n_qubits);

SparseOp identity(int n_qubits);
// Jordan-Wigner annihilator c_j = (prod_{k<j} Z_k) |0><1|_j.
SparseOp annihilator(const QubitLayout& l, int orbital);
SparseOp number(const QubitLayout& l, int orbital);
SparseOp position(const QubitLayout& l, int site);  // x_op on the register
SparseOp momentum(const QubitLayout& l, int site);  // centered p_op

// O of the term (coefficient not applied), see model.h.
SparseOp term_operator(const QubitLayout& l, const Term& t);
// shift + sum coeff O. Throws ConfigError beyond kMaxDenseQubits.
Eigen::MatrixXcd hamiltonian(const HamiltonianSpec& h, const QubitLayout& l);
// Same operator kept sparse, for sector restrictions up to kMaxSparseQubits.
SparseOp sparse_hamiltonian(const HamiltonianSpec& h, const QubitLayout& l);
// exp(-i H t).
Eigen::MatrixXcd propagator(const HamiltonianSpec& h, const QubitLayout& l,
                            double t);
// exp(-i theta O) for one term.
Eigen::MatrixXcd term_exponential(const QubitLayout& l, const Term& t,
                                  double theta);

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace fbsim::dense

#endif  // FBSIM_DENSE_H_
