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

// Thin wrappers over LAPACK's divide-and-conquer Hermitian eigensolvers.

#ifndef FBSIM_LINALG_H_
#define FBSIM_LINALG_H_

#include <Eigen/Dense>

namespace fbsim {

struct RealEigen {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors;
};

struct ComplexEigen {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXcd vectors;
};

// Throws NumericError when LAPACK reports non-convergence.
RealEigen eigh(const Eigen::MatrixXd& a, bool want_vectors = true);
ComplexEigen eigh(const Eigen::MatrixXcd& a, bool want_vectors = true);

// The `count` lowest eigenpairs only (dsyevr with an index range).
RealEigen eigh_lowest(const Eigen::MatrixXd& a, int count);

// exp(-i t A) for Hermitian A via eigendecomposition.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& a, double t);

}  // namespace fbsim

#endif  // FBSIM_LINALG_H_
