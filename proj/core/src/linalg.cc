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

#include "fbsim/linalg.h"

#include <complex>
#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

#include <algorithm>
#include <string>
#include <vector>

#include "fbsim/error.h"

namespace fbsim {

RealEigen eigh(const Eigen::MatrixXd& a, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RealEigen out;
  out.vectors = a;  // column-major copy, overwritten by eigenvectors
  out.values.resize(n);
  if (n == 0) return out;
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N',
                                   'L', n, out.vectors.data(), n,
                                   out.values.data());
  if (info != 0) {
    throw NumericError("dsyevd failed with info=" + std::to_string(info));
  }
  if (!want_vectors) out.vectors.resize(0, 0);
  return out;
}

ComplexEigen eigh(const Eigen::MatrixXcd& a, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  ComplexEigen out;
  out.vectors = a;
  out.values.resize(n);
  if (n == 0) return out;
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N',
                                   'L', n, out.vectors.data(), n,
                                   out.values.data());
  if (info != 0) {
    throw NumericError("zheevd failed with info=" + std::to_string(info));
  }
  if (!want_vectors) out.vectors.resize(0, 0);
  return out;
}

RealEigen eigh_lowest(const Eigen::MatrixXd& a, int count) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RealEigen out;
  if (n == 0 || count <= 0) return out;
  count = std::min<lapack_int>(count, n);
  Eigen::MatrixXd work = a;
  out.values.resize(n);
  out.vectors.resize(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n,
                                   work.data(), n, 0.0, 0.0, 1, count, 0.0,
                                   &found, out.values.data(),
                                   out.vectors.data(), n, support.data());
  if (info != 0 || found != count) {
    throw NumericError("dsyevr failed with info=" + std::to_string(info));
  }
  out.values.conservativeResize(count);
  return out;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& a, double t) {
  ComplexEigen e = eigh(a);
  Eigen::VectorXcd phases(e.values.size());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    phases[k] = std::polar(1.0, -t * e.values[k]);
  }
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

}  // namespace fbsim
