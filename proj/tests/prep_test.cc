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

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fbsim/engine.h"
#include "fbsim/error.h"
#include "fbsim/grid.h"
#include "fbsim/linalg.h"
#include "fbsim/prep.h"

namespace fbsim::prep {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

VectorXcd as_vec(const std::vector<cplx>& v) {
  return Eigen::Map<const VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

TEST(GaussianExact, AmplitudesAndEnergy) {
  const std::vector<cplx> chi = gaussian_amplitudes(6);
  EXPECT_NEAR(as_vec(chi).norm(), 1.0, 1e-12);
  const grid::DiscreteOperators ops = grid::build_operators(grid::make_grid(6));
  const VectorXcd v = as_vec(chi);
  EXPECT_NEAR((v.adjoint() * ops.h * v)(0).real(), 0.5, 1e-7);
  const grid::SampledBasis b = grid::sample_basis(grid::make_grid(6), 1);
  EXPECT_GE(std::norm(v.dot(b.chi.col(0).cast<cplx>())), 1.0 - 1e-10);
}

TEST(GaussianExact, DirectWriteInsideLargerState) {
  const QubitLayout l = QubitLayout::standard(2, 2, 4);
  StateVector s(l.total_qubits);
  prepare_fermion_product(s, l, {1});
  prepare_gaussian_exact(s, l.reg(1));
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  const std::vector<cplx> chi = gaussian_amplitudes(4);
  for (std::uint64_t v = 0; v < 16; ++v) {
    const std::uint64_t idx = (std::uint64_t{1} << l.fermion(1)) | (v << l.reg(1).first);
    EXPECT_NEAR(std::abs(s[idx] - chi[v]), 0.0, 1e-15);
  }
  EXPECT_THROW(prepare_gaussian_exact(s, l.reg(1)), ConfigError);
}

TEST(GaussianExact, RotationTreeReproducesChi0) {
  for (int nx : {3, 6}) {
    const Register r{0, 1, nx};
    StateVector s(nx + 2);
    run(s, gaussian_tree_circuit(r, nx + 2));
    const std::vector<cplx> chi = gaussian_amplitudes(nx);
    double dev = 0.0;
    for (std::uint64_t v = 0; v < chi.size(); ++v) dev = std::max(dev, std::abs(s[v << 1] - chi[v]));
    EXPECT_LT(dev, 1e-10) << nx;
  }
  const TreeResources t = gaussian_tree_resources(6);
  EXPECT_EQ(t.rotations, 63);
  EXPECT_EQ(t.max_controls, 5);
  EXPECT_EQ(t.two_qubit_gates, 2 * (2 * 1 + 4 * 4 + 8 * 9 + 16 * 16 + 32 * 25));
}

TEST(Variational, ZeroStepsIsGridPointAtOrigin) {
  // |x = 0> overlaps chi_0 in one amplitude, sqrt(delta) pi^{-1/4}.
  const double delta = grid::make_grid(6).delta;
  const PreparedState p = prepare_gaussian_variational(initial_schedule(6, 0));
  EXPECT_NEAR(p.fidelity, delta / std::sqrt(std::numbers::pi), 1e-9);
  EXPECT_NEAR(p.fidelity, 0.17678, 1e-5);
}

// The ansatz rebuilt from grid matrices and Kronecker products.
VectorXcd reference_state(const VariationalSchedule& s) {
  const int n = s.n_x;
  const grid::DiscreteOperators ops = grid::build_operators(grid::make_grid(n));
  const int dim = 1 << n;
  VectorXcd psi = VectorXcd::Zero(dim);
  psi[dim / 2] = 1.0;
  const MatrixXcd p2 = ops.p * ops.p;
  auto on_qubit = [n](int q, const Eigen::Matrix2cd& u) {
    MatrixXcd m = MatrixXcd::Identity(1, 1);
    for (int k = n - 1; k >= 0; --k) {
      const MatrixXcd f = k == q ? MatrixXcd(u) : MatrixXcd::Identity(2, 2);
      MatrixXcd nm(m.rows() * 2, m.cols() * 2);
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) nm.block(2 * i, 2 * j, 2, 2) = m(i, j) * f;
      m = nm;
    }
    return m;
  };
  const cplx i(0, 1);
  for (const StepAngles& st : s.steps) {
    psi = expm_hermitian(p2, st.rho_p) * psi;
    for (int k = 0; k < dim; ++k) psi[k] *= std::exp(-i * st.rho_x * ops.x[k] * ops.x[k]);
    for (int q = 0; q < n; ++q) {
      const double z = st.theta_z[q], x = st.theta_x[q], y = st.theta_y[q];
      Eigen::Matrix2cd rz, rx, ry;
      rz << std::exp(i * z / 2.0), 0, 0, std::exp(-i * z / 2.0);
      rx << std::cos(x / 2), -i * std::sin(x / 2), -i * std::sin(x / 2), std::cos(x / 2);
      ry << std::cos(y / 2), -std::sin(y / 2), std::sin(y / 2), std::cos(y / 2);
      psi = on_qubit(q, ry * rx * rz) * psi;
    }
  }
  return psi;
}

TEST(Variational, CircuitMatchesMatrixConstruction) {
  VariationalSchedule s = initial_schedule(5, 2);
  int k = 0;
  for (StepAngles& st : s.steps) {
    st.rho_p = std::sin(k++);
    st.rho_x = std::cos(k++);
    for (auto* arr : {&st.theta_z, &st.theta_x, &st.theta_y})
      for (double& a : *arr) a = 1.3 * std::sin(0.7 * k++);
  }
  const PreparedState p = prepare_gaussian_variational(s);
  const VectorXcd want = reference_state(s);
  const VectorXcd got = as_vec(p.state.amplitudes());
  EXPECT_NEAR(std::abs(want.dot(got)), 1.0, 1e-10);
  const VectorXcd chi = as_vec(gaussian_amplitudes(5));
  EXPECT_NEAR(p.fidelity, std::norm(chi.dot(want)), 1e-10);
  EXPECT_NEAR(p.state.norm(), 1.0, 1e-10);
}

TEST(Variational, ProductFidelityFactorizes) {
  // Two registers prepared independently: the full overlap with chi_0 x chi_0
  // is the product of the per-register fidelities.
  VariationalSchedule a = initial_schedule(4, 1), b = initial_schedule(4, 2);
  a.steps[0].theta_y[3] = 0.4;
  b.steps[1].rho_p = 0.3;
  const QubitLayout l = QubitLayout::standard(0, 2, 4);
  StateVector s(l.total_qubits);
  run(s, variational_circuit(l.reg(0), l.total_qubits, a));
  run(s, variational_circuit(l.reg(1), l.total_qubits, b));
  s.absorb_global_phase();
  const std::vector<cplx> chi = gaussian_amplitudes(4);
  cplx o = 0.0;
  for (std::uint64_t u = 0; u < 16; ++u)
    for (std::uint64_t v = 0; v < 16; ++v) o += chi[u] * chi[v] * s[u | (v << 4)];
  const double fa = prepare_gaussian_variational(a).fidelity;
  const double fb = prepare_gaussian_variational(b).fidelity;
  EXPECT_NEAR(std::norm(o), fa * fb, 1e-12);
}

TEST(Spsa, TraceMonotoneAndDeterministic) {
  SpsaOptions o;
  o.budget = 200;
  o.restarts = 2;
  const VariationalSchedule s = optimize_gaussian(4, 2, 3, o);
  ASSERT_EQ(s.best_trace.size(), 100u);
  for (std::size_t k = 1; k < s.best_trace.size(); ++k) {
    EXPECT_GE(s.best_trace[k], s.best_trace[k - 1]);
  }
  EXPECT_DOUBLE_EQ(s.fidelity, s.best_trace.back());
  EXPECT_NEAR(prepare_gaussian_variational(s).fidelity, s.fidelity, 1e-12);
  EXPECT_GT(s.fidelity, prepare_gaussian_variational(initial_schedule(4, 0)).fidelity);
  EXPECT_EQ(schedule_to_json(s), schedule_to_json(optimize_gaussian(4, 2, 3, o)));
  EXPECT_TRUE(s.seed == 3 || s.seed == 4);
  EXPECT_THROW(optimize_gaussian(3, 1, 0), ConfigError);
}

TEST(Schedule, JsonRoundTrip) {
  VariationalSchedule s = initial_schedule(4, 2);
  s.steps[1].theta_x[2] = 0.123456789012345678;
  s.steps[0].rho_x = -2.5;
  s.seed = 99;
  s.fidelity = 0.5;
  s.best_trace = {0.1, 0.5};
  const VariationalSchedule r = schedule_from_json(schedule_to_json(s));
  EXPECT_EQ(schedule_to_json(r), schedule_to_json(s));
  EXPECT_EQ(r.steps[1].theta_x[2], s.steps[1].theta_x[2]);
  EXPECT_THROW(schedule_from_json("{\"n_x\": 4, \"steps\": [{\"rho_p\": 0}]}"), ConfigError);
  EXPECT_THROW(schedule_from_json("not json"), ConfigError);
}

TEST(FermionProduct, Occupations) {
  const QubitLayout l = QubitLayout::standard(2, 1, 2);
  StateVector a(l.total_qubits);
  prepare_fermion_product(a, l, {0});
  EXPECT_EQ(std::abs(a[1]), 1.0);
  StateVector b(l.total_qubits);
  prepare_fermion_product(b, l, {});
  EXPECT_EQ(std::abs(b[0]), 1.0);
  StateVector c(l.total_qubits);
  prepare_fermion_product(c, l, {0, 1});
  EXPECT_EQ(std::abs(c[3]), 1.0);
  EXPECT_THROW(prepare_fermion_product(c, l, {2}), LayoutError);
  EXPECT_THROW(prepare_fermion_product(c, l, {1, 1}), ConfigError);
}

}  // namespace
}  // namespace fbsim::prep
