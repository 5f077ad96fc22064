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

#include "fbsim/grid.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "fbsim/error.h"
#include "fbsim/linalg.h"

namespace fbsim::grid {

using cplx = std::complex<double>;

GridSpec make_grid(int n_x) {
  if (n_x < kMinQubits || n_x > kMaxQubits) {
    throw ConfigError("n_x must lie in [2, 14], got " + std::to_string(n_x));
  }
  GridSpec g;
  g.n_x = n_x;
  g.size = std::int64_t{1} << n_x;
  const double n = static_cast<double>(g.size);
  g.delta = std::sqrt(2.0 * std::numbers::pi / n);
  g.half_width = std::sqrt(2.0 * std::numbers::pi * n) / 2.0;
  return g;
}

double hermite_gauss(int n, double x) {
  if (n < 0 || n > kMaxHermiteOrder) {
    throw UnsupportedError("Hermite-Gauss order " + std::to_string(n) +
                           " outside [0, 128]");
  }
  // phi_{k+1} = x sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1}
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1)) * cur -
                        std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

SampledBasis sample_basis(const GridSpec& grid, int n_max) {
  if (n_max < 1 || n_max >= grid.size) {
    throw ConfigError("sample_basis needs 1 <= n_max < N_x (n_max=" +
                      std::to_string(n_max) +
                      ", N_x=" + std::to_string(grid.size) + ")");
  }
  if (n_max - 1 > kMaxHermiteOrder) {
    throw UnsupportedError("sample_basis order above 128");
  }
  SampledBasis b;
  b.grid = grid;
  b.chi.resize(grid.size, n_max);
  const double s = std::sqrt(grid.delta);
  for (std::int64_t i = 0; i < grid.size; ++i) {
    const double x = grid.x(i);
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    for (int k = 0; k < n_max; ++k) {
      b.chi(i, k) = s * cur;
      const double next = x * std::sqrt(2.0 / (k + 1)) * cur -
                          std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
    }
  }
  int reliable = 0;
  while (reliable < n_max && error_bound(grid.size, reliable) <= 1e-8) {
    ++reliable;
  }
  b.reliable = reliable;
  return b;
}

Eigen::MatrixXcd centered_dft(const GridSpec& grid) {
  const std::int64_t n = grid.size;
  Eigen::MatrixXcd f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  // x_i p_m = 2 pi (i - N/2)(m - N/2) / N; reduce the integer product mod N
  // before forming the angle to keep large grids accurate.
  for (std::int64_t m = 0; m < n; ++m) {
    for (std::int64_t i = 0; i < n; ++i) {
      std::int64_t k = ((i - n / 2) * (m - n / 2)) % n;
      if (k < 0) k += n;
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
      f(m, i) = std::polar(norm, ang);
    }
  }
  return f;
}

Eigen::MatrixXcd DiscreteOperators::x_matrix() const {
  return x.cast<cplx>().asDiagonal();
}

DiscreteOperators build_operators(const GridSpec& grid) {
  DiscreteOperators ops;
  ops.grid = grid;
  const std::int64_t n = grid.size;
  ops.x.resize(n);
  for (std::int64_t i = 0; i < n; ++i) ops.x[i] = grid.x(i);
  const Eigen::MatrixXcd f = centered_dft(grid);
  const Eigen::MatrixXcd pf = ops.x.cast<cplx>().asDiagonal() * f;
  Eigen::MatrixXcd p = f.adjoint() * pf;
  ops.p = 0.5 * (p + p.adjoint());
  Eigen::MatrixXcd h = 0.5 * (ops.p * ops.p);
  for (std::int64_t i = 0; i < n; ++i) h(i, i) += 0.5 * ops.x[i] * ops.x[i];
  ops.h = 0.5 * (h + h.adjoint());
  return ops;
}

Spectrum spectrum(const DiscreteOperators& ops) {
  ComplexEigen e = eigh(ops.h);
  Spectrum s;
  s.energies = e.values;
  s.vectors = std::move(e.vectors);
  for (Eigen::Index c = 0; c < s.vectors.cols(); ++c) {
    // Mirror-image components are near ties; take the first one within
    // 1e-10 of the largest magnitude so the choice survives rounding.
    const double top = s.vectors.col(c).cwiseAbs().maxCoeff();
    Eigen::Index arg = 0;
    while (std::abs(s.vectors(arg, c)) < top - 1e-10) ++arg;
    const cplx ph = std::conj(s.vectors(arg, c)) / std::abs(s.vectors(arg, c));
    s.vectors.col(c) *= ph;
  }
  return s;
}

double error_bound(std::int64_t n_grid, int n) {
  return 10.0 * std::exp(-(0.51 * static_cast<double>(n_grid) - 0.765 * n));
}

std::vector<double> commutator_residuals(const DiscreteOperators& ops,
                                         const Spectrum& spec) {
  const Eigen::Index n = spec.vectors.cols();
  const Eigen::MatrixXcd& v = spec.vectors;
  const Eigen::MatrixXcd pv = ops.p * v;
  const Eigen::MatrixXcd xv = ops.x.cast<cplx>().asDiagonal() * v;
  const Eigen::MatrixXcd r = ops.x.cast<cplx>().asDiagonal() * pv -
                             ops.p * xv - cplx(0.0, 1.0) * v;
  std::vector<double> out(n);
  for (Eigen::Index c = 0; c < n; ++c) out[c] = r.col(c).norm();
  return out;
}

double commutator_residual(const GridSpec& grid, int n) {
  if (n < 0 || n >= grid.size) {
    throw ConfigError("commutator level out of range");
  }
  const DiscreteOperators ops = build_operators(grid);
  const Spectrum spec = spectrum(ops);
  return commutator_residuals(ops, spec)[n];
}

int n_ph(const GridSpec& grid, double eps) {
  const DiscreteOperators ops = build_operators(grid);
  const std::vector<double> r = commutator_residuals(ops, spectrum(ops));
  int k = 0;
  while (k < static_cast<int>(r.size()) && r[k] < eps) ++k;
  return k;
}

std::int64_t min_grid_for_cutoff(int n_ph) {
  if (n_ph < 1) throw ConfigError("N_ph must be >= 1");
  const double bound = 4.0 / std::numbers::pi * n_ph + 2.0 / std::numbers::pi;
  std::int64_t n = 4;
  while (static_cast<double>(n) <= bound) n *= 2;
  return n;
}

std::int64_t min_grid_empirical(int n_ph_target, double eps, int max_nx) {
  for (int nx = kMinQubits; nx <= max_nx; ++nx) {
    const GridSpec g = make_grid(nx);
    if (g.size <= n_ph_target) continue;
    if (n_ph(g, eps) >= n_ph_target) return g.size;
  }
  return 0;
}

double dft_eigencheck(const SampledBasis& basis, int n_limit) {
  const int lim = n_limit < 0 ? basis.reliable
                              : std::min<int>(n_limit, basis.chi.cols());
  const Eigen::MatrixXcd f = centered_dft(basis.grid);
  double worst = 0.0;
  cplx phase(1.0, 0.0);
  for (int n = 0; n < lim; ++n) {
    const Eigen::VectorXcd chi = basis.chi.col(n).cast<cplx>();
    const double dev = (f * chi - phase * chi).norm();
    worst = std::max(worst, dev);
    phase *= cplx(0.0, -1.0);
  }
  return worst;
}

}  // namespace fbsim::grid
