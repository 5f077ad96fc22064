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

// Sampled Hermite-Gauss basis and discrete x/p operators of one oscillator
// register. Grid points are x_i = (i - N/2) * delta, i = 0..N-1, with
// delta = sqrt(2 pi / N), so the position and momentum grids coincide.

#ifndef FBSIM_GRID_H_
#define FBSIM_GRID_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace fbsim::grid {

inline constexpr int kMinQubits = 2;
inline constexpr int kMaxQubits = 14;
inline constexpr int kMaxHermiteOrder = 128;

struct GridSpec {
  int n_x = 0;
  std::int64_t size = 0;  // N_x = 2^n_x
  double delta = 0.0;
  double half_width = 0.0;  // L, with 2L = N_x * delta

  double x(std::int64_t i) const {
    return static_cast<double>(i - size / 2) * delta;
  }
  // Centered momentum grid, identical to the position grid.
  double p(std::int64_t m) const { return x(m); }
};

// Throws ConfigError unless 2 <= n_x <= 14.
GridSpec make_grid(int n_x);

// phi_n(x) by the normalized three-term recurrence. Throws UnsupportedError
// for n > kMaxHermiteOrder.
double hermite_gauss(int n, double x);

struct SampledBasis {
  GridSpec grid;
  Eigen::MatrixXd chi;  // column n is sqrt(delta) * phi_n(x_i)
  int reliable = 0;     // columns n < reliable are orthonormal to 1e-8
};

// Throws ConfigError when n_max >= N_x.
SampledBasis sample_basis(const GridSpec& grid, int n_max);

// F_{mi} = exp(-i x_i p_m) / sqrt(N_x).
Eigen::MatrixXcd centered_dft(const GridSpec& grid);

struct DiscreteOperators {
  GridSpec grid;
  Eigen::VectorXd x;    // diagonal of x_op
  Eigen::MatrixXcd p;   // F^dagger diag(p_m) F
  Eigen::MatrixXcd h;   // (p^2 + x^2) / 2

  Eigen::MatrixXcd x_matrix() const;
};

DiscreteOperators build_operators(const GridSpec& grid);

struct Spectrum {
  Eigen::VectorXd energies;   // ascending
  Eigen::MatrixXcd vectors;   // largest-magnitude entry of each column real > 0
};

Spectrum spectrum(const DiscreteOperators& ops);

// 10 exp(-(0.51 N_x - 0.765 n)), the empirical convergence envelope.
double error_bound(std::int64_t n_grid, int n);

// ||([x,p] - i) phi_n|| for every eigenvector of h_op, in level order.
std::vector<double> commutator_residuals(const DiscreteOperators& ops,
                                         const Spectrum& spec);
double commutator_residual(const GridSpec& grid, int n);

// Number of leading levels whose commutator residual stays below eps.
int n_ph(const GridSpec& grid, double eps);

// Smallest power of two exceeding (4/pi) N_ph + 2/pi, never below 4.
std::int64_t min_grid_for_cutoff(int n_ph);
// Smallest N_x (power of two, up to 2^max_nx) whose residual is below eps
// for all n < n_ph. Returns 0 when no grid up to the cap qualifies.
std::int64_t min_grid_empirical(int n_ph, double eps, int max_nx = 10);

// max_{n < n_limit} ||F chi_n - (-i)^n chi_n||. n_limit < 0 means
// basis.reliable.
double dft_eigencheck(const SampledBasis& basis, int n_limit = -1);

}  // namespace fbsim::grid

#endif  // FBSIM_GRID_H_
