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

// Classical reference results: Fock-space exact diagonalization of the
// Holstein polaron, closed forms for displaced number states and the forced
// oscillator, and exact spectral evolution inside invariant sectors of the
// qubit encoding.

#ifndef FBSIM_ORACLE_H_
#define FBSIM_ORACLE_H_

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fbsim/dense.h"
#include "fbsim/engine.h"
#include "fbsim/grid.h"
#include "fbsim/model.h"

namespace fbsim::oracle {

using cplx = std::complex<double>;

// One electron on `sites` sites, at most `cutoff` phonons per site.
// With `symmetric` (two sites only) the basis is the even block under site
// exchange, labelled by (phonons on the electron's site, phonons elsewhere).
struct FockBasis {
  int sites = 2;
  int cutoff = 45;
  bool symmetric = true;

  std::int64_t dim() const;
};

inline constexpr std::int64_t kMaxEdDim = 12000;

struct EDResult {
  double t = 0.0, g = 0.0, omega = 0.0;
  FockBasis basis;
  Eigen::VectorXd eigenvalues;  // ascending, the requested lowest levels
  Eigen::VectorXd ground;       // in basis order
  std::vector<double> z;        // Z(n), n = 0 .. sites * cutoff

  double e0() const { return eigenvalues[0]; }
  double z0() const { return z.empty() ? 0.0 : z[0]; }
};

// H = -t sum (c_i^+ c_j + h.c.) + omega sum (b^+ b + 1/2) + g sum n_i x_i,
// x = (b + b^+)/sqrt(2 omega). Open chain for sites > 2.
EDResult ed_holstein(double t, double g, double omega, int sites, int cutoff,
                     int levels = 1, bool use_symmetry = true);
// Total-phonon-number marginals of the ground vector.
std::vector<double> ed_zn(const EDResult& r);

// <phi_m| D(z) |phi_n>, D(z) = exp(z b^+ - z^* b).
cplx displaced_overlap(int m, int n, cplx z);
// e^{-mean} mean^n / n!
double poisson_probability(int n, double mean);

struct DisplacedState {
  int n = 0;
  cplx z = 0.0;
};

// <phi_m | n, z> for m = 0 .. cutoff.
Eigen::VectorXcd fock_amplitudes(const DisplacedState& s, int cutoff);
// sum_m <phi_m|n,z> chi_m on the grid, m < basis.chi.cols().
Eigen::VectorXcd grid_state(const DisplacedState& s,
                            const grid::SampledBasis& basis);

// H = omega (b^+ b + 1/2) + f(u) b + f^*(u) b^+ acting for time t.
struct ForcedEvolution {
  DisplacedState state;  // |n, (zeta + z) e^{-i omega t}>
  cplx zeta = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  // U|n,z> = e^{i phase} |state>, phase = gamma + beta - (n + 1/2) omega t.
  double phase = 0.0;
};

ForcedEvolution forced_evolution(const DisplacedState& s,
                                 const std::function<cplx(double)>& f,
                                 double omega, double t, int panels = 10000);
// Piecewise-constant drive: samples[k] holds on [k dt, (k+1) dt).
ForcedEvolution forced_evolution(const DisplacedState& s,
                                 const std::vector<cplx>& samples, double dt,
                                 double omega, double t, int panels = 10000);

// ceil(n + |z|^2 + |z| sqrt(2 (2n+1) ln(1/eps))).
int cutoff_estimate(int n, double z_abs, double eps);

// Probability of p bosons on one site when N bosons on N sites share the
// zero-momentum orbital.
double condensate_local_distribution(std::int64_t n, std::int64_t p);

// exp(-i H t) on the whole register (at most dense::kMaxDenseQubits).
Eigen::MatrixXcd dense_propagator(const HamiltonianSpec& h,
                                  const QubitLayout& l, double t);

// Isometry onto the one-electron sector of a layout (electron on orbital e
// means fermion qubit e set, all others clear). With `swap_symmetric` the
// layout must have two orbitals and two registers, and columns are
// (|e=0; a, b> + |e=1; b, a>)/sqrt(2).
dense::SparseOp one_electron_sector(const QubitLayout& l, bool swap_symmetric);

// Exact spectral data of H restricted to an invariant sector.
class SectorSpectrum {
 public:
  SectorSpectrum(const HamiltonianSpec& h, const QubitLayout& l,
                 dense::SparseOp basis);

  const Eigen::VectorXd& energies() const { return energies_; }
  std::int64_t dim() const { return energies_.size(); }
  int n_qubits() const { return n_qubits_; }

  // Eigenbasis coefficients of a full-register state; the component outside
  // the sector is dropped.
  Eigen::VectorXcd coefficients(const std::vector<cplx>& full) const;
  std::vector<cplx> full_state(const Eigen::VectorXcd& coeffs) const;
  std::vector<cplx> eigenstate(std::int64_t k) const;
  std::vector<cplx> evolve(const std::vector<cplx>& full, double t) const;
  // Norm of the part of `full` outside the sector.
  double leakage(const std::vector<cplx>& full) const;

 private:
  int n_qubits_ = 0;
  dense::SparseOp basis_;
  Eigen::VectorXd energies_;
  bool real_ = true;
  Eigen::MatrixXd real_vectors_;
  Eigen::MatrixXcd complex_vectors_;
};

}  // namespace fbsim::oracle

#endif  // FBSIM_ORACLE_H_
