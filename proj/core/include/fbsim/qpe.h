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

// Phase estimation. Ancillas sit above the system qubits; ancilla k
// carries bit k of the outcome and controls U^(2^k). The readout is the
// forward (uncentered) QFT on the ancillas, which maps the eigenphase of
// U = exp(-i (H - E_min) t0) to bin m = phase * 2^a / (2 pi).

#ifndef FBSIM_QPE_H_
#define FBSIM_QPE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fbsim/engine.h"
#include "fbsim/model.h"
#include "fbsim/oracle.h"

namespace fbsim::qpe {

struct QpeConfig {
  int ancillas = 8;
  double t0 = 0.0;
  double e_min = 0.0;
  double e_max = 0.0;  // window [e_min, e_max); width * t0 <= 2 pi
  std::int64_t shots = 0;
  std::uint64_t seed = 0;

  void validate() const;  // ConfigError on aliasing or a out of [1, 12]
  std::int64_t bins() const { return std::int64_t{1} << ancillas; }
  double resolution() const;  // 2 pi / (2^a t0)
  double bin_energy(std::int64_t m) const { return e_min + m * resolution(); }
  // Phase added to every application of U to shift the window to zero.
  double window_phase() const { return e_min * t0; }
};

struct EnergyHistogram {
  QpeConfig config;
  std::vector<std::int64_t> counts;  // size 2^a

  std::int64_t total() const;
  std::int64_t modal_bin() const;  // lowest bin among ties
  double modal_energy() const { return config.bin_energy(modal_bin()); }
  // Columns bin, phase, energy, count.
  std::string to_csv(const std::string& config_json) const;
};

// Applies U = exp(-i H t0) once to a system state. Global phases may be
// left in StateVector::global_phase(); drivers absorb them.
using UnitaryStep = std::function<void(StateVector&)>;

// Ancilla register state sum_j |j> U^j |psi> / sqrt(M), written rung by
// rung, then the forward QFT and sampling. Returns the joint state when
// `joint` is given.
EnergyHistogram run_ladder(const QpeConfig& cfg, const StateVector& input,
                           const UnitaryStep& u, StateVector* joint = nullptr);

// Exact U = exp(-i H t0) inside an invariant sector: outcome m has
// probability sum_k |c_k|^2 |K_M((E_k - E_min) t0 - 2 pi m / M)|^2, which is
// what run_ladder produces for that U, without the 2^a-fold state.
std::vector<double> spectral_probabilities(const QpeConfig& cfg,
                                           const oracle::SectorSpectrum& spec,
                                           const std::vector<cplx>& input);
EnergyHistogram run_spectral(const QpeConfig& cfg,
                             const oracle::SectorSpectrum& spec,
                             const std::vector<cplx>& input);
// System state after observing bin m, normalized.
std::vector<cplx> spectral_collapse(const QpeConfig& cfg,
                                    const oracle::SectorSpectrum& spec,
                                    const std::vector<cplx>& input,
                                    std::int64_t m);

// The textbook circuit: Hadamards, every gate of `step` controlled by
// ancilla k and repeated 2^k times, forward QFT, sampling. With
// `promote_global_phase` each GlobalPhase becomes a phase on its control
// ancilla; without it the synthesized offsets are dropped (only useful to
// show that they matter). The window phase is always applied.
EnergyHistogram run_controlled(const QpeConfig& cfg, const StateVector& input,
                               const Circuit& step, int repetitions,
                               bool promote_global_phase = true,
                               StateVector* joint = nullptr);

// One ancilla, bits from least significant up, with phase feedback; one
// collapse sequence per shot.
EnergyHistogram run_iterative(const QpeConfig& cfg, const StateVector& input,
                              const UnitaryStep& u);

// System part of a joint ancilla+system state after observing bin m.
StateVector collapse(const StateVector& joint, int n_system, std::int64_t m);

// --- Holstein dimer drivers ---

enum class Evolution { kTrotter, kExact };
enum class InputState { kDisplaced, kPlain };

struct PolaronConfig {
  double t = 1.0;
  double omega = 1.0;
  double alpha = 1.0;
  int n_x = 6;
  int steps_per_unit = 64;
  Evolution evolution = Evolution::kTrotter;
  InputState input = InputState::kDisplaced;
  QpeConfig qpe;

  double g() const { return holstein_g(alpha, omega, t); }
  int trotter_steps() const;  // ceil(steps_per_unit * t0), at least 1
  std::string to_json() const;
  static PolaronConfig from_json(const std::string& text);
  void validate() const;
};

// One electron in (|site 0> + |site 1>)/sqrt(2), chi_0 in each register,
// then (kDisplaced) exp(i (g/omega^2) n_i p_i) moving register i of the
// occupied site to x = -g/omega^2.
StateVector polaron_input(const QubitLayout& l, double g, double omega,
                          InputState kind);

struct PolaronResult {
  EnergyHistogram hist;
  std::vector<cplx> collapsed;  // system state in the modal bin (kExact only)
};
// Exact runs may pass a precomputed spectrum of the dimer Hamiltonian.
PolaronResult run_polaron(const PolaronConfig& cfg,
                          const oracle::SectorSpectrum* spectrum = nullptr);
// Exchange-even one-electron sector spectrum of the dimer on the grid.
oracle::SectorSpectrum polaron_spectrum(const PolaronConfig& cfg);

// QPE on H_p = sum_s (p_s^2 + omega^2 x_s^2)/2 with controlled dense
// register unitaries; bins are mapped to total phonon number
// n = round(E/omega - sites/2). Returns normalized Z(n), n = 0..n_max.
struct PhononDistribution {
  EnergyHistogram hist;
  std::vector<double> z;
};
PhononDistribution phonon_distribution(const std::vector<cplx>& state,
                                       const QubitLayout& l, double omega,
                                       const QpeConfig& cfg);

}  // namespace fbsim::qpe

#endif  // FBSIM_QPE_H_
