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

#include "fbsim/qpe.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "json.hpp"

#include "fbsim/error.h"
#include "fbsim/grid.h"
#include "fbsim/io.h"
#include "fbsim/linalg.h"
#include "fbsim/prep.h"
#include "fbsim/synth.h"

namespace fbsim::qpe {
namespace {

using json = nlohmann::ordered_json;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<int> ancilla_span(int n_system, int a) {
  std::vector<int> s(a);
  for (int k = 0; k < a; ++k) s[k] = n_system + k;
  return s;
}

StateVector embed_input(const StateVector& input, int a) {
  const int n = input.n_qubits();
  if (n + a > kDefaultMaxQubits) {
    throw ConfigError("qpe: " + std::to_string(n) + " system qubits plus " + std::to_string(a) +
                      " ancillas exceed " + std::to_string(kDefaultMaxQubits));
  }
  StateVector joint(n + a);
  auto& dst = joint.amplitudes();
  const auto& src = input.amplitudes();
  std::copy(src.begin(), src.end(), dst.begin());
  joint.add_global_phase(input.global_phase());
  joint.absorb_global_phase();
  return joint;
}

EnergyHistogram sample_ancillas(const QpeConfig& cfg, const StateVector& joint, int n_system) {
  EnergyHistogram h;
  h.config = cfg;
  h.counts = sample(joint, ancilla_span(n_system, cfg.ancillas), cfg.shots, cfg.seed);
  return h;
}

// (1/M) sum_{j<M} e^{i j x}
cplx kernel(int64_t m_bins, double x) {
  const double y = std::remainder(x, kTwoPi);
  const double half = 0.5 * y;
  const double s = std::sin(half);
  const double mm = static_cast<double>(m_bins);
  if (std::abs(s) < 1e-12) {
    // Near a multiple of 2 pi: the sum is M e^{i (M-1) y/2} up to O(y^2).
    return std::polar(1.0, (mm - 1.0) * half);
  }
  return std::polar(std::sin(mm * half) / (mm * s), (mm - 1.0) * half);
}

const char* evolution_name(Evolution e) { return e == Evolution::kExact ? "exact" : "trotter"; }
const char* input_name(InputState s) { return s == InputState::kPlain ? "plain" : "displaced"; }

json qpe_json(const QpeConfig& q) {
  return json{{"ancillas", q.ancillas}, {"t0", q.t0},       {"e_min", q.e_min},
              {"e_max", q.e_max},       {"shots", q.shots}, {"seed", q.seed}};
}

}  // namespace

void QpeConfig::validate() const {
  if (ancillas < 1 || ancillas > 12) throw ConfigError("qpe: ancillas must lie in [1, 12]");
  if (!(t0 > 0.0)) throw ConfigError("qpe: t0 must be positive");
  if (!(e_max > e_min)) throw ConfigError("qpe: energy window must have e_max > e_min");
  if ((e_max - e_min) * t0 > kTwoPi * (1.0 + 1e-12)) {
    throw ConfigError("qpe: window width * t0 exceeds 2 pi (aliasing)");
  }
  if (shots < 1) throw ConfigError("qpe: shots must be >= 1");
}

double QpeConfig::resolution() const { return kTwoPi / (static_cast<double>(bins()) * t0); }

std::int64_t EnergyHistogram::total() const {
  std::int64_t s = 0;
  for (std::int64_t c : counts) s += c;
  return s;
}

std::int64_t EnergyHistogram::modal_bin() const {
  return std::max_element(counts.begin(), counts.end()) - counts.begin();
}

std::string EnergyHistogram::to_csv(const std::string& config_json) const {
  io::CsvTable t({"bin", "phase", "energy", "count"}, config_json);
  const double m = static_cast<double>(config.bins());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const auto bi = static_cast<std::int64_t>(b);
    t.add_row({io::cell(bi), io::cell(static_cast<double>(b) / m), io::cell(config.bin_energy(bi)),
               io::cell(counts[b])});
  }
  return t.str();
}

EnergyHistogram run_ladder(const QpeConfig& cfg, const StateVector& input, const UnitaryStep& u,
                           StateVector* joint_out) {
  cfg.validate();
  const int n = input.n_qubits();
  StateVector joint = embed_input(input, cfg.ancillas);  // checks size
  const std::int64_t m = cfg.bins();
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  const cplx window = std::polar(1.0, cfg.window_phase());
  StateVector cur = input;
  cur.absorb_global_phase();
  auto& dst = joint.amplitudes();
  for (std::int64_t j = 0; j < m; ++j) {
    const auto& src = cur.amplitudes();
    const std::uint64_t base = static_cast<std::uint64_t>(j) << n;
    for (std::uint64_t i = 0; i < src.size(); ++i) dst[base | i] = src[i] * norm;
    if (j + 1 == m) break;
    u(cur);
    cur.absorb_global_phase();
    for (cplx& a : cur.amplitudes()) a *= window;
  }
  qft(joint, ancilla_span(n, cfg.ancillas), false, false);
  EnergyHistogram h = sample_ancillas(cfg, joint, n);
  if (joint_out) *joint_out = std::move(joint);
  return h;
}

std::vector<double> spectral_probabilities(const QpeConfig& cfg,
                                           const oracle::SectorSpectrum& spec,
                                           const std::vector<cplx>& input) {
  cfg.validate();
  const Eigen::VectorXcd c = spec.coefficients(input);
  const std::int64_t m = cfg.bins();
  std::vector<double> p(static_cast<std::size_t>(m), 0.0);
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double w = std::norm(c[k]);
    if (w < 1e-30) continue;
    const double phi = (spec.energies()[k] - cfg.e_min) * cfg.t0;
    for (std::int64_t b = 0; b < m; ++b) {
      p[b] += w * std::norm(kernel(m, kTwoPi * b / static_cast<double>(m) - phi));
    }
  }
  return p;
}

EnergyHistogram run_spectral(const QpeConfig& cfg, const oracle::SectorSpectrum& spec,
                             const std::vector<cplx>& input) {
  EnergyHistogram h;
  h.config = cfg;
  h.counts = sample_distribution(spectral_probabilities(cfg, spec, input), cfg.shots, cfg.seed);
  return h;
}

std::vector<cplx> spectral_collapse(const QpeConfig& cfg, const oracle::SectorSpectrum& spec,
                                    const std::vector<cplx>& input, std::int64_t m) {
  cfg.validate();
  if (m < 0 || m >= cfg.bins()) throw ConfigError("qpe: bin out of range");
  Eigen::VectorXcd c = spec.coefficients(input);
  const double target = kTwoPi * m / static_cast<double>(cfg.bins());
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double phi = (spec.energies()[k] - cfg.e_min) * cfg.t0;
    c[k] *= kernel(cfg.bins(), target - phi);
  }
  const double nrm = c.norm();
  if (nrm == 0.0) throw NumericError("qpe: bin has zero probability");
  return spec.full_state(c / nrm);
}

EnergyHistogram run_controlled(const QpeConfig& cfg, const StateVector& input, const Circuit& step,
                               int repetitions, bool promote_global_phase, StateVector* joint_out) {
  cfg.validate();
  if (repetitions < 1) throw ConfigError("qpe: repetitions must be >= 1");
  const int n = input.n_qubits();
  if (step.n_qubits > n) throw LayoutError("qpe: step circuit wider than the input state");
  StateVector joint = embed_input(input, cfg.ancillas);
  Circuit body;
  body.n_qubits = n;
  for (const Gate& g : step.gates) {
    if (g.kind == GateKind::kGlobalPhase && !promote_global_phase) continue;
    body.add(g);
  }
  for (int k = 0; k < cfg.ancillas; ++k) apply(joint, Gate::h(n + k));
  for (int k = 0; k < cfg.ancillas; ++k) {
    Circuit ck = body.controlled(n + k);
    ck.n_qubits = n + cfg.ancillas;
    const std::int64_t reps = (std::int64_t{1} << k) * repetitions;
    for (std::int64_t r = 0; r < reps; ++r) run(joint, ck);
    const double w = std::ldexp(cfg.window_phase(), k);
    if (w != 0.0) apply(joint, Gate::phase(n + k, -w));
  }
  joint.absorb_global_phase();
  qft(joint, ancilla_span(n, cfg.ancillas), false, false);
  EnergyHistogram h = sample_ancillas(cfg, joint, n);
  if (joint_out) *joint_out = std::move(joint);
  return h;
}

EnergyHistogram run_iterative(const QpeConfig& cfg, const StateVector& input, const UnitaryStep& u) {
  cfg.validate();
  EnergyHistogram h;
  h.config = cfg;
  h.counts.assign(static_cast<std::size_t>(cfg.bins()), 0);
  const int a = cfg.ancillas;
  for (std::int64_t shot = 0; shot < cfg.shots; ++shot) {
    StateVector psi = input;
    psi.absorb_global_phase();
    std::int64_t m = 0;
    for (int k = a - 1; k >= 0; --k) {
      StateVector v = psi;
      for (std::int64_t r = 0; r < (std::int64_t{1} << k); ++r) u(v);
      v.absorb_global_phase();
      // Bits already known are j < a-1-k; cancel their contribution.
      double omega_k = std::ldexp(cfg.window_phase(), k);
      for (int j = 0; j < a - 1 - k; ++j) {
        if ((m >> j) & 1) omega_k += kTwoPi * std::ldexp(1.0, j + k - a);
      }
      const cplx ph = std::polar(1.0, omega_k);
      auto& pa = psi.amplitudes();
      const auto& va = v.amplitudes();
      std::vector<cplx> b0(pa.size()), b1(pa.size());
      double p0 = 0.0;
      for (std::size_t i = 0; i < pa.size(); ++i) {
        b0[i] = 0.5 * (pa[i] + ph * va[i]);
        b1[i] = 0.5 * (pa[i] - ph * va[i]);
        p0 += std::norm(b0[i]);
      }
      const double r = counter_uniform(cfg.seed, static_cast<std::uint64_t>(shot) * 64 + k);
      const bool one = r >= p0;
      const std::vector<cplx>& keep = one ? b1 : b0;
      const double nrm = std::sqrt(one ? 1.0 - p0 : p0);
      for (std::size_t i = 0; i < pa.size(); ++i) pa[i] = keep[i] / nrm;
      if (one) m |= std::int64_t{1} << (a - 1 - k);
    }
    ++h.counts[static_cast<std::size_t>(m)];
  }
  return h;
}

StateVector collapse(const StateVector& joint, int n_system, std::int64_t m) {
  StateVector s(n_system);
  auto& dst = s.amplitudes();
  const auto& src = joint.amplitudes();
  const std::uint64_t base = static_cast<std::uint64_t>(m) << n_system;
  if (base + dst.size() > src.size()) throw ConfigError("qpe: bin out of range");
  double nrm = 0.0;
  for (std::uint64_t i = 0; i < dst.size(); ++i) {
    dst[i] = src[base | i];
    nrm += std::norm(dst[i]);
  }
  if (nrm == 0.0) throw NumericError("qpe: bin has zero probability");
  for (cplx& a : dst) a /= std::sqrt(nrm);
  return s;
}

int PolaronConfig::trotter_steps() const {
  return std::max(1, static_cast<int>(std::ceil(steps_per_unit * qpe.t0 - 1e-9)));
}

void PolaronConfig::validate() const {
  qpe.validate();
  if (n_x < 2 || n_x > 8) throw ConfigError("polaron: n_x must lie in [2, 8]");
  if (!(omega > 0.0) || !(t >= 0.0) || !(alpha >= 0.0)) {
    throw ConfigError("polaron: need omega > 0, t >= 0, alpha >= 0");
  }
  if (alpha > 0.0 && t == 0.0) throw ConfigError("polaron: alpha needs t > 0");
  if (steps_per_unit < 1) throw ConfigError("polaron: steps_per_unit must be >= 1");
}

std::string PolaronConfig::to_json() const {
  json j{{"t", t},
         {"omega", omega},
         {"alpha", alpha},
         {"n_x", n_x},
         {"steps_per_unit", steps_per_unit},
         {"evolution", evolution_name(evolution)},
         {"input", input_name(input)},
         {"qpe", qpe_json(qpe)}};
  return j.dump();
}

PolaronConfig PolaronConfig::from_json(const std::string& text) {
  PolaronConfig c;
  try {
    const json j = json::parse(text);
    c.t = j.value("t", c.t);
    c.omega = j.value("omega", c.omega);
    c.alpha = j.value("alpha", c.alpha);
    c.n_x = j.value("n_x", c.n_x);
    c.steps_per_unit = j.value("steps_per_unit", c.steps_per_unit);
    const std::string ev = j.value("evolution", std::string("trotter"));
    if (ev != "trotter" && ev != "exact") throw ConfigError("polaron: evolution must be trotter or exact");
    c.evolution = ev == "exact" ? Evolution::kExact : Evolution::kTrotter;
    const std::string in = j.value("input", std::string("displaced"));
    if (in != "displaced" && in != "plain") throw ConfigError("polaron: input must be displaced or plain");
    c.input = in == "plain" ? InputState::kPlain : InputState::kDisplaced;
    const json& q = j.at("qpe");
    c.qpe.ancillas = q.at("ancillas").get<int>();
    c.qpe.t0 = q.at("t0").get<double>();
    c.qpe.e_min = q.at("e_min").get<double>();
    c.qpe.e_max = q.at("e_max").get<double>();
    c.qpe.shots = q.at("shots").get<std::int64_t>();
    c.qpe.seed = q.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("polaron config json: ") + e.what());
  }
  c.validate();
  return c;
}

StateVector polaron_input(const QubitLayout& l, double g, double omega, InputState kind) {
  if (l.fermion_qubits.size() != 2 || l.boson_registers.size() != 2) {
    throw LayoutError("polaron input needs 2 orbitals and 2 registers");
  }
  StateVector s(l.total_qubits);
  // (|e=0> + |e=1>)/sqrt(2): X on orbital 0, H on orbital 1, CNOT 1 -> 0.
  apply(s, Gate::x(l.fermion(0)));
  apply(s, Gate::h(l.fermion(1)));
  apply(s, Gate::cnot(l.fermion(1), l.fermion(0)));
  prep::prepare_gaussian_exact(s, l.reg(0));
  prep::prepare_gaussian_exact(s, l.reg(1));
  if (kind == InputState::kDisplaced && g != 0.0) {
    const double shift = -g / (omega * omega);
    for (int i = 0; i < 2; ++i) {
      Term t;
      t.kind = TermKind::kDensP;
      t.sites = {i};
      t.orbitals = {i};
      t.coeff = 1.0;
      run(s, synth::synth_term(l, t, shift));
    }
  }
  s.absorb_global_phase();
  return s;
}

oracle::SectorSpectrum polaron_spectrum(const PolaronConfig& cfg) {
  const QubitLayout l = QubitLayout::standard(2, 2, cfg.n_x);
  return oracle::SectorSpectrum(holstein(cfg.t, cfg.g(), cfg.omega, 2), l,
                                oracle::one_electron_sector(l, true));
}

PolaronResult run_polaron(const PolaronConfig& cfg, const oracle::SectorSpectrum* spectrum) {
  cfg.validate();
  const QubitLayout l = QubitLayout::standard(2, 2, cfg.n_x);
  const double g = cfg.g();
  const StateVector input = polaron_input(l, g, cfg.omega, cfg.input);
  PolaronResult out;
  if (cfg.evolution == Evolution::kExact) {
    std::optional<oracle::SectorSpectrum> own;
    if (!spectrum) {
      own.emplace(polaron_spectrum(cfg));
      spectrum = &*own;
    }
    out.hist = run_spectral(cfg.qpe, *spectrum, input.amplitudes());
    out.collapsed = spectral_collapse(cfg.qpe, *spectrum, input.amplitudes(), out.hist.modal_bin());
    return out;
  }
  const HamiltonianSpec h = holstein(cfg.t, g, cfg.omega, 2);
  const int steps = cfg.trotter_steps();
  const synth::SynthesizedStep step = synth::synth_trotter_step(trotter_plan(h, cfg.qpe.t0, steps), l);
  const double shift_phase = -h.shift * cfg.qpe.t0;
  const UnitaryStep u = [&](StateVector& s) {
    for (int k = 0; k < steps; ++k) run(s, step.circuit);
    s.add_global_phase(shift_phase);
  };
  StateVector joint(1);
  out.hist = run_ladder(cfg.qpe, input, u, &joint);
  out.collapsed = collapse(joint, l.total_qubits, out.hist.modal_bin()).amplitudes();
  return out;
}

PhononDistribution phonon_distribution(const std::vector<cplx>& state, const QubitLayout& l,
                                       double omega, const QpeConfig& cfg) {
  cfg.validate();
  if (!(omega > 0.0)) throw ConfigError("phonon distribution: omega must be positive");
  if (state.size() != (std::size_t{1} << l.total_qubits)) {
    throw ConfigError("phonon distribution: state does not match the layout");
  }
  const int n = l.total_qubits;
  const int sites = static_cast<int>(l.boson_registers.size());
  StateVector input(n);
  input.amplitudes() = state;
  StateVector joint = embed_input(input, cfg.ancillas);
  for (int k = 0; k < cfg.ancillas; ++k) apply(joint, Gate::h(n + k));
  for (int s = 0; s < sites; ++s) {
    const grid::DiscreteOperators ops = grid::build_operators(grid::make_grid(l.reg(s).width));
    Eigen::MatrixXcd hp = 0.5 * ops.p * ops.p;
    hp.diagonal() += (0.5 * omega * omega * ops.x.array().square()).matrix().cast<cplx>();
    const ComplexEigen e = eigh(Eigen::MatrixXcd(0.5 * (hp + hp.adjoint())));
    for (int k = 0; k < cfg.ancillas; ++k) {
      const double tk = std::ldexp(cfg.t0, k);
      Eigen::VectorXcd ph(e.values.size());
      for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, -e.values[i] * tk);
      const Eigen::MatrixXcd uk = e.vectors * ph.asDiagonal() * e.vectors.adjoint();
      apply(joint, Gate::dense(l.register_qubits(s), uk).with_control(n + k));
    }
  }
  for (int k = 0; k < cfg.ancillas; ++k) {
    const double w = std::ldexp(cfg.window_phase(), k);
    if (w != 0.0) apply(joint, Gate::phase(n + k, -w));
  }
  qft(joint, ancilla_span(n, cfg.ancillas), false, false);
  PhononDistribution out;
  out.hist = sample_ancillas(cfg, joint, n);
  const int n_max = static_cast<int>(std::floor(cfg.e_max / omega - 0.5 * sites - 1e-9));
  out.z.assign(static_cast<std::size_t>(std::max(0, n_max) + 1), 0.0);
  std::int64_t kept = 0;
  for (std::int64_t b = 0; b < cfg.bins(); ++b) {
    const long nb = std::lround(cfg.bin_energy(b) / omega - 0.5 * sites);
    if (nb < 0 || nb > n_max) continue;
    out.z[static_cast<std::size_t>(nb)] += static_cast<double>(out.hist.counts[b]);
    kept += out.hist.counts[b];
  }
  if (kept > 0) {
    for (double& z : out.z) z /= static_cast<double>(kept);
  }
  return out;
}

}  // namespace fbsim::qpe
