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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any selected criterion fails.
//
//   acceptance [--only 1,2,9] [--out-dir DIR] [--seed N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fbsim/dense.h"
#include "fbsim/engine.h"
#include "fbsim/error.h"
#include "fbsim/grid.h"
#include "fbsim/io.h"
#include "fbsim/model.h"
#include "fbsim/oracle.h"
#include "fbsim/prep.h"
#include "fbsim/qpe.h"
#include "fbsim/synth.h"

namespace fbsim {
namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

Term term(TermKind kind, std::vector<int> sites, std::vector<int> orbitals = {},
          double coeff = 1.0) {
  Term t;
  t.kind = kind;
  t.sites = std::move(sites);
  t.orbitals = std::move(orbitals);
  t.coeff = coeff;
  return t;
}

// --- 1-3: the grid oscillator ---

Outcome spectrum_criterion() {
  Stopwatch w;
  const grid::Spectrum sp = grid::spectrum(grid::build_operators(grid::make_grid(6)));
  double worst = 0.0;
  for (int n = 0; n < 16; ++n) worst = std::max(worst, std::abs(sp.energies[n] - (n + 0.5)));
  const double s = w.seconds();
  return {worst <= 1e-6 && s < 1.0,
          "max |E_n-(n+1/2)| over n<16 = " + fmt(worst) + " (tol 1e-6), " + fmt(s) + " s (< 1)"};
}

Outcome commutator_criterion() {
  Stopwatch w;
  double worst_ratio = 0.0;
  int checked = 0;
  std::ostringstream ph;
  for (int nx : {5, 6, 7}) {
    const grid::DiscreteOperators ops = grid::build_operators(grid::make_grid(nx));
    const std::vector<double> r = grid::commutator_residuals(ops, grid::spectrum(ops));
    int nph = 0;
    while (nph < static_cast<int>(r.size()) && r[nph] < 1e-3) ++nph;
    ph << (nph == 0 ? "" : " ") << "N_ph(" << ops.grid.size << ")=" << nph;
    for (int n = 0; n < nph; ++n) {
      const double allowed = grid::error_bound(ops.grid.size, n) + 1e-10;
      worst_ratio = std::max(worst_ratio, r[n] / allowed);
      ++checked;
    }
  }
  const double s = w.seconds();
  return {worst_ratio <= 1.0 && s < 30.0,
          std::to_string(checked) + " levels," + ph.str() + ", max residual/allowed = " +
              fmt(worst_ratio) + " (<= 1), " + fmt(s) + " s (< 30)"};
}

Outcome dft_criterion() {
  Stopwatch w;
  const grid::SampledBasis b = grid::sample_basis(grid::make_grid(6), 15);
  const double dev = grid::dft_eigencheck(b, 16);
  const double s = w.seconds();
  return {dev <= 1e-6 && s < 1.0,
          "max ||F chi_n - (-i)^n chi_n|| over n<16 = " + fmt(dev) + " (tol 1e-6), " + fmt(s) + " s"};
}

// --- 4-5: synthesis and Trotter order ---

struct SynthCase {
  const char* name;
  int orbitals, oscillators, n_x;
  Term t;
};

std::vector<SynthCase> synth_cases() {
  Term xpself21 = term(TermKind::kXPSelf, {0});
  xpself21.u = 2;
  Term prod = term(TermKind::kProduct, {0, 1, 2});
  prod.ops = "XPX";
  Term multi = term(TermKind::kHopMultiX, {0, 1}, {0, 1});
  multi.offset = -0.4;
  multi.weights = {0.7, -1.1};
  // Single-register kinds at n_x = 4, multi-register kinds at n_x = 3.
  return {
      {"X", 0, 1, 4, term(TermKind::kX, {0})},
      {"X2", 0, 1, 4, term(TermKind::kX2, {0})},
      {"XX", 0, 2, 3, term(TermKind::kXX, {0, 1})},
      {"P", 0, 1, 4, term(TermKind::kP, {0})},
      {"P2", 0, 1, 4, term(TermKind::kP2, {0})},
      {"PP", 0, 2, 3, term(TermKind::kPP, {0, 1})},
      {"XPCross", 0, 2, 3, term(TermKind::kXPCross, {0, 1})},
      {"XPSelf", 0, 1, 4, term(TermKind::kXPSelf, {0})},
      {"XPSelf(2,1)", 0, 1, 4, xpself21},
      {"Product", 0, 3, 3, prod},
      {"DensX", 2, 1, 4, term(TermKind::kDensX, {0}, {1})},
      {"DensP", 2, 1, 4, term(TermKind::kDensP, {0}, {1})},
      {"Hop", 3, 0, 2, term(TermKind::kHop, {}, {0, 2})},
      {"HopX", 3, 1, 4, term(TermKind::kHopX, {0}, {0, 2})},
      {"HopP", 2, 1, 4, term(TermKind::kHopP, {0}, {0, 1})},
      {"CurX", 3, 1, 4, term(TermKind::kCurX, {0}, {0, 2})},
      {"CurP", 2, 1, 4, term(TermKind::kCurP, {0}, {0, 1})},
      {"HopMultiX", 2, 2, 3, multi},
  };
}

Outcome synthesis_criterion() {
  Stopwatch w;
  double worst = 0.0;
  std::string worst_name;
  std::set<std::string> kinds;
  for (const SynthCase& c : synth_cases()) {
    const QubitLayout l = QubitLayout::standard(c.orbitals, c.oscillators, c.n_x);
    kinds.insert(term_name(c.t.kind));
    for (double theta : {0.37, -1.3, 2.9}) {
      const Circuit circ = synth::synth_term(l, c.t, theta);
      const double err = dense::max_abs_diff(circuit_matrix(circ), dense::term_exponential(l, c.t, theta));
      if (err > worst) {
        worst = err;
        worst_name = c.name;
      }
    }
  }
  const double s = w.seconds();
  return {worst <= 1e-10 && s < 120.0,
          std::to_string(kinds.size()) + " term kinds, max operator error " + fmt(worst) + " (" +
              worst_name + ", tol 1e-10), " + fmt(s) + " s (< 120)"};
}

Outcome trotter_criterion() {
  Stopwatch w;
  const QubitLayout l = QubitLayout::standard(2, 2, 4);
  const HamiltonianSpec h = holstein(1.0, std::sqrt(2.0), 1.0, 2);
  const StateVector psi0 = qpe::polaron_input(l, std::sqrt(2.0), 1.0, qpe::InputState::kDisplaced);
  const Eigen::MatrixXcd u = dense::propagator(h, l, 1.0);
  const Eigen::Map<const Eigen::VectorXcd> v0(psi0.amplitudes().data(), psi0.dim());
  const Eigen::VectorXcd exact = u * v0;
  std::vector<double> err;
  for (int steps : {16, 32, 64}) {
    const synth::SynthesizedStep st = synth::synth_trotter_step(trotter_plan(h, 1.0, steps), l);
    StateVector s = psi0;
    for (int k = 0; k < steps; ++k) run(s, st.circuit);
    s.absorb_global_phase();
    const Eigen::Map<const Eigen::VectorXcd> v(s.amplitudes().data(), s.dim());
    err.push_back((v - exact).norm());
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  const double s = w.seconds();
  const bool ok = r1 >= 1.6 && r1 <= 2.4 && r2 >= 1.6 && r2 <= 2.4 && s < 60.0;
  return {ok, "errors " + fmt(err[0]) + ", " + fmt(err[1]) + ", " + fmt(err[2]) + "; ratios " +
                  fmt(r1) + ", " + fmt(r2) + " (2 +- 20%), " + fmt(s) + " s (< 60)"};
}

// --- 6, 7, 10: phase estimation ---

nlohmann::json golden(double alpha) {
  const std::string path = std::string(FBSIM_DATA_DIR) + "/golden/holstein_alpha_" + io::cell(alpha) + ".json";
  return nlohmann::json::parse(io::read_text(path));
}

qpe::PolaronConfig reference_config() {
  return qpe::PolaronConfig::from_json(
      io::read_text(std::string(FBSIM_DATA_DIR) + "/configs/qpe_reference.json"));
}

// Runs every criterion-6 configuration and writes each histogram to
// `dir`. Returns the per-run deviations from the golden energies.
struct PolaronRuns {
  std::vector<std::string> files;
  std::vector<std::string> lines;
  bool pass = true;
};

PolaronRuns polaron_runs(const std::string& dir) {
  PolaronRuns out;
  std::filesystem::create_directories(dir);
  for (double alpha : {0.5, 1.0, 2.0}) {
    const double e0 = golden(alpha).at("E0").get<double>();
    qpe::PolaronConfig c = reference_config();
    c.alpha = alpha;
    c.evolution = qpe::Evolution::kExact;
    const oracle::SectorSpectrum spec = qpe::polaron_spectrum(c);
    struct Run {
      const char* tag;
      qpe::Evolution ev;
      int ancillas;
      double tol;
    };
    for (const Run& r : {Run{"exact_a8", qpe::Evolution::kExact, 8, 7.9e-3},
                         Run{"exact_a12", qpe::Evolution::kExact, 12, 5e-4},
                         Run{"trotter_a8", qpe::Evolution::kTrotter, 8, 1e-2}}) {
      c.evolution = r.ev;
      c.qpe.ancillas = r.ancillas;
      const qpe::PolaronResult res = qpe::run_polaron(c, &spec);
      const double dev = std::abs(res.hist.modal_energy() - e0);
      const bool ok = dev <= r.tol;
      out.pass = out.pass && ok;
      const std::string file = dir + "/hist_alpha_" + io::cell(alpha) + "_" + r.tag + ".csv";
      io::write_text(file, res.hist.to_csv(c.to_json()));
      out.files.push_back(file);
      out.lines.push_back("alpha=" + io::cell(alpha) + " " + r.tag + ": |E_qpe-E_ed| = " + fmt(dev) +
                          " (tol " + fmt(r.tol) + ")" + (ok ? "" : " FAIL"));
    }
  }
  return out;
}

Outcome polaron_criterion(const std::string& dir, PolaronRuns& runs) {
  Stopwatch w;
  runs = polaron_runs(dir);
  std::string d;
  for (const std::string& l : runs.lines) d += "\n    " + l;
  return {runs.pass, "9 runs, " + fmt(w.seconds()) + " s" + d};
}

Outcome determinism_criterion(const std::string& dir, const PolaronRuns& first) {
  Stopwatch w;
  const PolaronRuns again = polaron_runs(dir + "/repeat");
  int same = 0;
  for (std::size_t k = 0; k < first.files.size(); ++k) {
    if (io::read_text(first.files[k]) == io::read_text(again.files[k])) ++same;
  }
  const bool ok = !first.files.empty() && same == static_cast<int>(first.files.size());
  return {ok, std::to_string(same) + "/" + std::to_string(first.files.size()) +
                  " histogram files byte-identical on repeat, " + fmt(w.seconds()) + " s"};
}

Outcome phonon_criterion() {
  Stopwatch w;
  qpe::QpeConfig zc;
  zc.ancillas = 6;
  zc.t0 = 2 * kPi / 16;
  zc.e_min = 0.0;
  zc.e_max = 16.0;
  zc.shots = 10000;
  zc.seed = 17;
  const QubitLayout l = QubitLayout::standard(2, 2, 6);
  auto qpe_zn = [&](double alpha) {
    qpe::PolaronConfig c = reference_config();
    c.alpha = alpha;
    c.evolution = qpe::Evolution::kExact;
    const qpe::PolaronResult r = qpe::run_polaron(c);
    return qpe::phonon_distribution(r.collapsed, l, c.omega, zc).z;
  };
  const std::vector<double> z = qpe_zn(1.0);
  const std::vector<double> zg = golden(1.0).at("Z").get<std::vector<double>>();
  double worst = 0.0;
  for (std::size_t n = 0; n < z.size(); ++n) worst = std::max(worst, std::abs(z[n] - zg[n]));
  double tail = 0.0;  // golden weight beyond the QPE window
  for (std::size_t n = z.size(); n < zg.size(); ++n) tail += zg[n];
  worst = std::max(worst, tail);
  const double z0_free = qpe_zn(0.0)[0];
  const double noise = 1.0 / std::sqrt(static_cast<double>(zc.shots));
  const bool ok = worst <= 0.02 && z0_free >= 1.0 - noise;
  return {ok, "alpha=1 max |Z_qpe(n)-Z_ed(n)| = " + fmt(worst) + " (tol 0.02, n<=" +
                  std::to_string(z.size() - 1) + "); g=0 Z(0) = " + io::cell(z0_free) + " (>= 1-" +
                  fmt(noise) + "), " + fmt(w.seconds()) + " s"};
}

// --- 8: Gaussian preparation ---

Outcome gaussian_criterion(std::uint64_t seed) {
  Stopwatch w;
  const prep::VariationalSchedule s3 = prep::optimize_gaussian(6, 3, seed);
  const prep::VariationalSchedule s6 = prep::optimize_gaussian(6, 6, seed);
  const double s = w.seconds();
  const bool ok = s3.fidelity >= 0.98 && s6.fidelity >= 0.995 && s < 300.0;
  return {ok, "N_S=3 fidelity " + io::cell(s3.fidelity) + " (>= 0.98), N_S=6 fidelity " +
                  io::cell(s6.fidelity) + " (>= 0.995), SPSA budget " +
                  std::to_string(s3.spsa.budget) + " x " + std::to_string(s3.spsa.restarts) +
                  " restarts, seed " + std::to_string(seed) + ", " + fmt(s) + " s (< 300)"};
}

// --- 9: closed-form validators ---

double binomial_brute_force(int n, int p) {
  // All n^n assignments of n bosons to n sites; count p bosons on site 0.
  std::int64_t total = 1, hits = 0;
  for (int k = 0; k < n; ++k) total *= n;
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t c = code;
    int on_site = 0;
    for (int k = 0; k < n; ++k) {
      on_site += (c % n == 0);
      c /= n;
    }
    hits += (on_site == p);
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

Outcome validators_criterion() {
  Stopwatch w;
  // Forced oscillator: H_h + g x on one register, f = g / sqrt(2).
  const double g = 0.5, t = 1.0;
  const int steps = 256;
  const QubitLayout l = QubitLayout::standard(0, 1, 6);
  HamiltonianSpec h;
  h.n_oscillators = 1;
  h.terms = {term(TermKind::kP2, {0}, {}, 0.5), term(TermKind::kX2, {0}, {}, 0.5),
             term(TermKind::kX, {0}, {}, g)};
  const synth::SynthesizedStep st = synth::synth_trotter_step(trotter_plan(h, t, steps), l);
  StateVector s(l.total_qubits);
  prep::prepare_gaussian_exact(s, l.reg(0));
  for (int k = 0; k < steps; ++k) run(s, st.circuit);
  s.absorb_global_phase();
  const oracle::ForcedEvolution fe =
      oracle::forced_evolution({0, 0.0}, [&](double) { return oracle::cplx(g / std::sqrt(2.0)); }, 1.0, t);
  const Eigen::VectorXcd a = oracle::grid_state(fe.state, grid::sample_basis(grid::make_grid(6), 40));
  const Eigen::Map<const Eigen::VectorXcd> v(s.amplitudes().data(), s.dim());
  const oracle::cplx ov = a.dot(v) / a.norm();
  const double overlap = std::abs(ov);
  const double phase_err = std::abs(std::arg(ov * std::polar(1.0, -fe.phase)));

  // Coherent-state rows.
  double poisson = 0.0;
  for (double zr : {0.3, 1.0, 2.5}) {
    const oracle::cplx z = std::polar(zr, 0.7);
    for (int n = 0; n <= 40; ++n) {
      poisson = std::max(poisson, std::abs(std::norm(oracle::displaced_overlap(n, 0, z)) -
                                           oracle::poisson_probability(n, zr * zr)));
    }
  }

  // Condensate occupation.
  double multinomial = 0.0, sum_dev = 0.0;
  for (int n = 1; n <= 8; ++n) {
    double sum = 0.0;
    for (int p = 0; p <= n; ++p) {
      const double q = oracle::condensate_local_distribution(n, p);
      multinomial = std::max(multinomial, std::abs(q - binomial_brute_force(n, p)));
      sum += q;
    }
    sum_dev = std::max(sum_dev, std::abs(sum - 1.0));
  }
  const double p10 = oracle::condensate_local_distribution(1000000, 10);
  const double bound = 1.0 / (std::tgamma(11.0) * std::exp(1.0));
  const bool ok = overlap >= 1.0 - 1e-3 && poisson <= 1e-10 && multinomial <= 1e-12 &&
                  p10 <= bound * (1.0 + 1e-5);
  return {ok, "forced |<n,z|psi>| = " + io::cell(overlap) + " (>= 0.999, phase error " +
                  fmt(phase_err) + "); Poisson rows " + fmt(poisson) + " (<= 1e-10); multinomial N<=8 " +
                  fmt(multinomial) + " (<= 1e-12, sum " + fmt(sum_dev) + "); N=1e6 p=10 " + fmt(p10) +
                  " vs 1/(10! e) = " + fmt(bound) + "; " + fmt(w.seconds()) + " s"};
}

}  // namespace
}  // namespace fbsim

int main(int argc, char** argv) {
  using namespace fbsim;
  CLI::App app("fbsim acceptance checks");
  std::vector<int> only;
  std::string out_dir = "acceptance_out";
  std::uint64_t seed = 7;
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  app.add_option("--out-dir", out_dir, "where histogram files go");
  app.add_option("--seed", seed, "SPSA seed for criterion 8");
  CLI11_PARSE(app, argc, argv);
  auto selected = [&](int k) { return only.empty() || std::count(only.begin(), only.end(), k) > 0; };

  PolaronRuns runs;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, spectrum_criterion},
      {2, commutator_criterion},
      {3, dft_criterion},
      {4, synthesis_criterion},
      {5, trotter_criterion},
      {6, [&] { return polaron_criterion(out_dir, runs); }},
      {7, phonon_criterion},
      {8, [&] { return gaussian_criterion(seed); }},
      {9, validators_criterion},
      {10,
       [&] {
         if (runs.files.empty()) runs = polaron_runs(out_dir);
         return determinism_criterion(out_dir, runs);
       }},
  };
  int failed = 0;
  for (const auto& [k, fn] : criteria) {
    if (!selected(k)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "CRITERION " << k << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
