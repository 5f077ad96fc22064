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

#include "fbsim/prep.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "fbsim/error.h"
#include "fbsim/grid.h"
#include "fbsim/model.h"
#include "fbsim/synth.h"

namespace fbsim::prep {
namespace {

using json = nlohmann::ordered_json;

QubitLayout single_register_layout(const Register& r, int n_qubits) {
  QubitLayout l;
  l.boson_registers = {Register{0, r.first, r.width}};
  l.total_qubits = n_qubits;
  l.validate();
  return l;
}

std::uint64_t register_mask(const Register& r) {
  return ((std::uint64_t{1} << r.width) - 1) << r.first;
}

std::vector<double> flatten(const VariationalSchedule& s) {
  std::vector<double> v;
  for (const StepAngles& st : s.steps) {
    v.push_back(st.rho_p);
    v.push_back(st.rho_x);
    v.insert(v.end(), st.theta_z.begin(), st.theta_z.end());
    v.insert(v.end(), st.theta_x.begin(), st.theta_x.end());
    v.insert(v.end(), st.theta_y.begin(), st.theta_y.end());
  }
  return v;
}

void unflatten(VariationalSchedule& s, const std::vector<double>& v) {
  std::size_t k = 0;
  for (StepAngles& st : s.steps) {
    st.rho_p = v[k++];
    st.rho_x = v[k++];
    for (auto* arr : {&st.theta_z, &st.theta_x, &st.theta_y}) {
      for (double& a : *arr) a = v[k++];
    }
  }
}

double fidelity_of(const StateVector& s, const std::vector<cplx>& target) {
  cplx o = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) o += std::conj(target[i]) * s[i];
  return std::norm(o) / (s.norm() * s.norm());
}

}  // namespace

std::vector<cplx> gaussian_amplitudes(int n_x) {
  const grid::SampledBasis b = grid::sample_basis(grid::make_grid(n_x), 1);
  const Eigen::VectorXd chi = b.chi.col(0).normalized();
  return std::vector<cplx>(chi.data(), chi.data() + chi.size());
}

void prepare_gaussian_exact(StateVector& s, const Register& r) {
  const std::vector<cplx> chi = gaussian_amplitudes(r.width);
  const std::uint64_t mask = register_mask(r);
  auto& a = s.amplitudes();
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if ((i & mask) != 0 && a[i] != cplx(0.0)) {
      throw ConfigError("prepare_gaussian_exact: register is not in |0...0>");
    }
  }
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if ((i & mask) != 0) continue;
    const cplx base = a[i];
    if (base == cplx(0.0)) continue;
    for (std::uint64_t v = 0; v < chi.size(); ++v) a[i | (v << r.first)] = base * chi[v];
  }
}

Circuit gaussian_tree_circuit(const Register& r, int n_qubits) {
  const std::vector<cplx> chi = gaussian_amplitudes(r.width);
  const int n = r.width;
  // mass[level][prefix]: probability of the most significant `level` bits.
  std::vector<std::vector<double>> mass(n + 1);
  mass[n].resize(chi.size());
  for (std::size_t v = 0; v < chi.size(); ++v) mass[n][v] = std::norm(chi[v]);
  for (int lv = n - 1; lv >= 0; --lv) {
    mass[lv].resize(std::size_t{1} << lv);
    for (std::size_t p = 0; p < mass[lv].size(); ++p) {
      mass[lv][p] = mass[lv + 1][2 * p] + mass[lv + 1][2 * p + 1];
    }
  }
  Circuit c;
  c.n_qubits = n_qubits;
  for (int lv = 0; lv < n; ++lv) {
    const int target = r.first + n - 1 - lv;
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << lv); ++p) {
      const double m = mass[lv][p];
      const double theta = m > 0 ? 2.0 * std::acos(std::clamp(std::sqrt(mass[lv + 1][2 * p] / m), 0.0, 1.0)) : 0.0;
      // Controls: the lv bits above `target`; prefix bit j (from the top) is
      // bit (lv-1-j) of p. Zero bits are flipped around the rotation.
      std::vector<int> zeros;
      Gate g = Gate::ry(target, theta);
      for (int j = 0; j < lv; ++j) {
        const int q = r.first + n - 1 - j;
        g.controls.push_back(q);
        if (((p >> (lv - 1 - j)) & 1) == 0) zeros.push_back(q);
      }
      for (int q : zeros) c.add(Gate::x(q));
      c.add(g);
      for (int q : zeros) c.add(Gate::x(q));
    }
  }
  return c;
}

TreeResources gaussian_tree_resources(int n_x) {
  TreeResources t;
  t.rotations = (std::int64_t{1} << n_x) - 1;
  t.max_controls = n_x - 1;
  for (int k = 1; k < n_x; ++k) t.two_qubit_gates += (std::int64_t{1} << k) * 2 * k * k;
  return t;
}

void VariationalSchedule::validate() const {
  if (n_x < 1) throw ConfigError("schedule: n_x must be >= 1");
  for (const StepAngles& st : steps) {
    if (static_cast<int>(st.theta_z.size()) != n_x || static_cast<int>(st.theta_x.size()) != n_x ||
        static_cast<int>(st.theta_y.size()) != n_x) {
      throw ConfigError("schedule: each step needs n_x angles per axis");
    }
    if (!std::isfinite(st.rho_p) || !std::isfinite(st.rho_x)) {
      throw ConfigError("schedule: non-finite rho");
    }
    for (const auto* arr : {&st.theta_z, &st.theta_x, &st.theta_y}) {
      for (double a : *arr) {
        if (!std::isfinite(a)) throw ConfigError("schedule: non-finite theta");
      }
    }
  }
}

VariationalSchedule initial_schedule(int n_x, int n_steps) {
  if (n_steps < 0) throw ConfigError("schedule: steps must be >= 0");
  VariationalSchedule s;
  s.n_x = n_x;
  StepAngles st;
  st.theta_z.assign(n_x, 0.0);
  st.theta_x.assign(n_x, 0.0);
  st.theta_y.assign(n_x, 0.0);
  s.steps.assign(n_steps, st);
  return s;
}

Circuit variational_circuit(const Register& r, int n_qubits, const VariationalSchedule& sched) {
  sched.validate();
  if (sched.n_x != r.width) throw ConfigError("schedule: n_x does not match the register");
  const QubitLayout l = single_register_layout(r, n_qubits);
  Circuit c;
  c.n_qubits = n_qubits;
  // |x = 0> is register value N/2: only the top bit set.
  c.add(Gate::x(r.first + r.width - 1));
  Term p2{TermKind::kP2, {0}, {}, 1.0};
  Term x2{TermKind::kX2, {0}, {}, 1.0};
  for (const StepAngles& st : sched.steps) {
    c.append(synth::synth_term(l, p2, st.rho_p));
    c.append(synth::synth_term(l, x2, st.rho_x));
    for (int k = 0; k < r.width; ++k) {
      const int q = r.first + k;
      c.add(Gate::rz(q, st.theta_z[k]));
      c.add(Gate::rx(q, st.theta_x[k]));
      c.add(Gate::ry(q, st.theta_y[k]));
    }
  }
  return c;
}

PreparedState prepare_gaussian_variational(const VariationalSchedule& sched) {
  if (sched.n_x < 2 || sched.n_x > 8) throw ConfigError("variational prep: n_x must lie in [2, 8]");
  const Register r{0, 0, sched.n_x};
  PreparedState out{StateVector(sched.n_x), 0.0};
  run(out.state, variational_circuit(r, sched.n_x, sched));
  out.state.absorb_global_phase();
  out.fidelity = fidelity_of(out.state, gaussian_amplitudes(sched.n_x));
  return out;
}

VariationalSchedule optimize_gaussian(int n_x, int n_steps, std::uint64_t seed,
                                      const SpsaOptions& opts) {
  if (n_x < 4 || n_x > 8) throw ConfigError("optimize_gaussian: n_x must lie in [4, 8]");
  if (n_steps < 1) throw ConfigError("optimize_gaussian: need at least one step");
  if (opts.budget < 2 || opts.restarts < 1) throw ConfigError("optimize_gaussian: empty budget");
  const std::vector<cplx> target = gaussian_amplitudes(n_x);
  const Register r{0, 0, n_x};
  auto loss = [&](VariationalSchedule& s, const std::vector<double>& v) {
    unflatten(s, v);
    StateVector sv(n_x);
    run(sv, variational_circuit(r, n_x, s));
    return fidelity_of(sv, target);
  };

  const int iterations = opts.budget / 2;
  const double big_a = opts.stability_fraction * iterations;
  VariationalSchedule best;
  bool have_best = false;
  for (int rs = 0; rs < opts.restarts; ++rs) {
    const std::uint64_t rseed = seed + static_cast<std::uint64_t>(rs);
    VariationalSchedule s = initial_schedule(n_x, n_steps);
    s.seed = rseed;
    s.spsa = opts;
    std::vector<double> v = flatten(s);
    std::vector<double> best_v = v;
    double best_f = -1.0;
    std::uint64_t counter = 0;
    std::vector<double> plus(v.size()), minus(v.size()), delta(v.size());
    for (int k = 0; k < iterations; ++k) {
      const double ak = opts.a / std::pow(k + 1 + big_a, opts.alpha);
      const double ck = opts.c / std::pow(k + 1, opts.gamma);
      for (std::size_t j = 0; j < v.size(); ++j) {
        delta[j] = counter_uniform(rseed, counter++) < 0.5 ? -1.0 : 1.0;
        plus[j] = v[j] + ck * delta[j];
        minus[j] = v[j] - ck * delta[j];
      }
      const double fp = loss(s, plus);
      const double fm = loss(s, minus);
      if (fp > best_f) { best_f = fp; best_v = plus; }
      if (fm > best_f) { best_f = fm; best_v = minus; }
      s.best_trace.push_back(best_f);
      // Minimize 1 - F.
      const double gk = ((1.0 - fp) - (1.0 - fm)) / (2.0 * ck);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= ak * gk * delta[j];
    }
    unflatten(s, best_v);
    s.fidelity = best_f;
    if (!have_best || s.fidelity > best.fidelity) {
      best = std::move(s);
      have_best = true;
    }
  }
  return best;
}

std::string schedule_to_json(const VariationalSchedule& s) {
  json j;
  j["n_x"] = s.n_x;
  j["n_steps"] = s.n_steps();
  j["seed"] = s.seed;
  j["spsa"] = {{"a", s.spsa.a},
               {"c", s.spsa.c},
               {"alpha", s.spsa.alpha},
               {"gamma", s.spsa.gamma},
               {"stability_fraction", s.spsa.stability_fraction},
               {"budget", s.spsa.budget},
               {"restarts", s.spsa.restarts}};
  json steps = json::array();
  for (const StepAngles& st : s.steps) {
    steps.push_back({{"rho_p", st.rho_p},
                     {"rho_x", st.rho_x},
                     {"theta_z", st.theta_z},
                     {"theta_x", st.theta_x},
                     {"theta_y", st.theta_y}});
  }
  j["steps"] = steps;
  j["fidelity"] = s.fidelity;
  j["best_trace"] = s.best_trace;
  return j.dump(2);
}

VariationalSchedule schedule_from_json(const std::string& text) {
  VariationalSchedule s;
  try {
    const json j = json::parse(text);
    s.n_x = j.at("n_x").get<int>();
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("spsa")) {
      const json& o = j["spsa"];
      s.spsa.a = o.value("a", s.spsa.a);
      s.spsa.c = o.value("c", s.spsa.c);
      s.spsa.alpha = o.value("alpha", s.spsa.alpha);
      s.spsa.gamma = o.value("gamma", s.spsa.gamma);
      s.spsa.stability_fraction = o.value("stability_fraction", s.spsa.stability_fraction);
      s.spsa.budget = o.value("budget", s.spsa.budget);
      s.spsa.restarts = o.value("restarts", s.spsa.restarts);
    }
    for (const json& st : j.at("steps")) {
      StepAngles a;
      a.rho_p = st.at("rho_p").get<double>();
      a.rho_x = st.at("rho_x").get<double>();
      a.theta_z = st.at("theta_z").get<std::vector<double>>();
      a.theta_x = st.at("theta_x").get<std::vector<double>>();
      a.theta_y = st.at("theta_y").get<std::vector<double>>();
      s.steps.push_back(std::move(a));
    }
    s.fidelity = j.value("fidelity", 0.0);
    if (j.contains("best_trace")) s.best_trace = j["best_trace"].get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schedule json: ") + e.what());
  }
  s.validate();
  return s;
}

void prepare_fermion_product(StateVector& s, const QubitLayout& l,
                             const std::vector<int>& orbitals) {
  std::vector<int> seen;
  for (int o : orbitals) {
    if (o < 0 || o >= static_cast<int>(l.fermion_qubits.size())) {
      throw LayoutError("prepare_fermion_product: orbital " + std::to_string(o) + " out of range");
    }
    if (std::find(seen.begin(), seen.end(), o) != seen.end()) {
      throw ConfigError("prepare_fermion_product: orbital " + std::to_string(o) + " repeated");
    }
    seen.push_back(o);
    apply(s, Gate::x(l.fermion(o)));
  }
}

}  // namespace fbsim::prep
