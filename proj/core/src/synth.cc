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

#include "fbsim/synth.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>

#include "json.hpp"

#include "fbsim/error.h"
#include "fbsim/grid.h"
#include "fbsim/linalg.h"

namespace fbsim::synth {
namespace {

// value = c0 + sum_r w[r] * b(qubits[r])
struct Affine {
  std::vector<int> qubits;
  std::vector<double> w;
  double c0 = 0.0;
};

// Multilinear polynomial in qubit bits: sorted qubit set -> coefficient.
using Poly = std::map<std::vector<int>, double>;

double register_delta(const Register& r) {
  return std::sqrt(2.0 * std::numbers::pi / static_cast<double>(std::int64_t{1} << r.width));
}

Affine affine_x(const Register& r) {
  const double d = register_delta(r);
  Affine a;
  for (int b = 0; b < r.width; ++b) {
    a.qubits.push_back(r.first + b);
    a.w.push_back(d * std::ldexp(1.0, b));
  }
  a.c0 = -d * std::ldexp(1.0, r.width - 1);
  return a;
}

// Two's-complement reading of the register in the momentum frame.
Affine affine_p(const Register& r) {
  const double d = register_delta(r);
  Affine a;
  for (int b = 0; b < r.width; ++b) {
    a.qubits.push_back(r.first + b);
    a.w.push_back(b == r.width - 1 ? -d * std::ldexp(1.0, b) : d * std::ldexp(1.0, b));
  }
  return a;
}

Affine affine_number(int q) {
  Affine a;
  a.qubits = {q};
  a.w = {1.0};
  return a;
}

Affine affine(const Register& r, Quadrature q) {
  return q == Quadrature::kX ? affine_x(r) : affine_p(r);
}

Poly multiply(const Poly& p, const Affine& a) {
  Poly out;
  for (const auto& [mono, coef] : p) {
    if (a.c0 != 0.0) out[mono] += coef * a.c0;
    for (std::size_t r = 0; r < a.qubits.size(); ++r) {
      std::vector<int> m = mono;
      if (!std::binary_search(m.begin(), m.end(), a.qubits[r])) {
        m.insert(std::upper_bound(m.begin(), m.end(), a.qubits[r]), a.qubits[r]);
      }
      out[m] += coef * a.w[r];
    }
  }
  return out;
}

Poly product(const std::vector<Affine>& factors) {
  Poly p;
  p[{}] = 1.0;
  for (const Affine& a : factors) p = multiply(p, a);
  return p;
}

// exp(-i theta poly(b)).
void emit_phase_poly(Circuit& c, const Poly& p, double theta) {
  for (const auto& [mono, coef] : p) {
    if (coef == 0.0) continue;
    const double ang = theta * coef;
    switch (mono.size()) {
      case 0:
        c.add(Gate::global_phase(-ang));
        break;
      case 1:
        c.add(Gate::phase(mono[0], ang));
        break;
      case 2:
        c.add(Gate::cphase(mono[0], mono[1], ang));
        break;
      default:
        c.add(Gate::multi_cphase(mono, ang));
        break;
    }
  }
}

Circuit empty_circuit(const QubitLayout& l) {
  Circuit c;
  c.n_qubits = l.total_qubits;
  return c;
}

// Momentum frame for a register: p = Q diag(p_n) Q^dagger, so the inverse
// transform comes first in time.
void enter_momentum(Circuit& c, const QubitLayout& l, int site) {
  c.add(Gate::qft(l.register_qubits(site), /*inverse=*/true));
}

void leave_momentum(Circuit& c, const QubitLayout& l, int site) {
  c.add(Gate::qft(l.register_qubits(site), /*inverse=*/false));
}

struct Factor {
  int site = -1;  // -1: fermion number of `qubit`
  int qubit = -1;
  Quadrature q = Quadrature::kX;
};

// exp(-i theta prod factors), with momentum frames opened around P factors.
Circuit diagonal_product(const QubitLayout& l, const std::vector<Factor>& fs,
                         double theta) {
  Circuit c = empty_circuit(l);
  std::vector<Affine> aff;
  std::vector<int> p_sites;
  for (const Factor& f : fs) {
    if (f.site < 0) {
      aff.push_back(affine_number(f.qubit));
    } else {
      aff.push_back(affine(l.reg(f.site), f.q));
      if (f.q == Quadrature::kP &&
          std::find(p_sites.begin(), p_sites.end(), f.site) == p_sites.end()) {
        p_sites.push_back(f.site);
      }
    }
  }
  for (int s : p_sites) enter_momentum(c, l, s);
  emit_phase_poly(c, product(aff), theta);
  for (auto it = p_sites.rbegin(); it != p_sites.rend(); ++it) leave_momentum(c, l, *it);
  return c;
}

enum class Basis { kX, kY };

void basis_in(Circuit& c, int q, Basis b) {
  if (b == Basis::kX) {
    c.add(Gate::h(q));
  } else {
    c.add(Gate::rx_half_pi(q, false));
  }
}

void basis_out(Circuit& c, int q, Basis b) {
  if (b == Basis::kX) {
    c.add(Gate::h(q));
  } else {
    c.add(Gate::rx_half_pi(q, true));
  }
}

// exp(-i (sign/2) B  P_i Z_{i+1} .. Z_{j-1} P_j) with P in {X, Y} per basis
// and B = theta0 + sum_m theta_m A_m diagonal in the current boson frame.
void pauli_string_block(Circuit& c, const QubitLayout& l, int i, int j,
                        Basis bi, Basis bj, double sign, double theta0,
                        const std::vector<SiteAngle>& sites) {
  const int qi = l.fermion(i), qj = l.fermion(j);
  basis_in(c, qi, bi);
  basis_in(c, qj, bj);
  for (int k = i; k < j; ++k) c.add(Gate::cnot(l.fermion(k), l.fermion(k + 1)));
  // exp(-i (sign/2) B Z) = Rz(-sign B) with Rz(t) = exp(+i t Z / 2).
  double constant = theta0;
  for (const SiteAngle& s : sites) constant += s.theta * affine(l.reg(s.site), s.q).c0;
  c.add(Gate::rz(qj, -sign * constant));
  for (const SiteAngle& s : sites) {
    const Affine a = affine(l.reg(s.site), s.q);
    for (std::size_t r = 0; r < a.qubits.size(); ++r) {
      c.add(Gate::rz(qj, -sign * s.theta * a.w[r]).with_control(a.qubits[r]));
    }
  }
  for (int k = j - 1; k >= i; --k) c.add(Gate::cnot(l.fermion(k), l.fermion(k + 1)));
  basis_out(c, qi, bi);
  basis_out(c, qj, bj);
}

std::vector<int> momentum_sites(const std::vector<SiteAngle>& sites) {
  std::vector<int> out;
  for (const SiteAngle& s : sites) {
    if (s.q == Quadrature::kP &&
        std::find(out.begin(), out.end(), s.site) == out.end()) {
      out.push_back(s.site);
    }
  }
  return out;
}

void check_pair(int i, int j) {
  if (i >= j) {
    throw ConfigError("fermion pair must satisfy i < j (got " +
                      std::to_string(i) + ", " + std::to_string(j) + ")");
  }
}

}  // namespace

Circuit synth_X(const QubitLayout& l, int site, double theta) {
  return diagonal_product(l, {{site, -1, Quadrature::kX}}, theta);
}

Circuit synth_X2(const QubitLayout& l, int site, double theta) {
  return diagonal_product(l, {{site, -1, Quadrature::kX}, {site, -1, Quadrature::kX}},
                          theta);
}

Circuit synth_XX(const QubitLayout& l, int site_a, int site_b, double theta) {
  if (site_a == site_b) {
    throw ConfigError("XX needs distinct sites; use synth_X2 for one site");
  }
  return diagonal_product(l, {{site_a, -1, Quadrature::kX}, {site_b, -1, Quadrature::kX}},
                          theta);
}

Circuit synth_momentum_variant(const QubitLayout& l, TermKind kind,
                               const std::vector<int>& sites, double theta) {
  switch (kind) {
    case TermKind::kP:
      return diagonal_product(l, {{sites.at(0), -1, Quadrature::kP}}, theta);
    case TermKind::kP2:
      return diagonal_product(
          l, {{sites.at(0), -1, Quadrature::kP}, {sites.at(0), -1, Quadrature::kP}}, theta);
    case TermKind::kPP:
      if (sites.at(0) == sites.at(1)) throw ConfigError("PP needs distinct sites");
      return diagonal_product(
          l, {{sites[0], -1, Quadrature::kP}, {sites[1], -1, Quadrature::kP}}, theta);
    case TermKind::kXPCross:
      if (sites.at(0) == sites.at(1)) {
        throw ConfigError("XP_cross needs distinct sites; use synth_xp_self");
      }
      return diagonal_product(
          l, {{sites[0], -1, Quadrature::kX}, {sites[1], -1, Quadrature::kP}}, theta);
    default:
      throw ConfigError(std::string("not a momentum variant: ") + term_name(kind));
  }
}

Circuit synth_density(const QubitLayout& l, int orbital, int site, double theta,
                      Quadrature q) {
  return diagonal_product(l, {{-1, l.fermion(orbital), Quadrature::kX}, {site, -1, q}},
                          theta);
}

Circuit synth_hopping(const QubitLayout& l, int i, int j,
                      const std::vector<SiteAngle>& sites, double theta0) {
  check_pair(i, j);
  Circuit c = empty_circuit(l);
  const std::vector<int> ps = momentum_sites(sites);
  for (int s : ps) enter_momentum(c, l, s);
  // c_i^+ c_j + h.c. = (X_i X_j + Y_i Y_j) Z.. / 2; the two strings commute.
  pauli_string_block(c, l, i, j, Basis::kX, Basis::kX, 1.0, theta0, sites);
  pauli_string_block(c, l, i, j, Basis::kY, Basis::kY, 1.0, theta0, sites);
  for (auto it = ps.rbegin(); it != ps.rend(); ++it) leave_momentum(c, l, *it);
  return c;
}

Circuit synth_current(const QubitLayout& l, int i, int j, int site,
                      double theta, Quadrature q) {
  check_pair(i, j);
  Circuit c = empty_circuit(l);
  const std::vector<SiteAngle> sites = {{site, theta, q}};
  if (q == Quadrature::kP) enter_momentum(c, l, site);
  // i(c_i^+ c_j - c_j^+ c_i) = (Y_i X_j - X_i Y_j) Z.. / 2
  pauli_string_block(c, l, i, j, Basis::kY, Basis::kX, 1.0, 0.0, sites);
  pauli_string_block(c, l, i, j, Basis::kX, Basis::kY, -1.0, 0.0, sites);
  if (q == Quadrature::kP) leave_momentum(c, l, site);
  return c;
}

Circuit synth_xp_self(const QubitLayout& l, int site, int u, int v,
                      double theta) {
  const Register& r = l.reg(site);
  if (r.width > 8) throw ConfigError("XP_self synthesis limited to n_x <= 8");
  if (u < 1 || v < 1) throw ConfigError("XP_self exponents must be >= 1");
  const grid::DiscreteOperators ops = grid::build_operators(grid::make_grid(r.width));
  const Eigen::Index n = ops.x.size();
  Eigen::MatrixXcd xu = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) xu(k, k) = std::pow(ops.x[k], u);
  Eigen::MatrixXcd pv = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 0; k < v; ++k) pv = pv * ops.p;
  Eigen::MatrixXcd hxp = xu * pv + pv * xu;
  hxp = 0.5 * (hxp + hxp.adjoint()).eval();
  const ComplexEigen e = eigh(hxp);
  Eigen::MatrixXcd phases = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k, k) = std::polar(1.0, -theta * e.values[k]);
  const std::vector<int> span = l.register_qubits(site);
  Circuit c = empty_circuit(l);
  c.add(Gate::dense(span, e.vectors.adjoint()));
  c.add(Gate::dense(span, phases));
  c.add(Gate::dense(span, e.vectors));
  return c;
}

Circuit synth_boson_product(const QubitLayout& l, const std::vector<int>& sites,
                            const std::string& ops, double theta) {
  if (sites.size() != ops.size() || sites.size() < 1 || sites.size() > 4) {
    throw ConfigError("boson product needs 1 to 4 sites with one op each");
  }
  if (std::set<int>(sites.begin(), sites.end()).size() != sites.size()) {
    throw ConfigError("boson product with repeated sites; route XP on one site "
                      "to synth_xp_self");
  }
  std::vector<Factor> fs;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (ops[k] != 'X' && ops[k] != 'P') throw ConfigError("boson product op must be X or P");
    fs.push_back({sites[k], -1, ops[k] == 'X' ? Quadrature::kX : Quadrature::kP});
  }
  return diagonal_product(l, fs, theta);
}

Circuit synth_term(const QubitLayout& l, const Term& t, double dt) {
  const double th = t.coeff * dt;
  switch (t.kind) {
    case TermKind::kX:
      return synth_X(l, t.sites.at(0), th);
    case TermKind::kX2:
      return synth_X2(l, t.sites.at(0), th);
    case TermKind::kXX:
      return synth_XX(l, t.sites.at(0), t.sites.at(1), th);
    case TermKind::kP:
    case TermKind::kP2:
    case TermKind::kPP:
    case TermKind::kXPCross:
      return synth_momentum_variant(l, t.kind, t.sites, th);
    case TermKind::kXPSelf:
      return synth_xp_self(l, t.sites.at(0), t.u, t.v, th);
    case TermKind::kProduct:
      return synth_boson_product(l, t.sites, t.ops, th);
    case TermKind::kDensX:
      return synth_density(l, t.orbitals.at(0), t.sites.at(0), th, Quadrature::kX);
    case TermKind::kDensP:
      return synth_density(l, t.orbitals.at(0), t.sites.at(0), th, Quadrature::kP);
    case TermKind::kHop:
      return synth_hopping(l, t.orbitals.at(0), t.orbitals.at(1), {}, th);
    case TermKind::kHopX:
      return synth_hopping(l, t.orbitals.at(0), t.orbitals.at(1),
                           {{t.sites.at(0), th, Quadrature::kX}}, 0.0);
    case TermKind::kHopP:
      return synth_hopping(l, t.orbitals.at(0), t.orbitals.at(1),
                           {{t.sites.at(0), th, Quadrature::kP}}, 0.0);
    case TermKind::kCurX:
      return synth_current(l, t.orbitals.at(0), t.orbitals.at(1), t.sites.at(0), th,
                           Quadrature::kX);
    case TermKind::kCurP:
      return synth_current(l, t.orbitals.at(0), t.orbitals.at(1), t.sites.at(0), th,
                           Quadrature::kP);
    case TermKind::kHopMultiX: {
      std::vector<SiteAngle> sa;
      for (std::size_t k = 0; k < t.sites.size(); ++k) {
        sa.push_back({t.sites[k], th * t.weights.at(k), Quadrature::kX});
      }
      return synth_hopping(l, t.orbitals.at(0), t.orbitals.at(1), sa, th * t.offset);
    }
    case TermKind::kFermionTwoBody:
      throw UnsupportedError(
          "fermion two-body terms have no circuit construction");
  }
  throw UnsupportedError("unknown term kind");
}

int cancel_qft_pairs(Circuit& c) {
  int removed = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < c.gates.size() && !changed; ++i) {
      const Gate& a = c.gates[i];
      if (a.kind != GateKind::kQFT) continue;
      const std::vector<int> qa = a.qubits();
      for (std::size_t k = i + 1; k < c.gates.size(); ++k) {
        const Gate& b = c.gates[k];
        const std::vector<int> qb = b.qubits();
        bool touches = false;
        for (int q : qb) {
          if (std::find(qa.begin(), qa.end(), q) != qa.end()) {
            touches = true;
            break;
          }
        }
        // Controlled global phases commute with everything on other qubits;
        // uncontrolled ones with everything.
        if (!touches) continue;
        if (b.kind == GateKind::kQFT && b.targets == a.targets &&
            b.controls == a.controls && b.centered == a.centered &&
            b.inverse != a.inverse) {
          c.gates.erase(c.gates.begin() + static_cast<std::ptrdiff_t>(k));
          c.gates.erase(c.gates.begin() + static_cast<std::ptrdiff_t>(i));
          ++removed;
          changed = true;
        }
        break;
      }
    }
  }
  return removed;
}

int circuit_depth(const Circuit& c) {
  std::vector<int> level(static_cast<std::size_t>(std::max(c.n_qubits, 1)), 0);
  int depth = 0;
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::kGlobalPhase && g.controls.empty()) continue;
    int d = 0;
    for (int q : g.qubits()) {
      if (q >= static_cast<int>(level.size())) level.resize(q + 1, 0);
      d = std::max(d, level[q]);
    }
    ++d;
    for (int q : g.qubits()) level[q] = d;
    depth = std::max(depth, d);
  }
  return depth;
}

SynthesizedStep synth_trotter_step(const TrotterPlan& plan, const QubitLayout& l) {
  SynthesizedStep s;
  s.circuit.n_qubits = l.total_qubits;
  // One synthesis per distinct term; the returned step is reused for every
  // Trotter step, so angle tables are computed once per (n_x, theta).
  for (const Term& t : plan.ordered_terms) {
    s.circuit.append(synth_term(l, t, plan.dt));
  }
  cancel_qft_pairs(s.circuit);
  s.classical_phase = s.circuit.classical_phase();
  s.gate_counts = s.circuit.census();
  s.gate_counts.erase("GlobalPhase");
  s.depth = circuit_depth(s.circuit);
  return s;
}

ResourceReport resource_report(const TrotterPlan& plan, const QubitLayout& l) {
  ResourceReport r;
  for (const Term& t : plan.ordered_terms) {
    const Circuit c = synth_term(l, t, plan.dt);
    TermResources tr;
    tr.kind = term_name(t.kind);
    for (const Gate& g : c.gates) {
      if (g.kind != GateKind::kGlobalPhase) ++tr.gates;
    }
    tr.depth = circuit_depth(c);
    r.terms.push_back(tr);
  }
  const SynthesizedStep step = synth_trotter_step(plan, l);
  r.totals = step.gate_counts;
  for (const auto& [k, n] : step.gate_counts) r.total_gates += n;
  r.total_depth = step.depth;
  return r;
}

std::string resource_report_json(const ResourceReport& r) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json per_kind = nlohmann::ordered_json::object();
  for (const TermResources& t : r.terms) {
    auto& e = per_kind[t.kind];
    if (e.is_null()) e = {{"gates", 0}, {"depth", 0}};
    e["gates"] = e.value("gates", std::int64_t{0}) + t.gates;
    e["depth"] = e.value("depth", 0) + t.depth;
  }
  j["terms"] = per_kind;
  j["totals"] = r.totals;
  j["total_gates"] = r.total_gates;
  j["total_depth"] = r.total_depth;
  return j.dump(2) + "\n";
}

Circuit lower_diagonal(const std::vector<int>& qubits,
                       const std::vector<double>& phases, int n_qubits) {
  const std::size_t k = qubits.size();
  if (phases.size() != (std::size_t{1} << k)) {
    throw ConfigError("phase table does not match qubit count");
  }
  // Moebius transform: phases[b] = sum_{S subset of b} kappa[S].
  std::vector<double> kappa = phases;
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t s = 0; s < kappa.size(); ++s) {
      if (s & (std::size_t{1} << b)) kappa[s] -= kappa[s ^ (std::size_t{1} << b)];
    }
  }
  Circuit c;
  c.n_qubits = n_qubits;
  Poly p;
  for (std::size_t s = 0; s < kappa.size(); ++s) {
    std::vector<int> mono;
    for (std::size_t b = 0; b < k; ++b) {
      if (s & (std::size_t{1} << b)) mono.push_back(qubits[b]);
    }
    std::sort(mono.begin(), mono.end());
    if (std::abs(kappa[s]) > 1e-15) p[mono] = kappa[s];
  }
  emit_phase_poly(c, p, 1.0);
  return c;
}

std::int64_t multicphase_cost(int m) {
  if (m <= 2) return 1;
  return 2 * static_cast<std::int64_t>(m - 1) * (m - 1);
}

XpSelfResources xp_self_resources(int n_x) {
  XpSelfResources r;
  const std::int64_t n = std::int64_t{1} << n_x;
  r.multicphase = n - 1;
  for (std::int64_t s = 1; s < n; ++s) {
    r.two_qubit_phase += multicphase_cost(std::popcount(static_cast<std::uint64_t>(s)));
  }
  r.basis_change = 2 * n * n;
  return r;
}

}  // namespace fbsim::synth
