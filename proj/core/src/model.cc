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

#include "fbsim/model.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <utility>

#include "json.hpp"

#include "fbsim/error.h"

namespace fbsim {
namespace {

using cplx = std::complex<double>;

constexpr std::array<std::pair<TermKind, const char*>, 18> kNames = {{
    {TermKind::kX, "X"},
    {TermKind::kX2, "X2"},
    {TermKind::kXX, "XX"},
    {TermKind::kP, "P"},
    {TermKind::kP2, "P2"},
    {TermKind::kPP, "PP"},
    {TermKind::kXPCross, "XP_cross"},
    {TermKind::kXPSelf, "XP_self"},
    {TermKind::kProduct, "Xk_product"},
    {TermKind::kDensX, "DensX"},
    {TermKind::kDensP, "DensP"},
    {TermKind::kHopX, "HopX"},
    {TermKind::kHopP, "HopP"},
    {TermKind::kCurX, "CurX"},
    {TermKind::kCurP, "CurP"},
    {TermKind::kHop, "Hop"},
    {TermKind::kHopMultiX, "HopMultiX"},
    {TermKind::kFermionTwoBody, "FermionTwoBody"},
}};

Term boson(TermKind k, std::vector<int> sites, double c) {
  Term t;
  t.kind = k;
  t.sites = std::move(sites);
  t.coeff = c;
  return t;
}

Term fermion_boson(TermKind k, std::vector<int> orbitals, int site, double c) {
  Term t;
  t.kind = k;
  t.orbitals = std::move(orbitals);
  t.sites = {site};
  t.coeff = c;
  return t;
}

void push_nonzero(std::vector<Term>& out, Term t) {
  if (t.coeff != 0.0) out.push_back(std::move(t));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ModelError(what);
}

}  // namespace

const char* term_name(TermKind kind) {
  for (const auto& [k, n] : kNames) {
    if (k == kind) return n;
  }
  return "?";
}

TermKind term_kind_from_name(const std::string& name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  throw ModelError("unknown term kind '" + name + "'");
}

TermGroup term_group(TermKind kind) {
  switch (kind) {
    case TermKind::kHop:
    case TermKind::kFermionTwoBody:
      return TermGroup::kFermion;
    case TermKind::kDensX:
    case TermKind::kDensP:
    case TermKind::kHopX:
    case TermKind::kHopP:
    case TermKind::kCurX:
    case TermKind::kCurP:
    case TermKind::kHopMultiX:
      return TermGroup::kFermionBoson;
    case TermKind::kX:
    case TermKind::kX2:
    case TermKind::kP:
    case TermKind::kP2:
    case TermKind::kXPSelf:
      return TermGroup::kBosonLocal;
    case TermKind::kXX:
    case TermKind::kPP:
    case TermKind::kXPCross:
    case TermKind::kProduct:
      return TermGroup::kBosonCross;
  }
  return TermGroup::kBosonCross;
}

void HamiltonianSpec::validate() const {
  require(n_orbitals >= 0 && n_oscillators >= 0, "negative register count");
  for (const Term& t : terms) {
    const std::string name = term_name(t.kind);
    for (int s : t.sites) {
      require(s >= 0 && s < n_oscillators,
              name + " term uses oscillator " + std::to_string(s) +
                  " outside [0, " + std::to_string(n_oscillators) + ")");
    }
    for (int o : t.orbitals) {
      require(o >= 0 && o < n_orbitals,
              name + " term uses orbital " + std::to_string(o) +
                  " outside [0, " + std::to_string(n_orbitals) + ")");
    }
    require(std::isfinite(t.coeff), name + " coefficient is not finite");
    const std::size_t ns = t.sites.size(), no = t.orbitals.size();
    const bool distinct_sites =
        std::set<int>(t.sites.begin(), t.sites.end()).size() == ns;
    const bool ordered_pair = no == 2 && t.orbitals[0] < t.orbitals[1];
    switch (t.kind) {
      case TermKind::kX:
      case TermKind::kX2:
      case TermKind::kP:
      case TermKind::kP2:
        require(ns == 1 && no == 0, name + " needs one site");
        break;
      case TermKind::kXPSelf:
        require(ns == 1 && no == 0, name + " needs one site");
        require(t.u >= 1 && t.v >= 1, name + " exponents must be >= 1");
        break;
      case TermKind::kXX:
      case TermKind::kPP:
      case TermKind::kXPCross:
        require(ns == 2 && no == 0 && distinct_sites,
                name + " needs two distinct sites");
        break;
      case TermKind::kProduct:
        require(ns >= 2 && ns <= 4 && no == 0 && distinct_sites,
                name + " needs 2 to 4 distinct sites");
        require(t.ops.size() == ns, name + " needs one op letter per site");
        for (char c : t.ops) require(c == 'X' || c == 'P', name + " ops must be X or P");
        break;
      case TermKind::kDensX:
      case TermKind::kDensP:
        require(ns == 1 && no == 1, name + " needs one orbital and one site");
        break;
      case TermKind::kHopX:
      case TermKind::kHopP:
      case TermKind::kCurX:
      case TermKind::kCurP:
        require(ns == 1 && ordered_pair, name + " needs orbitals i<j and one site");
        break;
      case TermKind::kHop:
        require(ns == 0 && ordered_pair, name + " needs orbitals i<j");
        break;
      case TermKind::kHopMultiX:
        require(ns >= 1 && ordered_pair && distinct_sites,
                name + " needs orbitals i<j and distinct sites");
        require(t.weights.size() == ns, name + " needs one weight per site");
        break;
      case TermKind::kFermionTwoBody:
        require(no == 4 && ns == 0, name + " needs four orbitals");
        break;
    }
  }
}

HamiltonianSpec from_second_quantized(const SecondQuantized& sq) {
  const Eigen::Index n = sq.xi.rows();
  require(sq.xi.cols() == n, "xi must be square");
  require((sq.xi - sq.xi.adjoint()).cwiseAbs().maxCoeff() <= 1e-12,
          "xi is not Hermitian");
  require(sq.zeta.size() == 0 || sq.zeta.size() == n, "zeta size mismatch");
  const bool has_lambda = sq.lambda.size() > 0;
  if (has_lambda) {
    require(sq.lambda.rows() == n && sq.lambda.cols() == n, "lambda size mismatch");
    require((sq.lambda - sq.lambda.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
            "lambda is not symmetric");
  }
  std::vector<double> l = sq.l;
  if (l.empty()) {
    for (Eigen::Index k = 0; k < n; ++k) l.push_back(sq.xi(k, k).real());
  }
  require(static_cast<Eigen::Index>(l.size()) == n, "l_n size mismatch");
  for (double v : l) require(v > 0.0, "l_n must be positive");

  HamiltonianSpec h;
  h.n_orbitals = sq.n_orbitals;
  h.n_oscillators = static_cast<int>(n);
  auto& out = h.terms;

  // xi_nn b^+ b = (xi_nn / l)(p^2/2 + l^2 x^2/2 - l/2)
  for (int k = 0; k < n; ++k) {
    const double d = sq.xi(k, k).real();
    push_nonzero(out, boson(TermKind::kP2, {k}, d / (2.0 * l[k])));
    push_nonzero(out, boson(TermKind::kX2, {k}, d * l[k] / 2.0));
    h.shift -= d / 2.0;
  }
  // xi_mn b_m^+ b_n + h.c., m < n
  for (int m = 0; m < n; ++m) {
    for (int k = m + 1; k < n; ++k) {
      const double a = sq.xi(m, k).real(), b = sq.xi(m, k).imag();
      const double r = std::sqrt(l[m] * l[k]);
      push_nonzero(out, boson(TermKind::kPP, {m, k}, a / r));
      push_nonzero(out, boson(TermKind::kXX, {m, k}, a * r));
      push_nonzero(out, boson(TermKind::kXPCross, {k, m}, b * std::sqrt(l[k] / l[m])));
      push_nonzero(out, boson(TermKind::kXPCross, {m, k}, -b * std::sqrt(l[m] / l[k])));
    }
  }
  // zeta b^+ + h.c.
  for (int k = 0; k < sq.zeta.size(); ++k) {
    push_nonzero(out, boson(TermKind::kX, {k}, sq.zeta[k].real() * std::sqrt(2.0 * l[k])));
    push_nonzero(out, boson(TermKind::kP, {k}, sq.zeta[k].imag() * std::sqrt(2.0 / l[k])));
  }
  // lambda_nm b_n^+ b_m^+ + h.c.; the ordered sum counts each pair twice.
  if (has_lambda) {
    for (int k = 0; k < n; ++k) {
      const double c = sq.lambda(k, k).real(), d = sq.lambda(k, k).imag();
      push_nonzero(out, boson(TermKind::kX2, {k}, c * l[k]));
      push_nonzero(out, boson(TermKind::kP2, {k}, -c / l[k]));
      Term xp = boson(TermKind::kXPSelf, {k}, d);
      push_nonzero(out, xp);
    }
    for (int m = 0; m < n; ++m) {
      for (int k = m + 1; k < n; ++k) {
        const double c = sq.lambda(m, k).real(), d = sq.lambda(m, k).imag();
        const double r = std::sqrt(l[m] * l[k]);
        push_nonzero(out, boson(TermKind::kXX, {m, k}, 2.0 * c * r));
        push_nonzero(out, boson(TermKind::kPP, {m, k}, -2.0 * c / r));
        push_nonzero(out, boson(TermKind::kXPCross, {m, k}, 2.0 * d * std::sqrt(l[m] / l[k])));
        push_nonzero(out, boson(TermKind::kXPCross, {k, m}, 2.0 * d * std::sqrt(l[k] / l[m])));
      }
    }
  }
  // Vertices on distinct sites: expand each b, b^+ into x and p pieces.
  for (const BosonVertex& v : sq.vertices) {
    const std::size_t m = v.sites.size();
    require(m >= 2 && m <= 4 && v.ops.size() == m, "boson vertex needs 2 to 4 legs");
    require(std::set<int>(v.sites.begin(), v.sites.end()).size() == m,
            "boson vertices with repeated sites are not supported");
    for (int s : v.sites) require(s >= 0 && s < n, "boson vertex site out of range");
    for (unsigned pattern = 0; pattern < (1u << m); ++pattern) {
      cplx f = v.coeff;
      std::string ops;
      for (std::size_t k = 0; k < m; ++k) {
        const double lk = l[v.sites[k]];
        const bool create = v.ops[k] == 'c';
        require(create || v.ops[k] == 'a', "vertex ops must be 'c' or 'a'");
        if (pattern & (1u << k)) {
          f *= cplx(0.0, (create ? -1.0 : 1.0) / std::sqrt(2.0 * lk));
          ops.push_back('P');
        } else {
          f *= std::sqrt(lk / 2.0);
          ops.push_back('X');
        }
      }
      Term t = boson(TermKind::kProduct, v.sites, 2.0 * f.real());
      t.ops = ops;
      if (std::abs(t.coeff) > 1e-15) out.push_back(std::move(t));
    }
  }
  // g_ijn c_i^+ c_j b_n^+ + h.c.
  for (const FermionBosonCoupling& c : sq.couplings) {
    require(c.n >= 0 && c.n < n, "coupling oscillator out of range");
    require(c.i >= 0 && c.i < sq.n_orbitals && c.j >= 0 && c.j < sq.n_orbitals,
            "coupling orbital out of range");
    const double re = c.g.real(), im = c.g.imag(), ln = l[c.n];
    if (c.i == c.j) {
      push_nonzero(out, fermion_boson(TermKind::kDensX, {c.i}, c.n, re * std::sqrt(2.0 * ln)));
      push_nonzero(out, fermion_boson(TermKind::kDensP, {c.i}, c.n, im * std::sqrt(2.0 / ln)));
      continue;
    }
    // i (c_j^+ c_i - c_i^+ c_j) = -(current with i<j ordering)
    const int lo = std::min(c.i, c.j), hi = std::max(c.i, c.j);
    const double orient = c.i < c.j ? 1.0 : -1.0;
    push_nonzero(out, fermion_boson(TermKind::kHopX, {lo, hi}, c.n, re * std::sqrt(ln / 2.0)));
    push_nonzero(out, fermion_boson(TermKind::kHopP, {lo, hi}, c.n, im / std::sqrt(2.0 * ln)));
    push_nonzero(out, fermion_boson(TermKind::kCurX, {lo, hi}, c.n,
                                    orient * im * std::sqrt(ln / 2.0)));
    push_nonzero(out, fermion_boson(TermKind::kCurP, {lo, hi}, c.n,
                                    -orient * re / std::sqrt(2.0 * ln)));
  }
  for (const FermionTwoBody& u : sq.two_body) {
    Term t;
    t.kind = TermKind::kFermionTwoBody;
    t.orbitals = {u.i, u.j, u.k, u.l};
    t.coeff = u.coeff;
    out.push_back(t);
  }
  h.validate();
  return h;
}

HamiltonianSpec holstein(double t, double g, double omega, int sites,
                         bool periodic) {
  if (sites < 2) throw ModelError("Holstein model needs at least 2 sites");
  if (!(omega > 0.0)) throw ModelError("omega must be positive");
  HamiltonianSpec h;
  h.n_orbitals = sites;
  h.n_oscillators = sites;
  auto hop = [&](int i, int j) {
    Term x;
    x.kind = TermKind::kHop;
    x.orbitals = {std::min(i, j), std::max(i, j)};
    x.coeff = -t;
    h.terms.push_back(x);
  };
  for (int i = 0; i + 1 < sites; ++i) hop(i, i + 1);
  if (periodic && sites > 2) hop(sites - 1, 0);
  for (int i = 0; i < sites; ++i) {
    if (g != 0.0) h.terms.push_back(fermion_boson(TermKind::kDensX, {i}, i, g));
  }
  for (int i = 0; i < sites; ++i) {
    h.terms.push_back(boson(TermKind::kP2, {i}, 0.5));
    h.terms.push_back(boson(TermKind::kX2, {i}, 0.5 * omega * omega));
  }
  h.validate();
  return h;
}

double holstein_alpha(double g, double omega, double t) {
  return g * g / (2.0 * omega * omega * t);
}

double holstein_g(double alpha, double omega, double t) {
  if (alpha < 0.0) throw ModelError("alpha must be non-negative");
  return std::sqrt(2.0 * alpha * t) * omega;
}

TrotterPlan trotter_plan(const HamiltonianSpec& h, double total_t, int steps) {
  if (steps < 1) throw ConfigError("Trotter plan needs steps >= 1");
  h.validate();
  TrotterPlan p;
  p.steps = steps;
  p.dt = total_t / steps;
  p.ordered_terms = h.terms;
  auto key = [](const Term& t) {
    std::vector<int> k;
    k.push_back(static_cast<int>(term_group(t.kind)));
    const TermGroup g = term_group(t.kind);
    if (g == TermGroup::kFermion || g == TermGroup::kFermionBoson) {
      k.insert(k.end(), t.orbitals.begin(), t.orbitals.end());
      k.push_back(-1);
    }
    k.insert(k.end(), t.sites.begin(), t.sites.end());
    return k;
  };
  std::stable_sort(p.ordered_terms.begin(), p.ordered_terms.end(),
                   [&](const Term& a, const Term& b) { return key(a) < key(b); });
  return p;
}

std::string model_to_json(const HamiltonianSpec& h) {
  nlohmann::ordered_json j;
  j["orbitals"] = h.n_orbitals;
  j["oscillators"] = h.n_oscillators;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const Term& t : h.terms) {
    nlohmann::ordered_json e;
    e["kind"] = term_name(t.kind);
    e["sites"] = t.sites;
    e["orbitals"] = t.orbitals;
    e["coeff"] = t.coeff;
    if (t.kind == TermKind::kXPSelf) {
      e["u"] = t.u;
      e["v"] = t.v;
    }
    if (t.kind == TermKind::kProduct) e["ops"] = t.ops;
    if (t.kind == TermKind::kHopMultiX) {
      e["offset"] = t.offset;
      e["weights"] = t.weights;
    }
    terms.push_back(e);
  }
  j["terms"] = terms;
  j["shift"] = h.shift;
  return j.dump(2) + "\n";
}

HamiltonianSpec model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model JSON: ") + e.what());
  }
  HamiltonianSpec h;
  try {
    h.n_orbitals = j.at("orbitals").get<int>();
    h.n_oscillators = j.at("oscillators").get<int>();
    h.shift = j.value("shift", 0.0);
    for (const auto& e : j.at("terms")) {
      Term t;
      t.kind = term_kind_from_name(e.at("kind").get<std::string>());
      t.sites = e.value("sites", std::vector<int>{});
      t.orbitals = e.value("orbitals", std::vector<int>{});
      t.coeff = e.at("coeff").get<double>();
      t.u = e.value("u", 1);
      t.v = e.value("v", 1);
      t.ops = e.value("ops", std::string{});
      t.offset = e.value("offset", 0.0);
      t.weights = e.value("weights", std::vector<double>{});
      h.terms.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model JSON: ") + e.what());
  }
  h.validate();
  return h;
}

}  // namespace fbsim
