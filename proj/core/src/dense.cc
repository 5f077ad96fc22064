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

#include "fbsim/dense.h"

#include <bit>
#include <string>
#include <vector>

#include "fbsim/error.h"
#include "fbsim/grid.h"
#include "fbsim/linalg.h"

namespace fbsim::dense {
namespace {

using Triplet = Eigen::Triplet<std::complex<double>>;

void check_size(int n) {
  if (n > kMaxDenseQubits) {
    throw ConfigError("dense oracle limited to " + std::to_string(kMaxDenseQubits) +
                      " qubits, layout has " + std::to_string(n));
  }
}

std::uint64_t extract(std::uint64_t i, const std::vector<int>& qubits) {
  std::uint64_t k = 0;
  for (std::size_t r = 0; r < qubits.size(); ++r) k |= ((i >> qubits[r]) & 1u) << r;
  return k;
}

std::uint64_t deposit(std::uint64_t i, const std::vector<int>& qubits, std::uint64_t k) {
  for (std::size_t r = 0; r < qubits.size(); ++r) {
    const std::uint64_t bit = std::uint64_t{1} << qubits[r];
    i = ((k >> r) & 1u) ? (i | bit) : (i & ~bit);
  }
  return i;
}

SparseOp hop(const QubitLayout& l, int i, int j) {
  const SparseOp ci = annihilator(l, i), cj = annihilator(l, j);
  return SparseOp(ci.adjoint() * cj) + SparseOp(cj.adjoint() * ci);
}

SparseOp current(const QubitLayout& l, int i, int j) {
  const SparseOp ci = annihilator(l, i), cj = annihilator(l, j);
  const SparseOp d = SparseOp(ci.adjoint() * cj) - SparseOp(cj.adjoint() * ci);
  return std::complex<double>(0.0, 1.0) * d;
}

SparseOp power(const SparseOp& a, int k, int n) {
  SparseOp out = identity(n);
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

}  // namespace

SparseOp embed(const Eigen::MatrixXcd& local, const std::vector<int>& qubits,
               int n_qubits) {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t k = std::uint64_t{1} << qubits.size();
  if (static_cast<std::uint64_t>(local.rows()) != k || local.cols() != local.rows()) {
    throw ConfigError("local operator does not match its qubit list");
  }
  std::vector<Triplet> trips;
  for (std::uint64_t col = 0; col < dim; ++col) {
    const std::uint64_t kc = extract(col, qubits);
    for (std::uint64_t kr = 0; kr < k; ++kr) {
      const std::complex<double> v = local(static_cast<Eigen::Index>(kr),
                                           static_cast<Eigen::Index>(kc));
      if (v != 0.0) {
        trips.emplace_back(static_cast<int>(deposit(col, qubits, kr)),
                           static_cast<int>(col), v);
      }
    }
  }
  SparseOp out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseOp identity(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  SparseOp out(dim, dim);
  out.setIdentity();
  return out;
}

SparseOp annihilator(const QubitLayout& l, int orbital) {
  const int n = l.total_qubits;
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t bit = std::uint64_t{1} << l.fermion(orbital);
  std::uint64_t string_mask = 0;
  for (int k = 0; k < orbital; ++k) string_mask |= std::uint64_t{1} << l.fermion(k);
  std::vector<Triplet> trips;
  for (std::uint64_t col = 0; col < dim; ++col) {
    if (!(col & bit)) continue;
    const double sign = (std::popcount(col & string_mask) & 1) ? -1.0 : 1.0;
    trips.emplace_back(static_cast<int>(col ^ bit), static_cast<int>(col), sign);
  }
  SparseOp out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseOp number(const QubitLayout& l, int orbital) {
  const SparseOp c = annihilator(l, orbital);
  return c.adjoint() * c;
}

SparseOp position(const QubitLayout& l, int site) {
  const Register& r = l.reg(site);
  const grid::GridSpec g = grid::make_grid(r.width);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(g.size, g.size);
  for (std::int64_t i = 0; i < g.size; ++i) x(i, i) = g.x(i);
  return embed(x, l.register_qubits(site), l.total_qubits);
}

SparseOp momentum(const QubitLayout& l, int site) {
  const Register& r = l.reg(site);
  const grid::DiscreteOperators ops = grid::build_operators(grid::make_grid(r.width));
  return embed(ops.p, l.register_qubits(site), l.total_qubits);
}

SparseOp term_operator(const QubitLayout& l, const Term& t) {
  const int n = l.total_qubits;
  switch (t.kind) {
    case TermKind::kX:
      return position(l, t.sites.at(0));
    case TermKind::kX2:
      return power(position(l, t.sites.at(0)), 2, n);
    case TermKind::kXX:
      return position(l, t.sites.at(0)) * position(l, t.sites.at(1));
    case TermKind::kP:
      return momentum(l, t.sites.at(0));
    case TermKind::kP2:
      return power(momentum(l, t.sites.at(0)), 2, n);
    case TermKind::kPP:
      return momentum(l, t.sites.at(0)) * momentum(l, t.sites.at(1));
    case TermKind::kXPCross:
      return position(l, t.sites.at(0)) * momentum(l, t.sites.at(1));
    case TermKind::kXPSelf: {
      const SparseOp xu = power(position(l, t.sites.at(0)), t.u, n);
      const SparseOp pv = power(momentum(l, t.sites.at(0)), t.v, n);
      return SparseOp(xu * pv) + SparseOp(pv * xu);
    }
    case TermKind::kProduct: {
      SparseOp out = identity(n);
      for (std::size_t k = 0; k < t.sites.size(); ++k) {
        out = out * (t.ops.at(k) == 'X' ? position(l, t.sites[k]) : momentum(l, t.sites[k]));
      }
      return out;
    }
    case TermKind::kDensX:
      return number(l, t.orbitals.at(0)) * position(l, t.sites.at(0));
    case TermKind::kDensP:
      return number(l, t.orbitals.at(0)) * momentum(l, t.sites.at(0));
    case TermKind::kHop:
      return hop(l, t.orbitals.at(0), t.orbitals.at(1));
    case TermKind::kHopX:
      return hop(l, t.orbitals.at(0), t.orbitals.at(1)) * position(l, t.sites.at(0));
    case TermKind::kHopP:
      return hop(l, t.orbitals.at(0), t.orbitals.at(1)) * momentum(l, t.sites.at(0));
    case TermKind::kCurX:
      return current(l, t.orbitals.at(0), t.orbitals.at(1)) * position(l, t.sites.at(0));
    case TermKind::kCurP:
      return current(l, t.orbitals.at(0), t.orbitals.at(1)) * momentum(l, t.sites.at(0));
    case TermKind::kHopMultiX: {
      SparseOp a = t.offset * identity(n);
      for (std::size_t k = 0; k < t.sites.size(); ++k) {
        a += t.weights.at(k) * position(l, t.sites[k]);
      }
      return hop(l, t.orbitals.at(0), t.orbitals.at(1)) * a;
    }
    case TermKind::kFermionTwoBody:
      throw UnsupportedError("fermion two-body terms are not represented");
  }
  throw UnsupportedError("unknown term kind");
}

Eigen::MatrixXcd hamiltonian(const HamiltonianSpec& h, const QubitLayout& l) {
  check_size(l.total_qubits);
  SparseOp acc = h.shift * identity(l.total_qubits);
  for (const Term& t : h.terms) acc += t.coeff * term_operator(l, t);
  Eigen::MatrixXcd m = Eigen::MatrixXcd(acc);
  return 0.5 * (m + m.adjoint());
}

SparseOp sparse_hamiltonian(const HamiltonianSpec& h, const QubitLayout& l) {
  if (l.total_qubits > kMaxSparseQubits) {
    throw ConfigError("sparse oracle limited to " + std::to_string(kMaxSparseQubits) +
                      " qubits, layout has " + std::to_string(l.total_qubits));
  }
  SparseOp acc = h.shift * identity(l.total_qubits);
  for (const Term& t : h.terms) acc += t.coeff * term_operator(l, t);
  SparseOp adj = acc.adjoint();
  return 0.5 * (acc + adj);
}

Eigen::MatrixXcd propagator(const HamiltonianSpec& h, const QubitLayout& l,
                            double t) {
  return expm_hermitian(hamiltonian(h, l), t);
}

Eigen::MatrixXcd term_exponential(const QubitLayout& l, const Term& t,
                                  double theta) {
  check_size(l.total_qubits);
  Eigen::MatrixXcd m = Eigen::MatrixXcd(term_operator(l, t));
  m = 0.5 * (m + m.adjoint()).eval();
  return expm_hermitian(m, theta);
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace fbsim::dense
