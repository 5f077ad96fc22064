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

#include "fbsim/oracle.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fbsim/error.h"
#include "fbsim/linalg.h"

namespace fbsim::oracle {
namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

void check_ed_args(double omega, int sites, int cutoff, bool symmetric) {
  if (cutoff < 1) throw ConfigError("ed: cutoff must be >= 1");
  if (sites < 2) throw ConfigError("ed: need at least 2 sites");
  if (!(omega > 0.0)) throw ConfigError("ed: omega must be positive");
  if (symmetric && sites != 2) {
    throw ConfigError("ed: the exchange-symmetric block needs exactly 2 sites");
  }
}

// <k+1| x |k> with x = (b + b^+)/sqrt(2 omega).
double x_up(int k, double omega) { return std::sqrt((k + 1.0) / (2.0 * omega)); }

Eigen::MatrixXd symmetric_block(double t, double g, double omega, int nc) {
  const int d = nc + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d * d, d * d);
  auto idx = [d](int a, int b) { return a * d + b; };
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const int i = idx(a, b);
      h(i, i) += omega * (a + b + 1.0);
      if (a + 1 < d) {
        const double v = g * x_up(a, omega);
        h(idx(a + 1, b), i) += v;
        h(i, idx(a + 1, b)) += v;
      }
      // Hopping moves the electron; relabelled, the two counts swap.
      h(idx(b, a), i) += -t;
    }
  }
  return h;
}

Eigen::MatrixXd full_block(double t, double g, double omega, int sites, int nc) {
  const int d = nc + 1;
  const std::int64_t per = ipow(d, sites);
  const std::int64_t dim = sites * per;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<int> occ(sites);
  for (std::int64_t c = 0; c < per; ++c) {
    std::int64_t rem = c;
    int total = 0;
    for (int s = 0; s < sites; ++s) {
      occ[s] = static_cast<int>(rem % d);
      rem /= d;
      total += occ[s];
    }
    for (int e = 0; e < sites; ++e) {
      const std::int64_t i = e * per + c;
      h(i, i) += omega * (total + 0.5 * sites);
      if (occ[e] + 1 < d) {
        const std::int64_t j = i + ipow(d, e);
        const double v = g * x_up(occ[e], omega);
        h(i, j) += v;
        h(j, i) += v;
      }
      if (e + 1 < sites) {
        const std::int64_t j = (e + 1) * per + c;
        h(i, j) += -t;
        h(j, i) += -t;
      }
    }
  }
  return h;
}

// Integral over [0, h] of the quadratic through (0,f0), (h,f1), (2h,f2).
template <typename T>
T first_half_panel(double h, const T& f0, const T& f1, const T& f2) {
  return h * (5.0 * f0 + 8.0 * f1 - f2) / 12.0;
}

}  // namespace

std::int64_t FockBasis::dim() const {
  const std::int64_t d = cutoff + 1;
  return symmetric ? d * d : sites * ipow(d, sites);
}

EDResult ed_holstein(double t, double g, double omega, int sites, int cutoff,
                     int levels, bool use_symmetry) {
  const bool symmetric = use_symmetry && sites == 2;
  check_ed_args(omega, sites, cutoff, symmetric);
  EDResult r;
  r.t = t;
  r.g = g;
  r.omega = omega;
  r.basis = FockBasis{sites, cutoff, symmetric};
  // Estimated in floating point first so huge cutoffs cannot overflow.
  const double approx_dim = symmetric ? std::pow(cutoff + 1.0, 2)
                                      : sites * std::pow(cutoff + 1.0, sites);
  if (approx_dim > static_cast<double>(kMaxEdDim)) {
    throw ConfigError("ed: basis dimension " + std::to_string(approx_dim) +
                      " exceeds " + std::to_string(kMaxEdDim));
  }
  const Eigen::MatrixXd h = symmetric ? symmetric_block(t, g, omega, cutoff)
                                      : full_block(t, g, omega, sites, cutoff);
  const RealEigen e = eigh_lowest(h, std::max(levels, 1));
  r.eigenvalues = e.values;
  r.ground = e.vectors.col(0);
  // Sign convention: largest component positive.
  Eigen::Index arg = 0;
  r.ground.cwiseAbs().maxCoeff(&arg);
  if (r.ground[arg] < 0) r.ground = -r.ground;
  r.z = ed_zn(r);
  return r;
}

std::vector<double> ed_zn(const EDResult& r) {
  const FockBasis& b = r.basis;
  if (r.ground.size() != b.dim()) throw ConfigError("ed_zn: ground vector missing");
  const int d = b.cutoff + 1;
  std::vector<double> z(static_cast<std::size_t>(b.sites * b.cutoff + 1), 0.0);
  if (b.symmetric) {
    for (int a = 0; a < d; ++a) {
      for (int c = 0; c < d; ++c) z[a + c] += r.ground[a * d + c] * r.ground[a * d + c];
    }
    return z;
  }
  const std::int64_t per = ipow(d, b.sites);
  for (std::int64_t i = 0; i < b.dim(); ++i) {
    std::int64_t rem = i % per;
    int total = 0;
    for (int s = 0; s < b.sites; ++s) {
      total += static_cast<int>(rem % d);
      rem /= d;
    }
    z[total] += r.ground[i] * r.ground[i];
  }
  return z;
}

cplx displaced_overlap(int m, int n, cplx z) {
  if (m < 0 || n < 0 || m > 120 || n > 120) {
    throw ConfigError("displaced_overlap: levels must lie in [0, 120]");
  }
  const double r2 = std::norm(z);
  if (r2 == 0.0) return m == n ? 1.0 : 0.0;
  const double r = std::sqrt(r2);
  const int lo = std::min(m, n);
  const int k = std::abs(m - n);
  // m >= n: sqrt(n!/m!) z^{m-n} ...; m < n: sqrt(m!/n!) (-z^*)^{n-m} ...
  const double log_mag = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0)) +
                         k * std::log(r) - 0.5 * r2;
  const double lag = std::assoc_laguerre(static_cast<unsigned>(lo),
                                         static_cast<unsigned>(k), r2);
  const double arg = m >= n ? k * std::arg(z) : k * std::arg(-std::conj(z));
  const cplx v = std::polar(std::exp(log_mag) * lag, arg);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NumericError("displaced_overlap: overflow");
  }
  return v;
}

double poisson_probability(int n, double mean) {
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

Eigen::VectorXcd fock_amplitudes(const DisplacedState& s, int cutoff) {
  Eigen::VectorXcd a(cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) a[m] = displaced_overlap(m, s.n, s.z);
  return a;
}

Eigen::VectorXcd grid_state(const DisplacedState& s, const grid::SampledBasis& basis) {
  const int levels = static_cast<int>(basis.chi.cols());
  const Eigen::VectorXcd a = fock_amplitudes(s, levels - 1);
  return basis.chi.cast<cplx>() * a;
}

namespace {

struct Segment {
  double t0, t1;
  std::function<cplx(double)> f;
};

// I(u) = int_0^u f^*(s) e^{i omega s} ds and
// B(u) = int_0^u Im[f(v) e^{-i omega v} I(v)] dv, carried across segments;
// Simpson inside each segment so jumps in f fall on segment ends.
ForcedEvolution integrate_segments(const DisplacedState& s,
                                   const std::vector<Segment>& segs,
                                   double omega, double t, int panels) {
  const cplx i(0.0, 1.0);
  cplx acc = 0.0;
  double beta_int = 0.0;
  for (const Segment& seg : segs) {
    const double len = seg.t1 - seg.t0;
    if (len <= 0.0) continue;
    const int p = std::max(1, static_cast<int>(std::lround(panels * len / t)));
    const double h = len / (2.0 * p);
    const int nodes = 2 * p + 1;
    std::vector<cplx> fu(nodes), w(nodes), ia(nodes);
    for (int k = 0; k < nodes; ++k) {
      const double u = seg.t0 + k * h;
      fu[k] = seg.f(u);
      w[k] = std::conj(fu[k]) * std::exp(i * omega * u);
    }
    ia[0] = acc;
    for (int q = 0; q < p; ++q) {
      const int k = 2 * q;
      ia[k + 1] = ia[k] + first_half_panel(h, w[k], w[k + 1], w[k + 2]);
      ia[k + 2] = ia[k] + h * (w[k] + 4.0 * w[k + 1] + w[k + 2]) / 3.0;
    }
    std::vector<double> gb(nodes);
    for (int k = 0; k < nodes; ++k) {
      gb[k] = std::imag(fu[k] * std::exp(-i * omega * (seg.t0 + k * h)) * ia[k]);
    }
    for (int q = 0; q < p; ++q) {
      const int k = 2 * q;
      beta_int += h * (gb[k] + 4.0 * gb[k + 1] + gb[k + 2]) / 3.0;
    }
    acc = ia[nodes - 1];
  }
  ForcedEvolution out;
  out.zeta = -i * acc;
  out.beta = -beta_int;
  out.gamma = std::imag(out.zeta * std::conj(s.z));
  out.state.n = s.n;
  out.state.z = (out.zeta + s.z) * std::exp(-i * omega * t);
  out.phase = out.gamma + out.beta - (s.n + 0.5) * omega * t;
  return out;
}

}  // namespace

ForcedEvolution forced_evolution(const DisplacedState& s,
                                 const std::function<cplx(double)>& f,
                                 double omega, double t, int panels) {
  if (panels < 1) throw ConfigError("forced_evolution: panels must be >= 1");
  return integrate_segments(s, {Segment{0.0, t, f}}, omega, t, panels);
}

ForcedEvolution forced_evolution(const DisplacedState& s,
                                 const std::vector<cplx>& samples, double dt,
                                 double omega, double t, int panels) {
  if (samples.empty() || !(dt > 0.0)) {
    throw ConfigError("forced_evolution: need samples and dt > 0");
  }
  if (panels < 1) throw ConfigError("forced_evolution: panels must be >= 1");
  std::vector<Segment> segs;
  for (std::size_t k = 0; k < samples.size() && k * dt < t; ++k) {
    const double end = k + 1 == samples.size() ? t : std::min(t, (k + 1) * dt);
    const cplx v = samples[k];
    segs.push_back(Segment{k * dt, end, [v](double) { return v; }});
  }
  return integrate_segments(s, segs, omega, t, panels);
}

int cutoff_estimate(int n, double z_abs, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("cutoff_estimate: eps must lie in (0,1)");
  const double v = n + z_abs * z_abs +
                   z_abs * std::sqrt(2.0 * (2.0 * n + 1.0) * std::log(1.0 / eps));
  return static_cast<int>(std::ceil(v - 1e-12));
}

double condensate_local_distribution(std::int64_t n, std::int64_t p) {
  if (n < 1 || p < 0 || p > n) throw ConfigError("condensate: need 0 <= p <= N, N >= 1");
  if (n == 1) return p == 1 ? 1.0 : 0.0;
  const double nn = static_cast<double>(n);
  // ((N-1)/N)^N, then one factor (N-k)/((N-1)(k+1)) per boson; log-gamma
  // differences cancel too much at N ~ 1e6.
  double w = std::exp(nn * std::log1p(-1.0 / nn));
  for (std::int64_t k = 0; k < p; ++k) {
    w *= (nn - k) / ((nn - 1.0) * (k + 1.0));
    if (w == 0.0) break;
  }
  return w;
}

Eigen::MatrixXcd dense_propagator(const HamiltonianSpec& h, const QubitLayout& l,
                                  double t) {
  return dense::propagator(h, l, t);
}

dense::SparseOp one_electron_sector(const QubitLayout& l, bool swap_symmetric) {
  l.validate();
  const int nf = static_cast<int>(l.fermion_qubits.size());
  if (nf < 1) throw ConfigError("sector: layout has no fermion orbitals");
  std::int64_t per = 1;
  for (const Register& r : l.boson_registers) per <<= r.width;
  const std::uint64_t full = std::uint64_t{1} << l.total_qubits;
  auto index = [&l](int e, const std::vector<std::uint64_t>& regs) {
    std::uint64_t i = std::uint64_t{1} << l.fermion(e);
    for (std::size_t o = 0; o < regs.size(); ++o) {
      i |= regs[o] << l.boson_registers[o].first;
    }
    return i;
  };
  auto unpack = [&l](std::int64_t c) {
    std::vector<std::uint64_t> regs(l.boson_registers.size());
    for (std::size_t o = 0; o < regs.size(); ++o) {
      const int w = l.boson_registers[o].width;
      regs[o] = static_cast<std::uint64_t>(c) & ((std::uint64_t{1} << w) - 1);
      c >>= w;
    }
    return regs;
  };
  std::vector<Eigen::Triplet<cplx>> trips;
  std::int64_t cols = 0;
  if (!swap_symmetric) {
    for (int e = 0; e < nf; ++e) {
      for (std::int64_t c = 0; c < per; ++c) trips.emplace_back(index(e, unpack(c)), cols++, 1.0);
    }
  } else {
    if (nf != 2 || l.boson_registers.size() != 2 ||
        l.boson_registers[0].width != l.boson_registers[1].width) {
      throw ConfigError("sector: swap symmetry needs 2 orbitals and 2 equal registers");
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (std::int64_t c = 0; c < per; ++c) {
      const std::vector<std::uint64_t> ab = unpack(c);
      const std::vector<std::uint64_t> ba = {ab[1], ab[0]};
      trips.emplace_back(index(0, ab), cols, s);
      trips.emplace_back(index(1, ba), cols, s);
      ++cols;
    }
  }
  dense::SparseOp w(static_cast<Eigen::Index>(full), cols);
  w.setFromTriplets(trips.begin(), trips.end());
  return w;
}

SectorSpectrum::SectorSpectrum(const HamiltonianSpec& h, const QubitLayout& l,
                               dense::SparseOp basis)
    : n_qubits_(l.total_qubits), basis_(std::move(basis)) {
  if (basis_.rows() != (Eigen::Index{1} << n_qubits_)) {
    throw ConfigError("sector: basis rows do not match the layout");
  }
  const dense::SparseOp hf = dense::sparse_hamiltonian(h, l);
  const dense::SparseOp wa = basis_.adjoint();
  const dense::SparseOp hw = hf * basis_;
  const Eigen::MatrixXcd hs = Eigen::MatrixXcd(wa * hw);
  real_ = hs.imag().cwiseAbs().maxCoeff() < 1e-13;
  if (real_) {
    Eigen::MatrixXd hr = hs.real();
    hr = 0.5 * (hr + hr.transpose()).eval();
    RealEigen e = eigh(hr);
    energies_ = std::move(e.values);
    real_vectors_ = std::move(e.vectors);
  } else {
    ComplexEigen e = eigh(Eigen::MatrixXcd(0.5 * (hs + hs.adjoint())));
    energies_ = std::move(e.values);
    complex_vectors_ = std::move(e.vectors);
  }
}

Eigen::VectorXcd SectorSpectrum::coefficients(const std::vector<cplx>& full) const {
  const Eigen::Map<const Eigen::VectorXcd> v(full.data(), static_cast<Eigen::Index>(full.size()));
  const Eigen::VectorXcd s = basis_.adjoint() * v;
  if (real_) return real_vectors_.transpose().cast<cplx>() * s;
  return complex_vectors_.adjoint() * s;
}

std::vector<cplx> SectorSpectrum::full_state(const Eigen::VectorXcd& coeffs) const {
  const Eigen::VectorXcd s =
      real_ ? Eigen::VectorXcd(real_vectors_.cast<cplx>() * coeffs)
            : Eigen::VectorXcd(complex_vectors_ * coeffs);
  const Eigen::VectorXcd f = basis_ * s;
  return std::vector<cplx>(f.data(), f.data() + f.size());
}

std::vector<cplx> SectorSpectrum::eigenstate(std::int64_t k) const {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim());
  c[k] = 1.0;
  return full_state(c);
}

std::vector<cplx> SectorSpectrum::evolve(const std::vector<cplx>& full, double t) const {
  Eigen::VectorXcd c = coefficients(full);
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -energies_[k] * t);
  return full_state(c);
}

double SectorSpectrum::leakage(const std::vector<cplx>& full) const {
  const Eigen::Map<const Eigen::VectorXcd> v(full.data(), static_cast<Eigen::Index>(full.size()));
  const Eigen::VectorXcd s = basis_.adjoint() * v;
  return std::sqrt(std::max(0.0, v.squaredNorm() - s.squaredNorm()));
}

}  // namespace fbsim::oracle
