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

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fbsim/dense.h"
#include "fbsim/engine.h"
#include "fbsim/error.h"
#include "fbsim/linalg.h"
#include "fbsim/model.h"
#include "fbsim/oracle.h"

namespace fbsim::oracle {
namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

MatrixXd lowering(int d) {
  MatrixXd b = MatrixXd::Zero(d, d);
  for (int k = 1; k < d; ++k) b(k - 1, k) = std::sqrt(double(k));
  return b;
}

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Two-site Holstein dimer from Kronecker products: electron (x) site 0 (x) site 1.
MatrixXd dimer(double t, double g, double omega, int cutoff) {
  const int d = cutoff + 1;
  const MatrixXd b = lowering(d);
  const MatrixXd id = MatrixXd::Identity(d, d);
  const MatrixXd x = (b + b.transpose()) / std::sqrt(2.0 * omega);
  const MatrixXd hosc = omega * (b.transpose() * b + 0.5 * id);
  MatrixXd sx(2, 2), n0(2, 2), n1(2, 2);
  sx << 0, 1, 1, 0;
  n0 << 1, 0, 0, 0;
  n1 << 0, 0, 0, 1;
  const MatrixXd e2 = MatrixXd::Identity(2, 2);
  return -t * kron(sx, kron(id, id)) + kron(e2, kron(hosc, id)) + kron(e2, kron(id, hosc)) +
         g * kron(n0, kron(x, id)) + g * kron(n1, kron(id, x));
}

TEST(EdHolstein, MatchesKroneckerDimer) {
  for (double g : {0.0, 0.7, 1.9}) {
    const int nc = 9;
    const MatrixXd h = dimer(1.0, g, 1.3, nc);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    const EDResult sym = ed_holstein(1.0, g, 1.3, 2, nc);
    const EDResult full = ed_holstein(1.0, g, 1.3, 2, nc, 1, false);
    EXPECT_NEAR(sym.e0(), es.eigenvalues()[0], 1e-10) << g;
    EXPECT_NEAR(full.e0(), es.eigenvalues()[0], 1e-10) << g;
    // Z(n) from the Kronecker ground vector.
    const Eigen::VectorXd v = es.eigenvectors().col(0);
    std::vector<double> z(2 * nc + 1, 0.0);
    const int d = nc + 1;
    for (int e = 0; e < 2; ++e)
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) z[a + c] += std::pow(v[(e * d + a) * d + c], 2);
    for (int n = 0; n <= 2 * nc; ++n) {
      EXPECT_NEAR(sym.z[n], z[n], 1e-9) << g << " " << n;
      EXPECT_NEAR(full.z[n], z[n], 1e-9) << g << " " << n;
    }
  }
}

TEST(EdHolstein, DecoupledLimit) {
  const EDResult r = ed_holstein(1.0, 0.0, 1.0, 2, 6);
  EXPECT_NEAR(r.e0(), 0.0, 1e-12);
  EXPECT_NEAR(r.z0(), 1.0, 1e-12);
  const EDResult three = ed_holstein(1.0, 0.0, 1.0, 3, 3);
  // Open 3-site chain: -sqrt(2) t plus three zero points.
  EXPECT_NEAR(three.e0(), -std::sqrt(2.0) + 1.5, 1e-12);
}

TEST(EdHolstein, ReferenceEnergies) {
  // Independent numpy diagonalization of the same dimer at cutoff 30.
  EXPECT_NEAR(ed_holstein(1.0, holstein_g(0.5, 1.0, 1.0), 1.0, 2, 30).e0(), -0.33835, 5e-5);
  EXPECT_NEAR(ed_holstein(1.0, holstein_g(1.0, 1.0, 1.0), 1.0, 2, 30).e0(), -0.68848, 5e-5);
  EXPECT_NEAR(ed_holstein(1.0, holstein_g(2.0, 1.0, 1.0), 1.0, 2, 30).e0(), -1.43655, 5e-5);
}

TEST(EdHolstein, MonotoneInCutoff) {
  const double g = holstein_g(1.5, 1.0, 1.0);
  double prev = ed_holstein(1.0, g, 1.0, 2, 2).e0();
  for (int nc = 3; nc <= 24; ++nc) {
    const double e = ed_holstein(1.0, g, 1.0, 2, nc).e0();
    EXPECT_LE(e, prev + 1e-12) << nc;
    prev = e;
  }
}

TEST(EdHolstein, StrongCouplingDeformationBound) {
  for (double alpha : {2.0, 3.0, 4.0}) {
    const double g = holstein_g(alpha, 1.0, 1.0);
    const double shifted = ed_holstein(1.0, g, 1.0, 2, 40).e0() + g * g / 2.0;
    EXPECT_GE(shifted, 1.0 - 1.0 - 1e-9) << alpha;  // omega - t
    EXPECT_LE(shifted, 1.0 + 1e-9) << alpha;        // omega
  }
}

TEST(EdHolstein, ZnNormalizedAndSpread) {
  const EDResult r = ed_holstein(1.0, holstein_g(1.0, 1.0, 1.0), 1.0, 2, 30);
  double s = 0.0;
  for (double v : r.z) s += v;
  EXPECT_NEAR(s, 1.0, 1e-10);
  EXPECT_GT(r.z0(), 0.2);
  EXPECT_LT(r.z0(), 0.9);
  EXPECT_GT(r.z[1], 0.05);
}

TEST(EdHolstein, Errors) {
  EXPECT_THROW(ed_holstein(1.0, 1.0, 1.0, 2, 0), ConfigError);
  EXPECT_THROW(ed_holstein(1.0, 1.0, 1.0, 3, 40, 1, false), ConfigError);
  EXPECT_THROW(ed_holstein(1.0, 1.0, 0.0, 2, 4), ConfigError);
}

// exp(z b^+ - z^* b) on a generous Fock truncation.
MatrixXcd displacement_matrix(std::complex<double> z, int d) {
  const MatrixXcd b = lowering(d).cast<std::complex<double>>();
  const MatrixXcd a = z * b.adjoint() - std::conj(z) * b;
  // exp(A) = exp(-i K) with K = i A Hermitian.
  return expm_hermitian(std::complex<double>(0, 1) * a, 1.0);
}

TEST(DisplacedOverlap, ClosedValues) {
  const std::complex<double> z(0.8, -0.3);
  EXPECT_NEAR(std::abs(displaced_overlap(0, 0, z) - std::exp(-std::norm(z) / 2)), 0.0, 1e-15);
  for (int n : {0, 3, 17}) EXPECT_EQ(displaced_overlap(n, n, 0.0), std::complex<double>(1.0));
  EXPECT_EQ(displaced_overlap(2, 5, 0.0), std::complex<double>(0.0));
  EXPECT_THROW(displaced_overlap(121, 0, z), ConfigError);
}

TEST(DisplacedOverlap, MatchesMatrixExponential) {
  for (std::complex<double> z : {std::complex<double>(0.5, 0.2), std::complex<double>(-1.3, 0.9),
                                 std::complex<double>(0.0, -2.0)}) {
    const MatrixXcd d = displacement_matrix(z, 160);
    for (int m = 0; m <= 20; ++m)
      for (int n = 0; n <= 20; ++n)
        EXPECT_LT(std::abs(displaced_overlap(m, n, z) - d(m, n)), 1e-10) << z << m << " " << n;
  }
}

TEST(DisplacedOverlap, PoissonRows) {
  for (double r : {0.3, 1.0, 2.5}) {
    const std::complex<double> z = std::polar(r, 0.7);
    for (int n = 0; n <= 40; ++n) {
      const double want = std::exp(-r * r) * std::pow(r, 2 * n) / std::tgamma(n + 1.0);
      EXPECT_NEAR(std::norm(displaced_overlap(n, 0, z)), want, 1e-10) << r << " " << n;
      EXPECT_NEAR(poisson_probability(n, r * r), want, 1e-12);
    }
  }
}

TEST(DisplacedOverlap, ColumnsNormalizedAndBlockUnitary) {
  const std::complex<double> z(1.1, -1.7);
  for (int n : {0, 4, 9}) {
    double s = 0.0;
    for (int m = 0; m <= 120; ++m) s += std::norm(displaced_overlap(m, n, z));
    EXPECT_NEAR(s, 1.0, 1e-8) << n;
  }
  MatrixXcd blk(80, 80);
  for (int m = 0; m < 80; ++m)
    for (int n = 0; n < 80; ++n) blk(m, n) = displaced_overlap(m, n, z);
  const MatrixXcd g = blk.leftCols(10).adjoint() * blk.leftCols(10);
  EXPECT_LT((g - MatrixXcd::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-10);
}

// Time-ordered Fock evolution under piecewise-constant drive.
Eigen::VectorXcd fock_drive(const Eigen::VectorXcd& psi, const std::vector<std::complex<double>>& f,
                            double dt, double omega) {
  const int d = static_cast<int>(psi.size());
  const MatrixXcd b = lowering(d).cast<std::complex<double>>();
  Eigen::VectorXcd v = psi;
  for (std::complex<double> fk : f) {
    const MatrixXcd h = omega * (b.adjoint() * b + 0.5 * MatrixXcd::Identity(d, d)) + fk * b +
                        std::conj(fk) * b.adjoint();
    v = expm_hermitian(h, dt) * v;
  }
  return v;
}

TEST(ForcedEvolution, FreeRotation) {
  const DisplacedState s{2, {0.4, 0.9}};
  const ForcedEvolution fe = forced_evolution(s, [](double) { return std::complex<double>(0); }, 1.7, 2.3);
  EXPECT_LT(std::abs(fe.state.z - s.z * std::polar(1.0, -1.7 * 2.3)), 1e-14);
  EXPECT_EQ(fe.beta, 0.0);
  EXPECT_EQ(std::abs(fe.zeta), 0.0);
}

TEST(ForcedEvolution, ConstantDriveClosesLoop) {
  const double omega = 1.3, f = 0.6;
  const double period = 2.0 * std::numbers::pi / omega;
  const ForcedEvolution fe =
      forced_evolution({0, 0.0}, [f](double) { return std::complex<double>(f); }, omega, period);
  EXPECT_LT(std::abs(fe.zeta), 1e-12);
  // beta = f^2 (t - sin(omega t)/omega)/omega for real constant f.
  for (double t : {0.4, period, 3.1}) {
    const ForcedEvolution r = forced_evolution({0, 0.0}, [f](double) { return std::complex<double>(f); }, omega, t);
    EXPECT_NEAR(r.beta, f * f * (t - std::sin(omega * t) / omega) / omega, 1e-10) << t;
  }
}

TEST(ForcedEvolution, ResonantGrowthIsLinear) {
  const double omega = 1.0;
  auto drive = [omega](double u) { return std::complex<double>(std::cos(omega * u)); };
  for (int k = 1; k <= 4; ++k) {
    const double t = 2.0 * std::numbers::pi * k / omega;
    EXPECT_NEAR(std::abs(forced_evolution({0, 0.0}, drive, omega, t).zeta), t / 2.0, 1e-9) << k;
  }
}

TEST(ForcedEvolution, MatchesFockPropagation) {
  const int d = 70;
  const double omega = 0.9, dt = 0.05;
  std::vector<std::complex<double>> f;
  for (int k = 0; k < 40; ++k) f.emplace_back(0.4 * std::cos(0.3 * k), -0.25 + 0.01 * k);
  const double t = dt * f.size();
  for (DisplacedState s : {DisplacedState{0, {0.3, -0.2}}, DisplacedState{2, {-0.5, 0.4}}}) {
    const Eigen::VectorXcd psi = fock_amplitudes(s, d - 1);
    const Eigen::VectorXcd want = fock_drive(psi, f, dt, omega);
    const ForcedEvolution fe = forced_evolution(s, f, dt, omega, t, 20000);
    const Eigen::VectorXcd got = std::polar(1.0, fe.phase) * fock_amplitudes(fe.state, d - 1);
    EXPECT_LT((got - want).norm(), 1e-7) << s.n;
  }
}

TEST(CutoffEstimate, Arithmetic) {
  EXPECT_EQ(cutoff_estimate(0, 0.0, 1e-3), 0);
  EXPECT_EQ(cutoff_estimate(0, 1.0, 1e-6), 7);
  EXPECT_EQ(cutoff_estimate(2, 1.5, 1e-4),
            static_cast<int>(std::ceil(4.25 + 1.5 * std::sqrt(10.0 * std::log(1e4)))));
  EXPECT_THROW(cutoff_estimate(0, 1.0, 1.0), ConfigError);
}

double tail_mass(int n, double r, int cutoff) {
  double kept = 0.0;
  for (int m = 0; m <= cutoff; ++m) kept += std::norm(displaced_overlap(m, n, r));
  return std::max(0.0, 1.0 - kept);
}

TEST(CutoffEstimate, TailBehaviour) {
  // Gaussian-tail heuristic: it undercounts the Poisson tail at small eps.
  // Frozen witness at the textbook example (0, 1, 1e-6).
  EXPECT_NEAR(tail_mass(0, 1.0, cutoff_estimate(0, 1.0, 1e-6)), 1.0249e-5, 1e-8);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> ni(0, 5);
  std::uniform_real_distribution<double> zr(0.5, 3.0);
  for (int k = 0; k < 100; ++k) {
    const int n = ni(rng);
    const double r = zr(rng);
    EXPECT_LE(tail_mass(n, r, cutoff_estimate(n, r, 1e-2)), 1e-2) << n << " " << r;
  }
}

// Multinomial over occupation vectors of N bosons on N sites (equal weights).
std::vector<double> brute_condensate(int n) {
  std::vector<double> dist(n + 1, 0.0);
  std::vector<int> occ(n, 0);
  std::function<void(int, int)> rec = [&](int site, int left) {
    if (site == n - 1) {
      occ[site] = left;
      double logw = std::lgamma(n + 1.0) - n * std::log(double(n));
      for (int o : occ) logw -= std::lgamma(o + 1.0);
      dist[occ[0]] += std::exp(logw);
      return;
    }
    for (int o = 0; o <= left; ++o) {
      occ[site] = o;
      rec(site + 1, left - o);
    }
  };
  rec(0, n);
  return dist;
}

TEST(Condensate, SmallSystems) {
  EXPECT_NEAR(condensate_local_distribution(2, 0), 0.25, 1e-15);
  EXPECT_NEAR(condensate_local_distribution(2, 1), 0.5, 1e-15);
  EXPECT_NEAR(condensate_local_distribution(2, 2), 0.25, 1e-15);
  for (int n = 2; n <= 8; ++n) {
    const std::vector<double> want = brute_condensate(n);
    double s = 0.0;
    for (int p = 0; p <= n; ++p) {
      EXPECT_NEAR(condensate_local_distribution(n, p), want[p], 1e-12) << n << " " << p;
      s += condensate_local_distribution(n, p);
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  EXPECT_THROW(condensate_local_distribution(4, 5), ConfigError);
}

TEST(Condensate, LargeSystemBound) {
  const std::int64_t n = 1000000;
  double s = 0.0;
  for (int p = 0; p <= 40; ++p) {
    const double w = condensate_local_distribution(n, p);
    s += w;
    EXPECT_LE(w, 1.0 / (std::tgamma(p + 1.0) * std::numbers::e) * (1 + 1e-5)) << p;
  }
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Sector, OneElectronIsometry) {
  const QubitLayout l = QubitLayout::standard(2, 2, 3);
  for (bool sym : {false, true}) {
    const dense::SparseOp w = one_electron_sector(l, sym);
    EXPECT_EQ(w.cols(), sym ? 64 : 128);
    const MatrixXcd g = MatrixXcd(dense::SparseOp(w.adjoint()) * w);
    EXPECT_LT((g - MatrixXcd::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_THROW(one_electron_sector(QubitLayout::standard(3, 3, 2), true), ConfigError);
}

TEST(Sector, SpectrumAgreesWithDenseHamiltonian) {
  const QubitLayout l = QubitLayout::standard(2, 2, 3);
  const HamiltonianSpec h = holstein(1.0, 0.8, 1.0, 2);
  const MatrixXcd hd = dense::hamiltonian(h, l);
  const dense::SparseOp w = one_electron_sector(l, true);
  const MatrixXcd wd = MatrixXcd(w);
  // Invariance: the sector is mapped into itself.
  EXPECT_LT((hd * wd - wd * (wd.adjoint() * hd * wd)).cwiseAbs().maxCoeff(), 1e-12);
  const SectorSpectrum s(h, l, w);
  const ComplexEigen e = eigh(MatrixXcd(wd.adjoint() * hd * wd));
  for (int k = 0; k < 64; ++k) EXPECT_NEAR(s.energies()[k], e.values[k], 1e-10);

  // Evolution matches the dense propagator on a sector state.
  std::vector<std::complex<double>> psi = s.eigenstate(0);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += 0.3 * s.eigenstate(5)[i];
  const double nrm = std::sqrt(std::norm(1.0) + 0.09);
  for (auto& a : psi) a /= nrm;
  const Eigen::Map<const Eigen::VectorXcd> pv(psi.data(), psi.size());
  const Eigen::VectorXcd want = dense::propagator(h, l, 0.7) * pv;
  const std::vector<std::complex<double>> got = s.evolve(psi, 0.7);
  EXPECT_LT((Eigen::Map<const Eigen::VectorXcd>(got.data(), got.size()) - want).norm(), 1e-10);
  EXPECT_LT(s.leakage(psi), 1e-12);
}

TEST(Sector, GridPolaronNearFockValue) {
  // The grid encoding reproduces the Fock ground energy once the register
  // holds enough oscillator levels.
  const double g = holstein_g(1.0, 1.0, 1.0);
  const QubitLayout l = QubitLayout::standard(2, 2, 5);
  const SectorSpectrum s(holstein(1.0, g, 1.0, 2), l, one_electron_sector(l, true));
  EXPECT_NEAR(s.energies()[0], ed_holstein(1.0, g, 1.0, 2, 30).e0(), 1e-6);
}

TEST(DensePropagator, IdentityAndUnitarity) {
  const QubitLayout l = QubitLayout::standard(2, 2, 2);
  HamiltonianSpec empty;
  empty.n_orbitals = 2;
  empty.n_oscillators = 2;
  const MatrixXcd id = dense_propagator(empty, l, 1.0);
  EXPECT_LT((id - MatrixXcd::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-14);
  const MatrixXcd u = dense_propagator(holstein(1.0, 1.2, 0.8, 2), l, 0.9);
  EXPECT_LT((u.adjoint() * u - MatrixXcd::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-11);
}

}  // namespace
}  // namespace fbsim::oracle
