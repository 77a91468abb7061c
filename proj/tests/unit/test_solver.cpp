#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "pokesim/errors.hpp"
#include "pokesim/lanczos.hpp"
#include "pokesim/operators.hpp"

using namespace pokesim;

namespace {

OperatorMatrix diagonal(const std::vector<double>& d) {
  OperatorMatrix op;
  const auto n = static_cast<Eigen::Index>(d.size());
  op.values.resize(n, n);
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index i = 0; i < n; ++i) t.emplace_back(i, i, d[static_cast<std::size_t>(i)]);
  op.values.setFromTriplets(t.begin(), t.end());
  return op;
}

DerivedEnergies energies(double E_J, double E_L, double E_ctheta, double E_cphi, Variant v = Variant::Pokemon) {
  DerivedEnergies e;
  e.variant = v;
  e.E_J = E_J;
  e.E_L = E_L;
  e.E_ctheta = E_ctheta;
  e.E_cphi = E_cphi;
  return e;
}

BasisConfig small() {
  BasisConfig b;
  b.n_theta_max = 3;
  b.phi.n_phi = 32;
  b.phi.phi_max = 4.0;
  return b;
}

}  // namespace

TEST(Lanczos, DiagonalWithDegeneracies) {
  std::vector<double> d;
  for (int i = 0; i < 200; ++i) d.push_back(static_cast<double>((i * 37) % 50));
  SolverOptions opt;
  opt.k = 8;
  const auto s = lowest_eigenpairs(diagonal(d), opt);
  const std::vector<double> expected{0, 0, 0, 0, 1, 1, 1, 1};
  ASSERT_EQ(s.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(s.eigenvalues[i], expected[i], 1e-10);
}

TEST(Lanczos, MatchesDenseSolver) {
  const auto H = assemble_hamiltonian(energies(10.0, 1.0, 0.1, 0.09), small(), 0.05);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(Eigen::MatrixXd(H.values));
  SolverOptions opt;
  opt.k = 12;
  const auto s = lowest_eigenpairs(H, opt);
  for (int i = 0; i < opt.k; ++i) {
    EXPECT_NEAR(s.eigenvalues[static_cast<std::size_t>(i)], dense.eigenvalues()[i], 1e-8 * s.norm_estimate) << i;
  }
  const auto report = residual_report(H, s);
  EXPECT_LT(report.orthonormality_defect, 1e-12);
  for (double r : report.residuals) EXPECT_LE(r, opt.tol * s.norm_estimate);
}

TEST(Lanczos, PlainModeMatchesShiftInvert) {
  const auto H = assemble_hamiltonian(energies(2.0, 1.0, 0.5, 0.5), small(), 0.0);
  SolverOptions opt;
  opt.k = 4;
  const auto si = lowest_eigenpairs(H, opt);
  opt.shift_invert = false;
  opt.max_restarts = 400;
  const auto plain = lowest_eigenpairs(H, opt);
  for (int i = 0; i < opt.k; ++i) EXPECT_NEAR(si.eigenvalues[i], plain.eigenvalues[i], 1e-7 * si.norm_estimate);
}

TEST(Lanczos, RotorDegeneraciesAreResolved) {
  const auto H = assemble_hamiltonian(energies(0.0, 1.0, 0.1, 1.0, Variant::ZeroPi), small(), 0.0);
  SolverOptions opt;
  opt.k = 5;
  const auto s = lowest_eigenpairs(H, opt);
  const std::vector<double> gaps{0.0, 0.4, 0.4, 1.6, 1.6};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(s.eigenvalues[i] - s.eigenvalues[0], gaps[i], 1e-9);
}

TEST(Lanczos, DeterministicForFixedSeed) {
  const auto H = assemble_hamiltonian(energies(10.0, 1.0, 0.1, 0.09), small(), 0.0);
  const auto a = lowest_eigenpairs(H);
  const auto b = lowest_eigenpairs(H);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_TRUE(a.eigenvectors == b.eigenvectors);
  SolverOptions other;
  other.seed = 7;
  const auto c = lowest_eigenpairs(H, other);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.eigenvalues[i], c.eigenvalues[i], 1e-8 * a.norm_estimate);
}

TEST(Lanczos, SignConvention) {
  const auto H = assemble_hamiltonian(energies(10.0, 1.0, 0.1, 0.09), small(), 0.0);
  const auto s = lowest_eigenpairs(H);
  for (Eigen::Index i = 0; i < s.eigenvectors.cols(); ++i) {
    Eigen::Index arg;
    s.eigenvectors.col(i).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(s.eigenvectors(arg, i), 0.0);
  }
}

TEST(Lanczos, RejectsInvalidInput) {
  const auto H = assemble_hamiltonian(energies(10.0, 1.0, 0.1, 0.09), small(), 0.0);
  SolverOptions opt;
  opt.k = 0;
  EXPECT_THROW(lowest_eigenpairs(H, opt), DomainError);
  opt.k = static_cast<int>(H.dimension());
  EXPECT_THROW(lowest_eigenpairs(H, opt), DomainError);
  EXPECT_THROW(lowest_eigenpairs(assemble_observable(Observable::Ntheta, small())), DomainError);

  OperatorMatrix skew = diagonal(std::vector<double>(64, 1.0));
  skew.values.coeffRef(0, 1) = 1.0;
  EXPECT_THROW(lowest_eigenpairs(skew), DomainError);
}

TEST(Lanczos, ShiftAboveSpectrumIsRejected) {
  const auto H = assemble_hamiltonian(energies(10.0, 1.0, 0.1, 0.09), small(), 0.0);
  SolverOptions opt;
  opt.shift = 50.0;
  EXPECT_THROW(lowest_eigenpairs(H, opt), SolverError);
  opt.shift = -1.0;
  EXPECT_NO_THROW(lowest_eigenpairs(H, opt));
}

TEST(Lanczos, OneNorm) {
  SparseMatrix m(2, 2);
  m.insert(0, 0) = 1.0;
  m.insert(1, 0) = -3.0;
  m.insert(0, 1) = 2.0;
  EXPECT_EQ(one_norm(m), 4.0);
}

TEST(Convergence, PokemonSpectrumIsGridConverged) {
  const auto e = energies(10.0, 1.0, 0.1, 0.09);
  BasisConfig b;
  const auto base = lowest_eigenpairs(assemble_hamiltonian(e, b, 0.0));
  EXPECT_GE(base.eigenvalues.front(), -1e-8 * base.norm_estimate);

  BasisConfig fine = b;
  fine.phi.n_phi *= 2;
  const auto doubled = lowest_eigenpairs(assemble_hamiltonian(e, fine, 0.0));
  BasisConfig wide = b;
  wide.phi.phi_max *= 2;
  wide.phi.n_phi = 2 * b.phi.n_phi + 1;
  const auto widened = lowest_eigenpairs(assemble_hamiltonian(e, wide, 0.0));
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_LT(std::abs(doubled.eigenvalues[i] - base.eigenvalues[i]), 1e-6 * std::abs(base.eigenvalues[i])) << i;
    EXPECT_LT(std::abs(widened.eigenvalues[i] - base.eigenvalues[i]), 1e-6 * std::abs(base.eigenvalues[i])) << i;
  }
}
