#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pokesim/operators.hpp"

namespace pokesim {

struct SolverOptions {
  int k = 12;
  double tol = 1e-8;  // residual bound relative to ||H||_1
  int max_restarts = 60;
  std::uint64_t seed = 20210701;
  bool shift_invert = true;
  std::optional<double> shift;  // must lie below the spectrum; defaults to a certified placement
  int krylov_dim = 0;           // 0: chosen from k
};

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;     // dimension x k, orthonormal columns
  std::vector<double> residuals;    // ||H v - lambda v||_2
  int iterations = 0;               // total Lanczos steps
  int restarts = 0;
  double norm_estimate = 0;  // ||H||_1

  std::size_t size() const { return eigenvalues.size(); }
  std::span<const double> vector(std::size_t i) const {
    return {eigenvectors.col(static_cast<Eigen::Index>(i)).data(), static_cast<std::size_t>(eigenvectors.rows())};
  }
};

/// Lowest k eigenpairs of a real symmetric OperatorMatrix.
///
/// Lanczos with full (twice-applied) reorthogonalisation, explicit restarts
/// and locking of converged Ritz pairs; exact and near-exact degeneracies are
/// recovered by restarting in the deflated complement. In shift-invert mode
/// the shift is placed below the spectrum, certified by a successful
/// Cholesky factorisation, and the final set is certified to contain every
/// eigenvalue below the k-th one by an LDL^T inertia count.
///
/// Throws DomainError for non-real or non-symmetric input or k outside
/// [1, dim/4], SolverError when restarts are exhausted.
Spectrum lowest_eigenpairs(const OperatorMatrix& H, const SolverOptions& options = {});

struct ResidualReport {
  std::vector<double> residuals;
  double orthonormality_defect = 0;  // max |<v_i, v_j> - delta_ij|
};

ResidualReport residual_report(const OperatorMatrix& H, const Spectrum& spectrum);

/// max_j sum_i |H_ij|
double one_norm(const SparseMatrix& H);

}  // namespace pokesim
