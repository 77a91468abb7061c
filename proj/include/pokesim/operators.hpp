#pragma once

#include <complex>
#include <span>

#include <Eigen/SparseCore>

#include "pokesim/basis.hpp"
#include "pokesim/circuit.hpp"

namespace pokesim {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Sparse Hermitian operator on a BasisConfig.
///
/// The stored matrix is real. When `imaginary` is set the represented
/// operator is i * values, with `values` real antisymmetric; this is how
/// the charge operators are represented.
struct OperatorMatrix {
  SparseMatrix values;
  bool imaginary = false;
  BasisConfig basis;

  Eigen::Index dimension() const { return values.rows(); }
  bool real() const { return !imaginary; }
};

enum class Observable {
  Ntheta,
  Nphi,
  Nchi,
  CosTheta,
  CosThetaSinPhi,  // cos(theta) sin(phi - pi f)
  CosThetaCosPhi,  // cos(theta) cos(phi - pi f)
  Phi,
  PhiSquared,
  SinPhi,
  CosPhi,
  CosChi,
};

/// Reduced two-mode Hamiltonian H_J + V(phi). Throws DomainError when the
/// basis periodicity does not match the variant or chi_levels > 0.
OperatorMatrix assemble_hamiltonian(const DerivedEnergies& energies, const BasisConfig& basis, double f);

/// Observable on the same basis. `f` only enters the flux-derivative forms.
OperatorMatrix assemble_observable(Observable kind, const BasisConfig& basis, double f = 0.0);

/// Three-mode pair Hamiltonian
///   H_J + 2E'_J (1 - cos phi) cos chi + 4E_cchi N_chi^2 + 2E'_J (1 - cos chi)
/// on a Period2Pi phi grid and a chi Fourier basis of cutoff chi_levels >= 4.
OperatorMatrix assemble_jj_pair_full(const DerivedEnergies& energies, const BasisConfig& basis, double f);

/// <bra| op |ket> for real vectors.
std::complex<double> matrix_element(const OperatorMatrix& op, std::span<const double> bra,
                                    std::span<const double> ket);

/// <v| op |v> for a real operator and real vector.
double expectation(const OperatorMatrix& op, std::span<const double> v);

/// Central finite-difference stencil coefficients c_0..c_p for the second
/// (derivative = 2) or first (derivative = 1) derivative at the given even
/// order, for unit spacing. For the first derivative c_0 = 0 and the stencil
/// is antisymmetric.
std::vector<double> central_stencil(int derivative, int order);

}  // namespace pokesim
