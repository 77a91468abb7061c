#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "pokesim/basis.hpp"
#include "pokesim/circuit.hpp"

namespace pokesim {

/// |psi(theta, phi)|^2 and the potential on a theta x phi grid. Matrices are
/// stored row-major with theta as the row index.
struct WavefunctionGrid {
  std::vector<double> theta;  // uniform on [-pi, pi)
  std::vector<double> phi;    // the basis phi points
  std::vector<double> psi2;   // theta.size() x phi.size()
  std::vector<double> potential;
  std::size_t state = 0;
  double eigenvalue = 0;

  double at(std::size_t i_theta, std::size_t j_phi) const { return psi2[i_theta * phi.size() + j_phi]; }
  /// sum |psi|^2 dtheta dphi
  double norm() const;
};

/// Potential 2E_J - 2E_J cos(theta) cos(phi - pi f) + V(phi) of the reduced model.
double potential(const DerivedEnergies& energies, double theta, double phi, double f);

/// Reconstructs |psi|^2 from a Fourier x grid eigenvector by summing the
/// theta modes; chi states, when present, are summed incoherently.
WavefunctionGrid wavefunction_grid(const DerivedEnergies& energies, const BasisConfig& basis, double f,
                                   std::span<const double> vector, std::size_t state, double eigenvalue,
                                   int n_theta_grid = 256);

/// CSV with columns theta,phi,psi2,U.
void write_wavefunction_csv(const WavefunctionGrid& grid, const std::filesystem::path& path);

}  // namespace pokesim
