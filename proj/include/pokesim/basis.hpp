#pragma once

#include <cstddef>
#include <vector>

#include "pokesim/circuit.hpp"

namespace pokesim {

/// Uniform grid for the phi coordinate.
///
/// Line grids carry hard walls at +-phi_max: n_phi interior points with
/// spacing 2 phi_max / (n_phi + 1), symmetric about zero. Periodic grids
/// sample [0, period) with spacing period / n_phi.
struct PhiGrid {
  PhiPeriodicity kind = PhiPeriodicity::Line;
  double phi_max = 8.0;  // Line only
  int n_phi = 512;

  double period() const;
  double spacing() const;
  std::vector<double> points() const;
  bool periodic() const { return kind != PhiPeriodicity::Line; }
};

/// Tensor-product basis: phi grid (outer) x chi states x theta states
/// (inner). The theta index is fastest.
///
/// Periodic modes use the real Fourier basis with labels -m..m: 0 is the
/// constant, +n is sqrt(2) cos(n x) and -n is sqrt(2) sin(n x), each over
/// sqrt(2 pi). |label| is the charge magnitude. Hamiltonians stay real and
/// charge operators become i times a real antisymmetric matrix.
struct BasisConfig {
  int n_theta_max = 20;
  PhiGrid phi;
  int chi_levels = 0;     // Fourier cutoff for the chi mode, 0 when unused
  int stencil_order = 6;  // 2, 4 or 6

  int theta_states() const { return 2 * n_theta_max + 1; }
  int chi_states() const { return chi_levels > 0 ? 2 * chi_levels + 1 : 1; }
  std::size_t dimension() const;
  std::size_t index(int phi_point, int chi_label, int theta_label) const;
};

/// Throws DomainError on an invalid basis.
void validate(const BasisConfig& basis);

BasisConfig default_basis(PhiPeriodicity periodicity);

}  // namespace pokesim
