#pragma once

#include <utility>
#include <vector>

#include "pokesim/basis.hpp"
#include "pokesim/circuit.hpp"

namespace pokesim::analytic {

/// Parameters of the Gaussian basis-state approximation.
struct GaussianAnsatz {
  double alpha_theta_sq = 0;  // 1/2 sqrt(E_J / E_ctheta)
  double alpha_phi_sq = 0;    // 1/2 sqrt((E_J + E_L) / E_cphi)
  double center0_theta = 0;
  double center0_phi = 0;
  double center1_theta = 0;  // pi
  double center1_phi = 0;    // pi E_J / (E_J + E_L)
};

GaussianAnsatz gaussian_ansatz(double E_J, double E_L, double E_ctheta, double E_cphi);

/// E_J E_L pi^2 / (E_J + E_L)
double epsilon10(double E_J, double E_L);

/// Flux-noise dephasing amplitude
///   2 pi E_J sin(E_L pi/(E_J+E_L)) exp{-1/2 (sqrt(E_ct/E_J) + sqrt(E_cp/(E_J+E_L)))}.
double a_f(double E_J, double E_L, double E_ctheta, double E_cphi);

/// Decay exponent of the interwell charge matrix elements
///   pi^2/8 [sqrt(E_J/E_ct) + (E_J/(E_J+E_L))^2 sqrt((E_J+E_L)/E_cp)].
double gamma(double E_J, double E_L, double E_ctheta, double E_cphi);

struct BFactors {
  double theta = 0;  // |B_theta| = 2 pi sqrt(E_ct E_J) e^{-gamma}
  double phi = 0;    // |B_phi|   = 2 pi sqrt(E_cp (E_J+E_L)) e^{-gamma}
};

BFactors b_factors(double E_J, double E_L, double E_ctheta, double E_cphi);

struct PairEnergy {
  double E_J1 = 0;       // 2 E'_J e^{-eta}, eta = 1/2 sqrt(E_cchi/E'_J)
  double omega_chi = 0;  // 4 sqrt(E'_J E_cchi)
  double epsilon10 = 0;  // 2 E_J1
  bool regime_warning = false;  // E_cchi >= E'_J
};

PairEnergy effective_ej_pair(double E_Jprime, double E_cchi);

struct TwoPairEnergy {
  double E_J2 = 0;       // 4 E'_J e^{-(eta + eta')}, eta' = eta/2 e^{eta/2}
  double epsilon10 = 0;  // E_J2
  bool regime_warning = false;
};

TwoPairEnergy effective_ej_two_pairs(double E_Jprime, double E_cxi);

/// Normalised Gaussian basis state (which = 0 or 1) on a Line basis. The
/// theta factor is wrapped onto the circle through its Fourier coefficients
/// exp(-n^2/(2 alpha^2)) e^{-i n c}. Throws DomainError for
/// periodic phi bases.
std::vector<double> gaussian_ansatz_vector(const DerivedEnergies& energies, const BasisConfig& basis, int which);

}  // namespace pokesim::analytic
