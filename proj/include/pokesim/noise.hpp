#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pokesim/analytic.hpp"
#include "pokesim/circuit.hpp"
#include "pokesim/lanczos.hpp"
#include "pokesim/operators.hpp"

namespace pokesim {

/// Noise power spectrum S(omega) in SI (s), omega in rad/s.
/// Either K/|omega| or a tabulated override interpolated log-log.
struct NoiseSpectrum {
  double K = 0;
  std::vector<std::pair<double, double>> table;  // (omega, S), ascending omega

  bool tabulated() const { return !table.empty(); }
  double operator()(double omega) const;
};

struct NoiseModel {
  NoiseSpectrum theta{1.7e-6, {}};
  NoiseSpectrum phi{1.7e-6, {}};
  NoiseSpectrum flux{3e-12, {}};
  double omega_c = 2.0 * constants::kPi;  // rad/s
};

void validate(const NoiseModel& noise);

struct QubitStates {
  std::size_t index0 = 0;
  std::size_t index1 = 0;
  double loc0 = 0;  // <cos theta>
  double loc1 = 0;
  double epsilon10 = 0;  // energy unit
  double omega10 = 0;    // internal units (hbar = 1), numerically equal to epsilon10
  // Qubit vectors after localisation inside near-degenerate clusters.
  std::vector<double> state0;
  std::vector<double> state1;
  std::size_t cluster0 = 1;  // number of levels in the cluster each state was taken from
  std::size_t cluster1 = 1;
};

struct IdentificationOptions {
  double threshold = 0.5;          // |<cos theta>| needed to count as localised
  double degeneracy_tol = 1e-6;    // clusters: |dE| < degeneracy_tol * energy_scale
  double energy_scale = 1.0;       // usually E_J
};

/// |0> is the lowest state with <cos theta> > threshold, |1> the lowest with
/// <cos theta> < -threshold. When a chosen level belongs to a near-degenerate
/// cluster the localiser (phi on Line grids, sin phi on periodic ones) is
/// diagonalised inside it; among the rotated states on the right side of the
/// threshold |1> takes the largest localiser value and |0> the one closest to
/// zero. When no level passes a threshold, cos theta itself is diagonalised
/// inside each cluster and the rotated states are searched. epsilon10 is 0
/// when both states come from the same cluster.
/// Throws IdentificationError ("increase k") otherwise.
QubitStates identify_qubit_states(const Spectrum& spectrum, const OperatorMatrix& cos_theta,
                                  const OperatorMatrix* localizer = nullptr,
                                  const IdentificationOptions& options = {});

/// A_f = <1|X_f|1> - <0|X_f|0>, X_f = -2 pi E_J cos(theta) sin(phi - pi f).
double dephasing_amplitude_numeric(const QubitStates& states, const OperatorMatrix& cos_theta_sin_phi,
                                   double E_J);

struct ChargeDephasing {
  double first_theta = 0;   // <1|X^(1)_theta|1> - <0|X^(1)_theta|0>
  double first_phi = 0;
  double second_theta = 0;  // same for X^(2) = 8 E_c
  double second_phi = 0;
};

/// Diagonal differences of the charge-noise operators. Throws DomainError
/// if the supplied operators are not the Ntheta / Nphi observables' shapes.
ChargeDephasing charge_dephasing_check(const QubitStates& states, const OperatorMatrix& n_theta,
                                       const OperatorMatrix& n_phi, const DerivedEnergies& energies);

/// Same, for arbitrary (possibly complex) state vectors. Used to show the
/// null relies on real eigenvectors.
double diagonal_difference(const OperatorMatrix& op, const Eigen::VectorXcd& state1, const Eigen::VectorXcd& state0);

struct FluxRelaxation {
  double first = 0;   // |<0| -2 pi E_J cos th sin(phi - pi f) |1>|
  double second = 0;  // |<0|  2 pi E_J cos th cos(phi - pi f) |1>|
};

FluxRelaxation flux_relaxation_check(const QubitStates& states, const OperatorMatrix& cos_theta_sin_phi,
                                     const OperatorMatrix& cos_theta_cos_phi, double E_J);

struct RelaxationElements {
  double theta = 0;  // 8 E_ct |<0|N_theta|1>|
  double phi = 0;    // 8 E_cp |<0|N_phi|1>|
};

RelaxationElements relaxation_elements_numeric(const QubitStates& states, const OperatorMatrix& n_theta,
                                               const OperatorMatrix& n_phi, const DerivedEnergies& energies);

/// Dephasing exponent
///   eta(t) = |A_f|^2 / hbar^2 int_{omega_c}^inf S_f(omega) sin^2(omega t/2) / (2 pi (omega/2)^2) d omega
/// with t in seconds and A_f in `unit`. Adaptive Gauss-Kronrod below
/// omega t = 100 and an exact closed-form tail above it (1/f spectra).
double dephasing_eta(double t, double A_f, const NoiseModel& noise, const EnergyUnit& unit);

/// Same integral through a fixed composite Gauss-Legendre rule (independent route).
double dephasing_eta_composite(double t, double A_f, const NoiseModel& noise, const EnergyUnit& unit,
                               int panels = 400);

struct DephasingTime {
  bool negligible = false;    // eta(T_max) < 1, or A_f = 0, or K_f = 0
  double T_phi = 0;           // s; lower bound when negligible
  double Gamma_phi = 0;       // 1/s; 0 when negligible
  bool short_time_warning = false;  // omega_c T_phi >= 1
};

/// Root of eta(T) = 1 by bracketing and bisection. T_max = 1e12 internal
/// time units (hbar / unit).
DephasingTime t_phi_solve(double A_f, const NoiseModel& noise, const EnergyUnit& unit);

struct RelaxationRates {
  double Gamma1_theta = 0;  // 1/s
  double Gamma1_phi = 0;
  double Gamma1 = 0;
  double T1 = 0;  // s; infinity when Gamma1 = 0
};

/// Golden rule Gamma_1,i = |B_i|^2 S_i(omega10) / hbar^2 with B in `unit`
/// and omega10 in internal units. Throws DomainError for omega10 <= 0.
RelaxationRates relaxation_rates(double B_theta, double B_phi, double omega10, const NoiseModel& noise,
                                 const EnergyUnit& unit);

struct AnalyticNumeric {
  double analytic = 0;
  double numeric = 0;
  double relative_deviation() const;
};

struct NoiseReport {
  AnalyticNumeric A_f;
  AnalyticNumeric B_theta;
  AnalyticNumeric B_phi;
  AnalyticNumeric epsilon10;
  double gamma_analytic = 0;
  RelaxationRates rates;            // from the numeric B values
  RelaxationRates rates_analytic;   // from the closed-form B values
  DephasingTime dephasing;          // from the numeric A_f
  double Gamma2 = 0;                // Gamma1/2 + Gamma_phi
  FluxRelaxation flux_relaxation;
  ChargeDephasing charge_dephasing;
  bool gamma_phi_significant = false;  // Gamma_phi > 0.1 Gamma1
  std::vector<std::string> warnings;
};

NoiseReport decoherence_summary(const RelaxationRates& rates, const DephasingTime& dephasing);

}  // namespace pokesim
