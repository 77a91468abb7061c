#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pokesim/units.hpp"

namespace pokesim {

enum class Variant { Pokemon, ZeroPi, ShuntedBifluxon, PokemonJJPair, PokemonJJTwoPairs };

/// How the phi coordinate of the reduced Hamiltonian is represented.
enum class PhiPeriodicity { Line, Period2Pi, Period4Pi };

std::string_view to_string(Variant v);
std::string_view to_string(PhiPeriodicity p);
Variant variant_from_string(std::string_view name);
PhiPeriodicity periodicity_of(Variant v);
bool is_jj_variant(Variant v);

/// Circuit elements in SI units (F, H); junction energies in the configured unit.
struct CircuitElements {
  double C_s = 0;
  double C_J = 0;
  std::optional<double> C_L;  // Pokemon only; 0 reduces to the shunted bifluxon
  std::optional<double> L;    // linear-inductor variants
  double E_J = 0;
  std::optional<double> E_Jprime;  // JJ variants
  std::optional<double> C_Jprime;  // JJ variants
};

/// Energies given directly, all in the configured unit.
struct DirectEnergies {
  double E_J = 0;
  double E_ctheta = 0;
  double E_cphi = 0;
  std::optional<double> E_L;
  std::optional<double> E_Jprime;
  std::optional<double> E_cchi;  // JJ pair
  std::optional<double> E_cxi;   // two JJ pairs
};

struct CircuitSpec {
  Variant variant = Variant::Pokemon;
  std::variant<CircuitElements, DirectEnergies> parameters = DirectEnergies{};
  double f = 0.0;  // Phi_ext / Phi_0
  EnergyUnit unit;
};

/// Variant-resolved energies consumed by assembly, analytics and noise code.
struct DerivedEnergies {
  Variant variant = Variant::Pokemon;
  double E_J = 0;
  double E_ctheta = 0;
  double E_cphi = 0;
  double E_L = 0;       // linear-inductor variants, 0 otherwise
  double E_J_eff = 0;   // E_J^(1) (pair) or E_J^(2) (two pairs), 0 otherwise
  std::optional<double> E_Jprime;
  std::optional<double> E_cchi;
  std::optional<double> E_cxi;
  std::optional<double> omega_chi;  // harmonic frequency of the fast junction-pair mode
  PhiPeriodicity periodicity = PhiPeriodicity::Line;
  // Effective masses in SI (J s^2), available only for element-level input.
  std::optional<double> mass_theta;
  std::optional<double> mass_phi;
};

/// e^2 / (4C) expressed in `unit`. Throws DomainError for C <= 0.
double capacitance_to_charging_energy(double capacitance, const EnergyUnit& unit);

/// 2 (Phi0/2pi)^2 / L in `unit` (the pokemon inductive energy; the 0-pi value is half).
double inductance_to_energy(double inductance, const EnergyUnit& unit);

DerivedEnergies derive_energies(const CircuitSpec& spec);

/// Qubit splitting implied by the closed forms for the given variant.
double analytic_splitting(const DerivedEnergies& e);

/// Advisory checks; never throws.
std::vector<std::string> validate_regime(const DerivedEnergies& e);

}  // namespace pokesim
