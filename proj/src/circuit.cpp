#include "pokesim/circuit.hpp"

#include <cmath>
#include <fmt/format.h>

#include "pokesim/analytic.hpp"
#include "pokesim/errors.hpp"

namespace pokesim {

namespace {

using constants::kElementaryCharge;
using constants::kPlanck;
using constants::kReducedFluxQuantum;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(fmt::format("{} must be positive and finite (got {})", name, value));
  }
}

double require(const std::optional<double>& value, const char* name, Variant v) {
  if (!value) {
    throw DomainError(fmt::format("{} is required for variant {}", name, to_string(v)));
  }
  require_positive(*value, name);
  return *value;
}

void forbid(const std::optional<double>& value, const char* name, Variant v) {
  if (value) {
    throw DomainError(fmt::format("{} does not apply to variant {}", name, to_string(v)));
  }
}

// Joules -> configured unit.
double joules_to_unit(double joules, const EnergyUnit& unit) { return joules / kPlanck / unit.hz; }

void fill_pair_quantities(DerivedEnergies& e) {
  if (e.variant == Variant::PokemonJJPair) {
    const auto pair = analytic::effective_ej_pair(*e.E_Jprime, *e.E_cchi);
    e.E_J_eff = pair.E_J1;
    e.omega_chi = pair.omega_chi;
  } else if (e.variant == Variant::PokemonJJTwoPairs) {
    e.E_J_eff = analytic::effective_ej_two_pairs(*e.E_Jprime, *e.E_cxi).E_J2;
    e.omega_chi = 4.0 * std::sqrt(*e.E_Jprime * *e.E_cxi);
  }
}

DerivedEnergies from_elements(Variant variant, const CircuitElements& el, const EnergyUnit& unit) {
  require_positive(el.C_s, "C_s");
  require_positive(el.C_J, "C_J");
  require_positive(el.E_J, "E_J");

  DerivedEnergies e;
  e.variant = variant;
  e.periodicity = periodicity_of(variant);
  e.E_J = el.E_J;
  const double c_theta = el.C_s + el.C_J;
  e.E_ctheta = capacitance_to_charging_energy(c_theta, unit);
  const double m_scale = 2.0 * kReducedFluxQuantum * kReducedFluxQuantum;
  e.mass_theta = m_scale * c_theta;

  double c_phi = 0;
  switch (variant) {
    case Variant::Pokemon: {
      if (!el.C_L) throw DomainError("C_L is required for variant pokemon (0 gives the shunted bifluxon)");
      if (*el.C_L < 0.0 || !std::isfinite(*el.C_L)) throw DomainError("C_L must be non-negative");
      const double L = require(el.L, "L", variant);
      forbid(el.E_Jprime, "E_Jprime", variant);
      forbid(el.C_Jprime, "C_Jprime", variant);
      c_phi = el.C_s + el.C_J + 2.0 * *el.C_L;
      e.E_L = inductance_to_energy(L, unit);
      break;
    }
    case Variant::ZeroPi: {
      const double L = require(el.L, "L", variant);
      forbid(el.C_L, "C_L", variant);
      forbid(el.E_Jprime, "E_Jprime", variant);
      forbid(el.C_Jprime, "C_Jprime", variant);
      c_phi = el.C_J;
      e.E_L = 0.5 * inductance_to_energy(L, unit);
      break;
    }
    case Variant::ShuntedBifluxon: {
      const double L = require(el.L, "L", variant);
      forbid(el.C_L, "C_L", variant);
      forbid(el.E_Jprime, "E_Jprime", variant);
      forbid(el.C_Jprime, "C_Jprime", variant);
      c_phi = c_theta;
      e.E_L = inductance_to_energy(L, unit);
      break;
    }
    case Variant::PokemonJJPair:
    case Variant::PokemonJJTwoPairs: {
      forbid(el.L, "L", variant);
      forbid(el.C_L, "C_L", variant);
      e.E_Jprime = require(el.E_Jprime, "E_Jprime", variant);
      const double cp = require(el.C_Jprime, "C_Jprime", variant);
      const double mode_energy = capacitance_to_charging_energy(cp, unit);
      if (variant == Variant::PokemonJJPair) {
        c_phi = el.C_s + el.C_J + cp;
        e.E_cchi = mode_energy;
      } else {
        c_phi = el.C_s + el.C_J + 0.5 * cp;
        e.E_cxi = mode_energy;
      }
      break;
    }
  }
  e.E_cphi = variant == Variant::ShuntedBifluxon ? e.E_ctheta : capacitance_to_charging_energy(c_phi, unit);
  e.mass_phi = m_scale * c_phi;
  fill_pair_quantities(e);
  return e;
}

DerivedEnergies from_direct(Variant variant, const DirectEnergies& d) {
  if (!(d.E_J >= 0.0) || !std::isfinite(d.E_J)) throw DomainError(fmt::format("E_J must be non-negative (got {})", d.E_J));
  require_positive(d.E_ctheta, "E_ctheta");
  require_positive(d.E_cphi, "E_cphi");

  DerivedEnergies e;
  e.variant = variant;
  e.periodicity = periodicity_of(variant);
  e.E_J = d.E_J;
  e.E_ctheta = d.E_ctheta;
  e.E_cphi = d.E_cphi;

  if (is_jj_variant(variant)) {
    forbid(d.E_L, "E_L", variant);
    e.E_Jprime = require(d.E_Jprime, "E_Jprime", variant);
    if (variant == Variant::PokemonJJPair) {
      e.E_cchi = require(d.E_cchi, "E_cchi", variant);
      forbid(d.E_cxi, "E_cxi", variant);
    } else {
      e.E_cxi = require(d.E_cxi, "E_cxi", variant);
      forbid(d.E_cchi, "E_cchi", variant);
    }
    fill_pair_quantities(e);
    return e;
  }

  if (!d.E_L) throw DomainError(fmt::format("E_L is required for variant {}", to_string(variant)));
  if (!(*d.E_L >= 0.0) || !std::isfinite(*d.E_L)) throw DomainError(fmt::format("E_L must be non-negative (got {})", *d.E_L));
  e.E_L = *d.E_L;
  forbid(d.E_Jprime, "E_Jprime", variant);
  forbid(d.E_cchi, "E_cchi", variant);
  forbid(d.E_cxi, "E_cxi", variant);
  switch (variant) {
    case Variant::Pokemon:
      if (e.E_cphi > e.E_ctheta) {
        throw DomainError(fmt::format("pokemon requires E_cphi <= E_ctheta (got {} > {})", e.E_cphi, e.E_ctheta));
      }
      break;
    case Variant::ZeroPi:
      if (e.E_cphi < e.E_ctheta) {
        throw DomainError(fmt::format("zero_pi requires E_cphi >= E_ctheta (got {} < {})", e.E_cphi, e.E_ctheta));
      }
      break;
    case Variant::ShuntedBifluxon:
      if (e.E_cphi != e.E_ctheta) {
        throw DomainError("shunted_bifluxon requires E_cphi == E_ctheta (isotropic masses)");
      }
      break;
    default:
      break;
  }
  return e;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Pokemon: return "pokemon";
    case Variant::ZeroPi: return "zero_pi";
    case Variant::ShuntedBifluxon: return "shunted_bifluxon";
    case Variant::PokemonJJPair: return "pokemon_jj_pair";
    case Variant::PokemonJJTwoPairs: return "pokemon_jj_two_pairs";
  }
  return "?";
}

std::string_view to_string(PhiPeriodicity p) {
  switch (p) {
    case PhiPeriodicity::Line: return "line";
    case PhiPeriodicity::Period2Pi: return "periodic_2pi";
    case PhiPeriodicity::Period4Pi: return "periodic_4pi";
  }
  return "?";
}

Variant variant_from_string(std::string_view name) {
  for (auto v : {Variant::Pokemon, Variant::ZeroPi, Variant::ShuntedBifluxon, Variant::PokemonJJPair,
                 Variant::PokemonJJTwoPairs}) {
    if (to_string(v) == name) return v;
  }
  throw DomainError(fmt::format(
      "unknown variant '{}' (expected pokemon, zero_pi, shunted_bifluxon, pokemon_jj_pair, pokemon_jj_two_pairs)",
      name));
}

PhiPeriodicity periodicity_of(Variant v) {
  switch (v) {
    case Variant::PokemonJJPair: return PhiPeriodicity::Period2Pi;
    case Variant::PokemonJJTwoPairs: return PhiPeriodicity::Period4Pi;
    default: return PhiPeriodicity::Line;
  }
}

bool is_jj_variant(Variant v) { return v == Variant::PokemonJJPair || v == Variant::PokemonJJTwoPairs; }

double capacitance_to_charging_energy(double capacitance, const EnergyUnit& unit) {
  require_positive(capacitance, "capacitance");
  return joules_to_unit(kElementaryCharge * kElementaryCharge / (4.0 * capacitance), unit);
}

double inductance_to_energy(double inductance, const EnergyUnit& unit) {
  require_positive(inductance, "inductance");
  return joules_to_unit(2.0 * kReducedFluxQuantum * kReducedFluxQuantum / inductance, unit);
}

DerivedEnergies derive_energies(const CircuitSpec& spec) {
  if (!std::isfinite(spec.f)) throw DomainError("flux bias f must be finite");
  if (!(spec.unit.hz > 0.0)) throw DomainError("energy unit must have a positive frequency");
  if (const auto* el = std::get_if<CircuitElements>(&spec.parameters)) {
    return from_elements(spec.variant, *el, spec.unit);
  }
  return from_direct(spec.variant, std::get<DirectEnergies>(spec.parameters));
}

double analytic_splitting(const DerivedEnergies& e) {
  switch (e.variant) {
    case Variant::PokemonJJPair: return 2.0 * e.E_J_eff;
    case Variant::PokemonJJTwoPairs: return e.E_J_eff;
    default: return e.E_J > 0.0 && e.E_L > 0.0 ? analytic::epsilon10(e.E_J, e.E_L) : 0.0;
  }
}

std::vector<std::string> validate_regime(const DerivedEnergies& e) {
  std::vector<std::string> warnings;
  if (e.E_J == 0.0) {
    warnings.push_back("E_J = 0: the junction potential is absent (free rotor in theta)");
    return warnings;
  }
  if (!is_jj_variant(e.variant) && e.E_L > 0.0 && e.E_J / e.E_L < 5.0) {
    warnings.push_back(fmt::format("E_J/E_L < 5 ({:.4g}): wells are not well separated", e.E_J / e.E_L));
  }
  if (e.E_J / e.E_ctheta < 10.0) {
    warnings.push_back(fmt::format("E_J/E_ctheta < 10 ({:.4g}): theta is not in the heavy-mass regime",
                                   e.E_J / e.E_ctheta));
  }
  if (e.E_J / e.E_cphi < 10.0) {
    warnings.push_back(
        fmt::format("E_J/E_cphi < 10 ({:.4g}): phi is not in the heavy-mass regime", e.E_J / e.E_cphi));
  }
  if (is_jj_variant(e.variant) && e.omega_chi) {
    const double omega_q = analytic_splitting(e);
    if (*e.omega_chi <= omega_q) {
      warnings.push_back(fmt::format("omega_chi <= omega_q ({:.4g} <= {:.4g}): the pair mode does not stay frozen",
                                     *e.omega_chi, omega_q));
    }
    const double mode = e.E_cchi ? *e.E_cchi : *e.E_cxi;
    if (mode >= *e.E_Jprime) {
      warnings.push_back("pair charging energy >= E'_J: the effective-junction formula assumes it is much smaller");
    }
  }
  return warnings;
}

}  // namespace pokesim
