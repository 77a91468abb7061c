#include <cmath>

#include <gtest/gtest.h>

#include "pokesim/analytic.hpp"
#include "pokesim/circuit.hpp"
#include "pokesim/errors.hpp"

using namespace pokesim;

namespace {

CircuitSpec elements(Variant v, CircuitElements el, EnergyUnit unit = {}) {
  CircuitSpec spec;
  spec.variant = v;
  spec.parameters = el;
  spec.unit = unit;
  return spec;
}

CircuitElements pokemon_elements() {
  CircuitElements el;
  el.C_s = 100e-15;
  el.C_J = 5e-15;
  el.C_L = 50e-15;
  el.L = 400e-9;
  el.E_J = 10.0;
  return el;
}

CircuitSpec direct(Variant v, DirectEnergies d) {
  CircuitSpec spec;
  spec.variant = v;
  spec.parameters = d;
  return spec;
}

}  // namespace

TEST(ChargingEnergy, HundredFemtofaradIsAbout97MHz) {
  const double e = 1.602176634e-19, h = 6.62607015e-34;
  const double expected = e * e / (4.0 * 100e-15) / h / 1e6;
  const double value = capacitance_to_charging_energy(100e-15, EnergyUnit::from_label("MHz"));
  EXPECT_NEAR(value, expected, 1e-12 * expected);
  EXPECT_NEAR(value, 96.85, 0.01);
}

TEST(ChargingEnergy, RejectsNonPositiveCapacitance) {
  EXPECT_THROW(capacitance_to_charging_energy(0.0, {}), DomainError);
  EXPECT_THROW(capacitance_to_charging_energy(-1e-15, {}), DomainError);
  EXPECT_THROW(inductance_to_energy(0.0, {}), DomainError);
}

TEST(InductiveEnergy, MatchesFluxQuantumDefinition) {
  const double phi0 = 6.62607015e-34 / (2.0 * 1.602176634e-19);
  const double L = 160e-9;
  const double expected = 2.0 * std::pow(phi0 / (2.0 * M_PI), 2) / L / 6.62607015e-34 / 1e9;
  EXPECT_NEAR(inductance_to_energy(L, {}), expected, 1e-12 * expected);
}

TEST(Elements, PokemonMassRatio) {
  const auto e = derive_energies(elements(Variant::Pokemon, pokemon_elements()));
  EXPECT_NEAR(e.E_ctheta / e.E_cphi, 205.0 / 105.0, 1e-12);
  ASSERT_TRUE(e.mass_theta && e.mass_phi);
  EXPECT_NEAR(*e.mass_phi / *e.mass_theta, 205.0 / 105.0, 1e-12);
  EXPECT_EQ(e.periodicity, PhiPeriodicity::Line);
}

TEST(Elements, ZeroCLReducesToShuntedBifluxon) {
  auto el = pokemon_elements();
  el.C_L = 0.0;
  const auto pokemon = derive_energies(elements(Variant::Pokemon, el));
  el.C_L.reset();
  const auto bifluxon = derive_energies(elements(Variant::ShuntedBifluxon, el));
  EXPECT_DOUBLE_EQ(pokemon.E_ctheta, pokemon.E_cphi);
  EXPECT_DOUBLE_EQ(bifluxon.E_ctheta, bifluxon.E_cphi);
  EXPECT_DOUBLE_EQ(pokemon.E_cphi, bifluxon.E_cphi);
  EXPECT_DOUBLE_EQ(pokemon.E_L, bifluxon.E_L);
}

TEST(Elements, ZeroPiUsesJunctionCapacitanceAndHalfInductiveEnergy) {
  auto el = pokemon_elements();
  el.C_L.reset();
  const auto zero_pi = derive_energies(elements(Variant::ZeroPi, el));
  const auto pokemon = derive_energies(elements(Variant::Pokemon, pokemon_elements()));
  EXPECT_NEAR(zero_pi.E_cphi, capacitance_to_charging_energy(5e-15, {}), 1e-12);
  EXPECT_NEAR(zero_pi.E_L, 0.5 * pokemon.E_L, 1e-12 * pokemon.E_L);
}

TEST(Elements, MissingOrForbiddenElementsThrow) {
  auto el = pokemon_elements();
  el.C_L.reset();
  EXPECT_THROW(derive_energies(elements(Variant::Pokemon, el)), DomainError);
  el = pokemon_elements();
  el.L.reset();
  EXPECT_THROW(derive_energies(elements(Variant::Pokemon, el)), DomainError);
  el = pokemon_elements();
  EXPECT_THROW(derive_energies(elements(Variant::ZeroPi, el)), DomainError);
  el.C_s = -1e-15;
  EXPECT_THROW(derive_energies(elements(Variant::Pokemon, el)), DomainError);
}

TEST(Elements, JunctionPairEnergies) {
  CircuitElements el;
  el.C_s = 100e-15;
  el.C_J = 5e-15;
  el.C_Jprime = 20e-15;
  el.E_Jprime = 10.0;
  el.E_J = 10.0;
  const auto e = derive_energies(elements(Variant::PokemonJJPair, el));
  EXPECT_EQ(e.periodicity, PhiPeriodicity::Period2Pi);
  EXPECT_NEAR(e.E_cphi, capacitance_to_charging_energy(125e-15, {}), 1e-12);
  ASSERT_TRUE(e.E_cchi);
  EXPECT_NEAR(*e.E_cchi, capacitance_to_charging_energy(20e-15, {}), 1e-12);
  const double eta = 0.5 * std::sqrt(*e.E_cchi / 10.0);
  EXPECT_NEAR(e.E_J_eff, 20.0 * std::exp(-eta), 1e-12);

  const auto two = derive_energies(elements(Variant::PokemonJJTwoPairs, el));
  EXPECT_EQ(two.periodicity, PhiPeriodicity::Period4Pi);
  EXPECT_NEAR(two.E_cphi, capacitance_to_charging_energy(115e-15, {}), 1e-12);
}

TEST(Direct, ConsistencyChecksPerVariant) {
  DirectEnergies d{10.0, 0.1, 0.09, 1.0, {}, {}, {}};
  EXPECT_NO_THROW(derive_energies(direct(Variant::Pokemon, d)));
  EXPECT_THROW(derive_energies(direct(Variant::ZeroPi, d)), DomainError);
  EXPECT_THROW(derive_energies(direct(Variant::ShuntedBifluxon, d)), DomainError);
  d.E_cphi = 10.0;
  EXPECT_NO_THROW(derive_energies(direct(Variant::ZeroPi, d)));
  EXPECT_THROW(derive_energies(direct(Variant::Pokemon, d)), DomainError);
  d.E_cphi = 0.1;
  EXPECT_NO_THROW(derive_energies(direct(Variant::ShuntedBifluxon, d)));
  d.E_L.reset();
  EXPECT_THROW(derive_energies(direct(Variant::Pokemon, d)), DomainError);
}

TEST(Direct, JunctionVariantsNeedPairEnergies) {
  DirectEnergies d{10.0, 0.1, 0.09, {}, 10.0, 0.1, {}};
  const auto e = derive_energies(direct(Variant::PokemonJJPair, d));
  EXPECT_NEAR(e.E_J_eff, 20.0 * std::exp(-0.05), 1e-12);
  EXPECT_NEAR(analytic_splitting(e), 2.0 * e.E_J_eff, 1e-12);
  EXPECT_THROW(derive_energies(direct(Variant::PokemonJJTwoPairs, d)), DomainError);
  d.E_L = 1.0;
  EXPECT_THROW(derive_energies(direct(Variant::PokemonJJPair, d)), DomainError);
}

TEST(Variants, NamesRoundTrip) {
  for (auto v : {Variant::Pokemon, Variant::ZeroPi, Variant::ShuntedBifluxon, Variant::PokemonJJPair,
                 Variant::PokemonJJTwoPairs}) {
    EXPECT_EQ(variant_from_string(to_string(v)), v);
  }
  EXPECT_THROW(variant_from_string("pokemon_jj"), DomainError);
}

TEST(Units, Labels) {
  EXPECT_EQ(EnergyUnit::from_label("MHz").hz, 1e6);
  EXPECT_THROW(EnergyUnit::from_label("THz"), DomainError);
  EXPECT_NEAR(EnergyUnit{}.angular() * EnergyUnit{}.time_unit(), 1.0, 1e-15);
}

TEST(Regime, WarningsDoNotThrow) {
  const auto fig = derive_energies(direct(Variant::Pokemon, {10.0, 0.1, 0.09, 1.0, {}, {}, {}}));
  EXPECT_TRUE(validate_regime(fig).empty());
  const auto weak = derive_energies(direct(Variant::Pokemon, {1.0, 0.5, 0.5, 1.0, {}, {}, {}}));
  EXPECT_GE(validate_regime(weak).size(), 2u);
  const auto rotor = derive_energies(direct(Variant::Pokemon, {0.0, 1.0, 0.09, 1.0, {}, {}, {}}));
  EXPECT_EQ(validate_regime(rotor).size(), 1u);
  EXPECT_EQ(analytic_splitting(rotor), 0.0);
}
