#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "pokesim/errors.hpp"
#include "pokesim/runner.hpp"
#include "pokesim/wavefunction.hpp"
#include "support.hpp"

using namespace pokesim;
using pokesim::testing::pokemon_reference;
using pokesim::testing::scratch_directory;
using pokesim::testing::slurp;

namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST(Runner, SpectrumCsvLayoutAndDeterminism) {
  auto c = pokemon_reference();
  c.name = "golden";
  c.outputs.directory = scratch_directory("spectrum_a");
  const auto a = run_spectrum(c);
  c.outputs.directory = scratch_directory("spectrum_b");
  const auto b = run_spectrum(c);
  ASSERT_EQ(a.size(), 2u);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(a[0].filename(), "golden_spectrum.csv");
  const auto text = slurp(a[0]);
  EXPECT_EQ(first_line(text), "index,energy,residual,cos_theta_expect,is_qubit0,is_qubit1");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), c.solver.k + 1);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(slurp(a[i]), slurp(b[i])) << a[i];
}

TEST(Runner, SplittingIsEvenInFlux) {
  const auto plus = solve_point(pokemon_reference(0.1));
  const auto minus = solve_point(pokemon_reference(-0.1));
  ASSERT_TRUE(plus.qubit && minus.qubit);
  EXPECT_NEAR(plus.qubit->epsilon10, minus.qubit->epsilon10, 1e-8 * plus.qubit->epsilon10);
}

TEST(Runner, SweepKeepsOrderAndIsolatesFailures) {
  auto c = pokemon_reference();
  c.sweep = Sweep{"circuit.E_ctheta", {0.1, -1.0, 0.12}};
  const auto rows = sweep_rows(c, 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].value, 0.1);
  EXPECT_EQ(rows[1].value, -1.0);
  EXPECT_EQ(rows[2].value, 0.12);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
  EXPECT_TRUE(rows[2].error.empty());
  EXPECT_NE(rows[0].epsilon10, rows[2].epsilon10);

  const auto serial = sweep_rows(c, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(serial[i].epsilon10, rows[i].epsilon10);
    EXPECT_EQ(serial[i].Gamma1, rows[i].Gamma1);
  }
}

TEST(Runner, SinglePointSweepMatchesRates) {
  auto c = pokemon_reference();
  c.sweep = Sweep{"circuit.f", {0.0}};
  const auto rows = sweep_rows(c, 1);
  const auto p = solve_point(c);
  const auto r = noise_report(p, c);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].epsilon10, p.qubit->epsilon10);
  EXPECT_EQ(rows[0].A_f, r.A_f.numeric);
  EXPECT_EQ(rows[0].Gamma1, r.rates.Gamma1);
  EXPECT_EQ(rows[0].T_phi, r.dephasing.T_phi);
}

TEST(Runner, WavefunctionIsNormalisedAndLocalised) {
  const auto p = solve_point(pokemon_reference());
  const auto g = wavefunction_grid(p.energies, p.basis, p.f, p.spectrum.vector(0), 0, p.spectrum.eigenvalues[0]);
  EXPECT_NEAR(g.norm(), 1.0, 1e-6);
  const double dtheta = g.theta[1] - g.theta[0], dphi = g.phi[1] - g.phi[0];
  double inside = 0;
  for (std::size_t i = 0; i < g.theta.size(); ++i) {
    for (std::size_t j = 0; j < g.phi.size(); ++j) {
      if (std::abs(g.theta[i]) < 1.0 && std::abs(g.phi[j]) < 1.0) inside += g.at(i, j) * dtheta * dphi;
    }
  }
  EXPECT_GT(inside, 0.99);

  auto c = pokemon_reference();
  c.name = "wf";
  c.outputs.directory = scratch_directory("wavefunction");
  const auto files = run_wavefunction(c, {"q0", "1"});
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(first_line(slurp(files[0])), "theta,phi,psi2,U");
  EXPECT_THROW(run_wavefunction(c, {"q7"}), ConfigError);
  EXPECT_THROW(run_wavefunction(c, {"99"}), ConfigError);
}

TEST(Runner, RatesJsonWritten) {
  auto c = pokemon_reference();
  c.name = "rates";
  c.outputs.directory = scratch_directory("rates");
  const auto files = run_rates(c);
  ASSERT_EQ(files.size(), 1u);
  const auto text = slurp(files[0]);
  for (const char* key : {"A_f", "B_theta", "B_phi", "T_phi", "Gamma1"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(Runner, CompareIdenticalConfigs) {
  const auto cmp = compare_variants({pokemon_reference(), pokemon_reference()});
  ASSERT_EQ(cmp.rows.size(), 2u);
  EXPECT_EQ(cmp.rows[1].n_phi_ratio, 1.0);
  EXPECT_EQ(cmp.rows[0].phi_variance, cmp.rows[1].phi_variance);
  EXPECT_FALSE(cmp.pokemon_vs_zero_pi);

  auto other = pokemon_reference();
  pokesim::testing::direct(other).E_J = 12.0;
  EXPECT_THROW(compare_variants({pokemon_reference(), other}), ConfigError);
}

TEST(Runner, OutputDirectoryMustBeWritable) {
  EXPECT_THROW(prepare_output_directory("/proc/pokesim_forbidden"), ConfigError);
  const auto dir = scratch_directory("prepare") / "nested" / "deeper";
  EXPECT_NO_THROW(prepare_output_directory(dir));
  EXPECT_TRUE(std::filesystem::is_directory(dir));
}
