#include <cmath>
#include <limits>
#include <numbers>

#include <gsl/gsl_sf_expint.h>
#include <gtest/gtest.h>

#include "pokesim/errors.hpp"
#include "pokesim/noise.hpp"
#include "pokesim/runner.hpp"
#include "support.hpp"

using namespace pokesim;

namespace {

constexpr double kPi = std::numbers::pi;

// int_u^inf 4 sin^2(v/2) / v^3 dv
double tail_closed_form(double u) {
  const double h = std::sin(0.5 * u) / u;
  return 2.0 * h * h + std::sin(u) / u - gsl_sf_Ci(u);
}

double eta_reference(double t, double A_f, const NoiseModel& noise, const EnergyUnit& unit) {
  const double a = A_f * unit.angular();
  return a * a / (2.0 * kPi) * noise.flux.K * t * t * tail_closed_form(noise.omega_c * t);
}

const SolvedPoint& reference_point() {
  static const SolvedPoint p = solve_point(pokesim::testing::pokemon_reference());
  return p;
}

}  // namespace

TEST(Spectrum, OneOverFAndTable) {
  const NoiseSpectrum s{2.0, {}};
  EXPECT_DOUBLE_EQ(s(4.0), 0.5);
  EXPECT_DOUBLE_EQ(s(-4.0), 0.5);
  EXPECT_THROW(s(0.0), DomainError);
  const NoiseSpectrum table{0.0, {{1.0, 1.0}, {100.0, 0.01}}};
  EXPECT_NEAR(table(10.0), 0.1, 1e-15);
  EXPECT_NEAR(table(1000.0), 0.001, 1e-15);
}

TEST(Spectrum, Validation) {
  NoiseModel n;
  EXPECT_NO_THROW(validate(n));
  n.flux.K = -1.0;
  EXPECT_THROW(validate(n), DomainError);
  n = NoiseModel{};
  n.theta.table = {{2.0, 1.0}, {1.0, 1.0}};
  EXPECT_THROW(validate(n), DomainError);
  n = NoiseModel{};
  n.omega_c = 0.0;
  EXPECT_THROW(validate(n), DomainError);
}

TEST(Eta, MatchesClosedForm) {
  const NoiseModel noise;
  const EnergyUnit unit;
  for (double t : {1e-8, 1e-6, 1e-4, 1e-2, 20.0, 100.0}) {
    const double expected = eta_reference(t, 16.09, noise, unit);
    EXPECT_NEAR(dephasing_eta(t, 16.09, noise, unit), expected, 1e-9 * expected) << t;
    EXPECT_NEAR(dephasing_eta_composite(t, 16.09, noise, unit), expected, 1e-9 * expected) << t;
  }
}

TEST(Eta, QuadraticInAmplitudeLinearInStrength) {
  NoiseModel noise;
  const EnergyUnit unit;
  const double t = 3e-6;
  const double base = dephasing_eta(t, 1.5, noise, unit);
  EXPECT_EQ(dephasing_eta(t, 3.0, noise, unit), 4.0 * base);
  EXPECT_EQ(dephasing_eta(t, -1.5, noise, unit), base);
  NoiseModel a = noise, b = noise;
  a.flux.K = 1e-12;
  b.flux.K = 2e-12;
  noise.flux.K = 3e-12;
  EXPECT_NEAR(dephasing_eta(t, 1.5, a, unit) + dephasing_eta(t, 1.5, b, unit), dephasing_eta(t, 1.5, noise, unit),
              1e-14 * base);
  EXPECT_EQ(dephasing_eta(0.0, 1.5, noise, unit), 0.0);
  EXPECT_THROW(dephasing_eta(-1.0, 1.5, noise, unit), DomainError);
}

TEST(Eta, TabulatedPowerLawMatchesOneOverF) {
  NoiseModel table;
  for (double w = 1.0; w <= 1e16; w *= 10.0) table.flux.table.emplace_back(w, 3e-12 / w);
  const NoiseModel noise;
  const EnergyUnit unit;
  for (double t : {1e-7, 1e-5, 1e-3}) {
    const double expected = dephasing_eta(t, 16.09, noise, unit);
    EXPECT_NEAR(dephasing_eta(t, 16.09, table, unit), expected, 1e-4 * expected) << t;
  }
}

TEST(DephasingTime, RootAndScaling) {
  const NoiseModel noise;
  const EnergyUnit unit;
  const auto d = t_phi_solve(16.09, noise, unit);
  ASSERT_FALSE(d.negligible);
  EXPECT_NEAR(dephasing_eta(d.T_phi, 16.09, noise, unit), 1.0, 1e-6);
  EXPECT_NEAR(d.Gamma_phi * d.T_phi, 1.0, 1e-15);
  NoiseModel louder = noise;
  louder.flux.K *= 2.0;
  EXPECT_LT(t_phi_solve(16.09, louder, unit).T_phi, d.T_phi);
}

TEST(DephasingTime, SilentCases) {
  NoiseModel quiet;
  quiet.flux.K = 0.0;
  const EnergyUnit unit;
  const auto d = t_phi_solve(16.09, quiet, unit);
  EXPECT_TRUE(d.negligible);
  EXPECT_EQ(d.Gamma_phi, 0.0);
  EXPECT_TRUE(t_phi_solve(0.0, NoiseModel{}, unit).negligible);

  const auto rates = relaxation_rates(3.49e-10, 2.0e-10, 8.97, NoiseModel{}, unit);
  const auto summary = decoherence_summary(rates, d);
  EXPECT_EQ(summary.Gamma2, 0.5 * rates.Gamma1);
  EXPECT_FALSE(summary.gamma_phi_significant);
}

TEST(Relaxation, GoldenRuleValue) {
  const EnergyUnit unit;
  const NoiseModel noise;
  const double B = 3.49e-10, omega = 8.9724;
  const auto r = relaxation_rates(B, 0.0, omega, noise, unit);
  EXPECT_NEAR(r.Gamma1_theta / unit.angular(), B * B * 1.7e-6 / omega, 1e-12 * B * B * 1.7e-6 / omega);
  EXPECT_NEAR(r.Gamma1_theta / unit.angular(), 2.31e-26, 0.01e-26);
  EXPECT_EQ(r.Gamma1_phi, 0.0);
  EXPECT_NEAR(r.T1 * r.Gamma1, 1.0, std::numeric_limits<double>::epsilon());
}

TEST(Relaxation, AdditiveAndSilentChannels) {
  const EnergyUnit unit;
  NoiseModel noise;
  const auto both = relaxation_rates(3e-10, 5e-10, 8.9, noise, unit);
  EXPECT_EQ(both.Gamma1, both.Gamma1_theta + both.Gamma1_phi);
  noise.theta.K = 0.0;
  EXPECT_EQ(relaxation_rates(3e-10, 5e-10, 8.9, noise, unit).Gamma1_theta, 0.0);
  const auto none = relaxation_rates(0.0, 0.0, 8.9, NoiseModel{}, unit);
  EXPECT_TRUE(std::isinf(none.T1));
  EXPECT_THROW(relaxation_rates(1e-10, 1e-10, 0.0, NoiseModel{}, unit), DomainError);
}

TEST(Relaxation, UnitInvariance) {
  const NoiseModel noise;
  const EnergyUnit ghz = EnergyUnit::from_label("GHz"), mhz = EnergyUnit::from_label("MHz");
  const auto a = relaxation_rates(3.49e-10, 8.27e-7, 8.8766, noise, ghz);
  const auto b = relaxation_rates(3.49e-7, 8.27e-4, 8876.6, noise, mhz);
  EXPECT_NEAR(b.Gamma1 / a.Gamma1, 1.0, 1e-12);
  const auto da = t_phi_solve(17.73, noise, ghz);
  const auto db = t_phi_solve(17730.0, noise, mhz);
  EXPECT_NEAR(db.T_phi / da.T_phi, 1.0, 1e-12);
}

TEST(Identification, ReferencePoint) {
  const auto& p = reference_point();
  ASSERT_TRUE(p.qubit);
  EXPECT_EQ(p.qubit->index0, 0u);
  EXPECT_GT(p.qubit->index1, 1u);
  EXPECT_GT(p.qubit->loc0, 0.5);
  EXPECT_LT(p.qubit->loc1, -0.5);
  EXPECT_EQ(p.qubit->cluster1, 2u);
  EXPECT_NEAR(p.qubit->epsilon10, 8.9724, 0.15 * 8.9724);
}

TEST(Identification, TooFewLevelsAsksForLargerK) {
  const auto& p = reference_point();
  Spectrum two = p.spectrum;
  two.eigenvalues.resize(2);
  two.eigenvectors = p.spectrum.eigenvectors.leftCols(2);
  const auto cos_theta = assemble_observable(Observable::CosTheta, p.basis);
  try {
    identify_qubit_states(two, cos_theta);
    FAIL() << "expected an identification failure";
  } catch (const IdentificationError& e) {
    EXPECT_NE(std::string(e.what()).find("increase k"), std::string::npos);
  }
}

TEST(Identification, SymmetricDoubleWell) {
  auto c = pokesim::testing::direct_config(Variant::Pokemon, 10.0, 0.0, 0.1, 0.09);
  const auto p = solve_point(c);
  ASSERT_TRUE(p.qubit);
  EXPECT_GT(p.qubit->loc0, 0.5);
  EXPECT_LT(p.qubit->loc1, -0.5);
  EXPECT_LT(std::abs(p.qubit->epsilon10), 1e-6 * 10.0);
  const auto op = assemble_observable(Observable::CosThetaSinPhi, p.basis);
  EXPECT_NEAR(dephasing_amplitude_numeric(*p.qubit, op, 10.0), 0.0, 1e-8 * 2.0 * kPi * 10.0);
}

TEST(DephasingAmplitude, PositiveAtReferencePoint) {
  const auto& p = reference_point();
  const auto op = assemble_observable(Observable::CosThetaSinPhi, p.basis);
  const double A = dephasing_amplitude_numeric(*p.qubit, op, 10.0);
  EXPECT_GT(A, 0.0);
  EXPECT_NEAR(A, analytic::a_f(10.0, 1.0, 0.1, 0.09), 0.15 * 16.09);
}

TEST(ChargeDephasing, ExactNullForRealStates) {
  const auto& p = reference_point();
  const auto nt = assemble_observable(Observable::Ntheta, p.basis);
  const auto np = assemble_observable(Observable::Nphi, p.basis);
  const auto c = charge_dephasing_check(*p.qubit, nt, np, p.energies);
  EXPECT_EQ(c.first_theta, 0.0);
  EXPECT_EQ(c.first_phi, 0.0);
  EXPECT_LT(std::abs(c.second_theta), 1e-12);
  EXPECT_LT(std::abs(c.second_phi), 1e-12);
  const auto cos_theta = assemble_observable(Observable::CosTheta, p.basis);
  EXPECT_THROW(charge_dephasing_check(*p.qubit, cos_theta, np, p.energies), DomainError);
}

TEST(ChargeDephasing, ComplexifiedStateBreaksTheNull) {
  const auto& p = reference_point();
  const auto nt = assemble_observable(Observable::Ntheta, p.basis);
  const auto a = p.spectrum.vector(0);
  std::size_t partner = 0;
  double best = 0;
  for (std::size_t k = 1; k < p.spectrum.size(); ++k) {
    const double m = std::abs(matrix_element(nt, a, p.spectrum.vector(k)));
    if (m > best) best = m, partner = k;
  }
  ASSERT_GT(best, 1e-3);
  const Eigen::VectorXd va = p.spectrum.eigenvectors.col(0);
  const Eigen::VectorXd vb = p.spectrum.eigenvectors.col(static_cast<Eigen::Index>(partner));
  const Eigen::VectorXcd mixed = (va.cast<std::complex<double>>() + std::complex<double>(0, 1) * vb) / std::sqrt(2.0);
  const Eigen::VectorXcd real = va.cast<std::complex<double>>();
  EXPECT_NEAR(std::abs(diagonal_difference(nt, mixed, real)), best, 1e-12);
  EXPECT_EQ(diagonal_difference(nt, real, real), 0.0);
}

TEST(FluxRelaxation, HeavierThetaSuppressesMore) {
  const auto& p = reference_point();
  const auto sin_op = assemble_observable(Observable::CosThetaSinPhi, p.basis);
  const auto cos_op = assemble_observable(Observable::CosThetaCosPhi, p.basis);
  const double heavy = flux_relaxation_check(*p.qubit, sin_op, cos_op, 10.0).first;
  const auto light = solve_point(pokesim::testing::direct_config(Variant::Pokemon, 10.0, 1.0, 0.4, 0.09));
  const double value = flux_relaxation_check(*light.qubit, sin_op, cos_op, 10.0).first;
  EXPECT_LT(heavy, value);
}

TEST(ChargeRelaxation, ThetaElementVanishesByParity) {
  const auto c = pokesim::testing::direct_config(Variant::Pokemon, 4.0, 0.4, 0.5, 0.5);
  const auto p = solve_point(c);
  const auto nt = assemble_observable(Observable::Ntheta, p.basis);
  const auto np = assemble_observable(Observable::Nphi, p.basis);
  const auto r = relaxation_elements_numeric(*p.qubit, nt, np, p.energies);
  EXPECT_GT(r.phi, 1e-8);
  EXPECT_LT(r.theta, 1e-10 * r.phi);
}
