#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pokesim/config.hpp"
#include "pokesim/noise.hpp"

namespace pokesim {

/// One solved parameter point.
struct SolvedPoint {
  DerivedEnergies energies;
  BasisConfig basis;
  double f = 0;
  OperatorMatrix hamiltonian;
  Spectrum spectrum;
  std::vector<double> cos_theta;  // <cos theta> per level
  std::optional<QubitStates> qubit;
  std::string identification_error;
  std::vector<std::string> warnings;
};

/// Builds the Hamiltonian for `config` (the three-mode model when
/// chi_levels > 0), solves it and identifies the qubit states. With
/// `require_qubit` an identification failure is rethrown.
SolvedPoint solve_point(const RunConfig& config, bool require_qubit = true);

/// Numeric and closed-form noise quantities for a solved point.
NoiseReport noise_report(const SolvedPoint& point, const RunConfig& config);

/// JSON document for a NoiseReport (analytic and numeric side by side).
std::string noise_report_json(const NoiseReport& report, const SolvedPoint& point, const RunConfig& config);

struct SweepRow {
  double value = 0;
  double epsilon10 = 0;
  double E0 = 0;
  double E1 = 0;
  long index0 = -1;
  long index1 = -1;
  double A_f = 0;
  double B_theta = 0;
  double B_phi = 0;
  double Gamma1 = 0;
  double T1 = 0;
  double T_phi = 0;
  double Gamma_phi = 0;
  double Gamma2 = 0;
  std::string error;
};

/// Evaluates every sweep point on up to `jobs` threads; rows follow the
/// order of the sweep values. Per-point failures land in `error`.
std::vector<SweepRow> sweep_rows(const RunConfig& config, int jobs);

struct ComparisonRow {
  std::string name;
  Variant variant = Variant::Pokemon;
  double E_J = 0, E_L = 0, E_ctheta = 0, E_cphi = 0;
  double alpha_theta_sq = 0, alpha_phi_sq = 0;
  double gamma = 0;  // closed form, NaN when not defined for the variant
  double B_theta = 0, B_phi = 0;
  double B_theta_analytic = 0, B_phi_analytic = 0;
  double n_phi_element = 0;  // |<0|N_phi|1>|
  double phi_variance = 0;   // ground state
  double n_phi_ratio = 1;    // n_phi_element relative to the first config
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::optional<double> pokemon_vs_zero_pi;  // pokemon |<0|N_phi|1>| / 0-pi value
};

/// Side-by-side comparison. Throws ConfigError unless every config shares E_J and E_L.
Comparison compare_variants(const std::vector<RunConfig>& configs);

/// Output writers. Each returns the files it wrote.
std::vector<std::filesystem::path> run_spectrum(const RunConfig& config);
std::vector<std::filesystem::path> run_wavefunction(const RunConfig& config, const std::vector<std::string>& states);
std::vector<std::filesystem::path> run_rates(const RunConfig& config);
std::vector<std::filesystem::path> run_sweep(const RunConfig& config, int jobs);
std::vector<std::filesystem::path> run_compare(const std::vector<RunConfig>& configs, const Outputs& outputs);

/// Creates the directory and checks it is writable; throws ConfigError otherwise.
void prepare_output_directory(const std::filesystem::path& directory);

}  // namespace pokesim
