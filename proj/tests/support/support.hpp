#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "pokesim/config.hpp"

namespace pokesim::testing {

inline RunConfig direct_config(Variant variant, double E_J, std::optional<double> E_L, double E_ctheta,
                               double E_cphi, double f = 0.0) {
  RunConfig c;
  c.name = "test";
  c.circuit.variant = variant;
  DirectEnergies d;
  d.E_J = E_J;
  d.E_L = E_L;
  d.E_ctheta = E_ctheta;
  d.E_cphi = E_cphi;
  c.circuit.parameters = d;
  c.circuit.f = f;
  c.basis = default_basis(periodicity_of(variant));
  return c;
}

inline RunConfig pokemon_reference(double f = 0.0) { return direct_config(Variant::Pokemon, 10.0, 1.0, 0.1, 0.09, f); }

inline RunConfig zero_pi_reference() {
  RunConfig c = direct_config(Variant::ZeroPi, 10.0, 1.0, 0.1, 10.0);
  c.basis.phi.phi_max = 20.0;
  c.basis.phi.n_phi = 1024;
  return c;
}

inline DirectEnergies& direct(RunConfig& c) { return std::get<DirectEnergies>(c.circuit.parameters); }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path scratch_directory(const std::string& tag) {
  std::random_device rd;
  auto dir = std::filesystem::temp_directory_path() / ("pokesim_" + tag + "_" + std::to_string(rd()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pokesim::testing
