#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pokesim/basis.hpp"
#include "pokesim/circuit.hpp"
#include "pokesim/lanczos.hpp"
#include "pokesim/noise.hpp"

namespace pokesim {

struct Sweep {
  std::string parameter;  // dotted path, e.g. circuit.f
  std::vector<double> values;
};

struct Outputs {
  std::filesystem::path directory = "out";
  std::vector<std::string> formats{"csv", "json"};

  bool wants(std::string_view format) const;
};

struct RunConfig {
  CircuitSpec circuit;
  BasisConfig basis;
  SolverOptions solver;
  NoiseModel noise;
  IdentificationOptions analysis;
  std::optional<Sweep> sweep;
  Outputs outputs;
  std::string name;  // file stem of the source config
};

/// Parses a YAML run configuration. Unknown keys, type mismatches and
/// invalid values raise ConfigError carrying the 1-based line number.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_string(const std::string& text, const std::string& name = "config");

/// Sets one sweepable parameter (circuit.f, circuit.E_J, noise.K_f, ...).
/// Throws ConfigError for unknown paths.
void apply_parameter(RunConfig& config, const std::string& path, double value);

/// Names accepted by apply_parameter.
std::vector<std::string> sweepable_parameters();

}  // namespace pokesim
