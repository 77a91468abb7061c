#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pokesim/errors.hpp"
#include "pokesim/runner.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kSolver = 3, kIdentification = 4 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("sim");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("SIM_LOG")) {
    const auto parsed = spdlog::level::from_str(level);
    if (parsed == spdlog::level::off && std::string(level) != "off") {
      spdlog::warn("SIM_LOG='{}' not recognised (trace, debug, info, warn, error, off)", level);
    } else {
      spdlog::set_level(parsed);
    }
  }
}

struct Overrides {
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
};

pokesim::RunConfig load(const std::string& path, const Overrides& o) {
  auto cfg = pokesim::parse_config(path);
  if (!o.out.empty()) cfg.outputs.directory = o.out;
  if (!o.format.empty()) cfg.outputs.formats = {o.format};
  if (o.seed) cfg.solver.seed = *o.seed;
  return cfg;
}

void report(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Spectra and coherence of protected two-mode superconducting qubits"};
  app.require_subcommand(1);

  Overrides o;
  int jobs = 1;
  std::uint64_t seed = 0;
  app.add_option("--out", o.out, "Output directory (overrides outputs.directory)");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", seed, "Solver start-vector seed");
  app.add_option("--jobs", jobs, "Parallel sweep points")->check(CLI::PositiveNumber);

  std::string config;
  std::vector<std::string> configs;
  std::vector<std::string> states{"q0", "q1"};

  auto* spectrum = app.add_subcommand("spectrum", "Lowest levels with qubit identification");
  spectrum->add_option("config", config, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
  auto* wavefunction = app.add_subcommand("wavefunction", "Export |psi(theta, phi)|^2 grids");
  wavefunction->add_option("config", config, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
  wavefunction->add_option("--states", states, "Level indices, or q0/q1 for the qubit states")->delimiter(',');
  auto* rates = app.add_subcommand("rates", "Noise report: matrix elements, rates and times");
  rates->add_option("config", config, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep from the config's sweep section");
  sweep->add_option("config", config, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
  auto* compare = app.add_subcommand("compare", "Side-by-side comparison of variants");
  compare->add_option("configs", configs, "Two or more run configurations")->required()->expected(2, -1)->check(CLI::ExistingFile);

  for (auto* sub : {spectrum, wavefunction, rates, sweep, compare}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  if (*seed_opt) o.seed = seed;

  try {
    if (*spectrum) {
      report(pokesim::run_spectrum(load(config, o)));
    } else if (*wavefunction) {
      report(pokesim::run_wavefunction(load(config, o), states));
    } else if (*rates) {
      report(pokesim::run_rates(load(config, o)));
    } else if (*sweep) {
      report(pokesim::run_sweep(load(config, o), jobs));
    } else if (*compare) {
      std::vector<pokesim::RunConfig> loaded;
      for (const auto& c : configs) loaded.push_back(load(c, o));
      pokesim::Outputs outputs = loaded.front().outputs;
      report(pokesim::run_compare(loaded, outputs));
    }
  } catch (const pokesim::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kConfig;
  } catch (const pokesim::DomainError& e) {
    spdlog::error("invalid input: {}", e.what());
    return kConfig;
  } catch (const pokesim::SolverError& e) {
    spdlog::error("solver failure: {}", e.what());
    return kSolver;
  } catch (const pokesim::IdentificationError& e) {
    spdlog::error("qubit identification failed: {}", e.what());
    return kIdentification;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kFailure;
  }
  return kOk;
}
