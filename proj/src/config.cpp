#include "pokesim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "pokesim/errors.hpp"

namespace pokesim {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

void require_map(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) throw ConfigError(fmt::format("'{}' must be a mapping", where), line_of(node));
}

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      std::vector<std::string> names(allowed.begin(), allowed.end());
      throw ConfigError(fmt::format("unknown key '{}' in '{}' (allowed: {})", key, where, fmt::join(names, ", ")),
                        line_of(kv.first));
    }
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key, const char* type) {
  if (!node.IsScalar()) throw ConfigError(fmt::format("'{}' must be a {}", key, type), line_of(node));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("'{}' must be a {} (got '{}')", key, type, node.Scalar()), line_of(node));
  }
}

double number(const YAML::Node& node, const std::string& key) {
  const double v = scalar<double>(node, key, "number");
  if (!std::isfinite(v)) throw ConfigError(fmt::format("'{}' must be finite", key), line_of(node));
  return v;
}

int integer(const YAML::Node& node, const std::string& key) { return scalar<int>(node, key, "integer"); }

std::optional<double> optional_number(const YAML::Node& map, const std::string& key) {
  if (const auto n = map[key]) return number(n, key);
  return std::nullopt;
}

const std::set<std::string> kEnergyKeys = {"E_J", "E_ctheta", "E_cphi", "E_L", "E_Jprime", "E_cchi", "E_cxi"};
const std::set<std::string> kElementKeys = {"C_s", "C_J", "C_L", "L", "C_Jprime"};

void parse_circuit(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "circuit");
  std::set<std::string> allowed = {"variant", "f", "energy_unit"};
  allowed.insert(kEnergyKeys.begin(), kEnergyKeys.end());
  allowed.insert(kElementKeys.begin(), kElementKeys.end());
  check_keys(node, "circuit", allowed);

  const auto variant = node["variant"];
  if (!variant) throw ConfigError("missing required key 'circuit.variant'", line_of(node));
  try {
    cfg.circuit.variant = variant_from_string(scalar<std::string>(variant, "variant", "string"));
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line_of(variant));
  }
  if (const auto f = node["f"]) cfg.circuit.f = number(f, "f");
  if (const auto u = node["energy_unit"]) {
    try {
      cfg.circuit.unit = EnergyUnit::from_label(scalar<std::string>(u, "energy_unit", "string"));
    } catch (const DomainError& e) {
      throw ConfigError(e.what(), line_of(u));
    }
  }

  const auto E_J = node["E_J"];
  if (!E_J) throw ConfigError("missing required key 'circuit.E_J'", line_of(node));
  bool elements = false;
  for (const auto& k : kElementKeys) elements = elements || static_cast<bool>(node[k]);
  if (elements) {
    for (const auto& k : {"E_ctheta", "E_cphi", "E_L", "E_cchi", "E_cxi"}) {
      if (node[k]) {
        throw ConfigError(fmt::format("'{}' cannot be combined with circuit elements (C_s, C_J, ...)", k),
                          line_of(node[k]));
      }
    }
    CircuitElements el;
    for (const auto& k : {"C_s", "C_J"}) {
      if (!node[k]) throw ConfigError(fmt::format("missing required key 'circuit.{}'", k), line_of(node));
    }
    el.C_s = number(node["C_s"], "C_s");
    el.C_J = number(node["C_J"], "C_J");
    el.C_L = optional_number(node, "C_L");
    el.L = optional_number(node, "L");
    el.E_J = number(E_J, "E_J");
    el.E_Jprime = optional_number(node, "E_Jprime");
    el.C_Jprime = optional_number(node, "C_Jprime");
    cfg.circuit.parameters = el;
  } else {
    DirectEnergies d;
    for (const auto& k : {"E_ctheta", "E_cphi"}) {
      if (!node[k]) throw ConfigError(fmt::format("missing required key 'circuit.{}'", k), line_of(node));
    }
    d.E_J = number(E_J, "E_J");
    d.E_ctheta = number(node["E_ctheta"], "E_ctheta");
    d.E_cphi = number(node["E_cphi"], "E_cphi");
    d.E_L = optional_number(node, "E_L");
    d.E_Jprime = optional_number(node, "E_Jprime");
    d.E_cchi = optional_number(node, "E_cchi");
    d.E_cxi = optional_number(node, "E_cxi");
    cfg.circuit.parameters = d;
  }
  try {
    derive_energies(cfg.circuit);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line_of(node));
  }
}

void parse_basis(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "basis");
  check_keys(node, "basis", {"n_theta_max", "phi_max", "n_phi", "stencil_order", "chi_levels", "phi_mode"});
  if (const auto n = node["phi_mode"]) {
    const auto mode = scalar<std::string>(n, "phi_mode", "string");
    if (mode != to_string(cfg.basis.phi.kind)) {
      throw ConfigError(fmt::format("phi_mode '{}' does not match variant {} (needs '{}')", mode,
                                    to_string(cfg.circuit.variant), to_string(cfg.basis.phi.kind)),
                        line_of(n));
    }
  }
  if (const auto n = node["n_theta_max"]) cfg.basis.n_theta_max = integer(n, "n_theta_max");
  if (const auto n = node["phi_max"]) {
    if (cfg.basis.phi.periodic()) throw ConfigError("phi_max applies only to line grids", line_of(n));
    cfg.basis.phi.phi_max = number(n, "phi_max");
  }
  if (const auto n = node["n_phi"]) cfg.basis.phi.n_phi = integer(n, "n_phi");
  if (const auto n = node["stencil_order"]) cfg.basis.stencil_order = integer(n, "stencil_order");
  if (const auto n = node["chi_levels"]) {
    cfg.basis.chi_levels = integer(n, "chi_levels");
    if (cfg.basis.chi_levels != 0 && cfg.circuit.variant != Variant::PokemonJJPair) {
      throw ConfigError("chi_levels applies only to pokemon_jj_pair (three-mode model)", line_of(n));
    }
  }
  try {
    validate(cfg.basis);
    if (cfg.basis.chi_levels > 0 && cfg.basis.chi_levels < 4) throw DomainError("chi_levels must be 0 or >= 4");
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line_of(node));
  }
}

void parse_solver(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "solver");
  check_keys(node, "solver", {"k", "tol", "max_restarts", "seed", "krylov_dim", "shift_invert"});
  if (const auto n = node["k"]) cfg.solver.k = integer(n, "k");
  if (const auto n = node["tol"]) cfg.solver.tol = number(n, "tol");
  if (const auto n = node["max_restarts"]) cfg.solver.max_restarts = integer(n, "max_restarts");
  if (const auto n = node["seed"]) cfg.solver.seed = scalar<std::uint64_t>(n, "seed", "non-negative integer");
  if (const auto n = node["krylov_dim"]) cfg.solver.krylov_dim = integer(n, "krylov_dim");
  if (const auto n = node["shift_invert"]) cfg.solver.shift_invert = scalar<bool>(n, "shift_invert", "boolean");
  if (cfg.solver.k < 1) throw ConfigError("solver.k must be >= 1", line_of(node));
  if (!(cfg.solver.tol > 0.0)) throw ConfigError("solver.tol must be positive", line_of(node));
  if (cfg.solver.max_restarts < 0) throw ConfigError("solver.max_restarts must be >= 0", line_of(node));
  if (cfg.solver.krylov_dim < 0) throw ConfigError("solver.krylov_dim must be >= 0", line_of(node));
}

std::vector<std::pair<double, double>> parse_table(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError(fmt::format("'{}' must be a list of [omega, S] pairs", key), line_of(node));
  std::vector<std::pair<double, double>> table;
  for (const auto& row : node) {
    if (!row.IsSequence() || row.size() != 2) {
      throw ConfigError(fmt::format("'{}' rows must be [omega, S] pairs", key), line_of(row));
    }
    table.emplace_back(number(row[0], key), number(row[1], key));
  }
  return table;
}

void parse_noise(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "noise");
  check_keys(node, "noise", {"K_theta", "K_phi", "K_f", "omega_c_hz", "table_theta", "table_phi", "table_f"});
  if (const auto n = node["K_theta"]) cfg.noise.theta.K = number(n, "K_theta");
  if (const auto n = node["K_phi"]) cfg.noise.phi.K = number(n, "K_phi");
  if (const auto n = node["K_f"]) cfg.noise.flux.K = number(n, "K_f");
  if (const auto n = node["omega_c_hz"]) cfg.noise.omega_c = 2.0 * constants::kPi * number(n, "omega_c_hz");
  if (const auto n = node["table_theta"]) cfg.noise.theta.table = parse_table(n, "table_theta");
  if (const auto n = node["table_phi"]) cfg.noise.phi.table = parse_table(n, "table_phi");
  if (const auto n = node["table_f"]) cfg.noise.flux.table = parse_table(n, "table_f");
  try {
    validate(cfg.noise);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line_of(node));
  }
}

void parse_analysis(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "analysis");
  check_keys(node, "analysis", {"threshold", "degeneracy_tol"});
  if (const auto n = node["threshold"]) cfg.analysis.threshold = number(n, "threshold");
  if (const auto n = node["degeneracy_tol"]) cfg.analysis.degeneracy_tol = number(n, "degeneracy_tol");
  if (!(cfg.analysis.threshold > 0.0 && cfg.analysis.threshold < 1.0)) {
    throw ConfigError("analysis.threshold must lie in (0, 1)", line_of(node));
  }
  if (!(cfg.analysis.degeneracy_tol >= 0.0)) throw ConfigError("analysis.degeneracy_tol must be >= 0", line_of(node));
}

void parse_sweep(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "sweep");
  check_keys(node, "sweep", {"parameter", "values"});
  if (!node["parameter"] || !node["values"]) throw ConfigError("sweep needs 'parameter' and 'values'", line_of(node));
  Sweep s;
  s.parameter = scalar<std::string>(node["parameter"], "parameter", "string");
  const auto values = node["values"];
  if (!values.IsSequence() || values.size() == 0) {
    throw ConfigError("sweep.values must be a non-empty list", line_of(values));
  }
  for (const auto& v : values) s.values.push_back(number(v, "sweep.values"));
  RunConfig probe = cfg;
  try {
    apply_parameter(probe, s.parameter, s.values.front());
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), line_of(node["parameter"]));
  }
  cfg.sweep = std::move(s);
}

void parse_outputs(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "outputs");
  check_keys(node, "outputs", {"directory", "formats"});
  if (const auto n = node["directory"]) cfg.outputs.directory = scalar<std::string>(n, "directory", "string");
  if (const auto n = node["formats"]) {
    if (!n.IsSequence() || n.size() == 0) throw ConfigError("outputs.formats must be a non-empty list", line_of(n));
    cfg.outputs.formats.clear();
    for (const auto& f : n) {
      const auto s = scalar<std::string>(f, "formats", "string");
      if (s != "csv" && s != "json") throw ConfigError(fmt::format("unknown format '{}' (csv or json)", s), line_of(f));
      cfg.outputs.formats.push_back(s);
    }
  }
}

RunConfig parse_root(const YAML::Node& root, const std::string& name) {
  if (!root.IsMap()) throw ConfigError("configuration must be a mapping", line_of(root));
  check_keys(root, "<root>", {"circuit", "basis", "solver", "noise", "analysis", "sweep", "outputs"});
  if (!root["circuit"]) throw ConfigError("missing required section 'circuit'", 1);
  RunConfig cfg;
  cfg.name = name;
  parse_circuit(root["circuit"], cfg);
  cfg.basis = default_basis(periodicity_of(cfg.circuit.variant));
  if (const auto n = root["basis"]) parse_basis(n, cfg);
  if (const auto n = root["solver"]) parse_solver(n, cfg);
  if (const auto n = root["noise"]) parse_noise(n, cfg);
  if (const auto n = root["analysis"]) parse_analysis(n, cfg);
  if (const auto n = root["outputs"]) parse_outputs(n, cfg);
  if (const auto n = root["sweep"]) parse_sweep(n, cfg);
  return cfg;
}

}  // namespace

bool Outputs::wants(std::string_view format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::vector<std::string> sweepable_parameters() {
  return {"circuit.f",      "circuit.E_J",   "circuit.E_ctheta", "circuit.E_cphi", "circuit.E_L",
          "circuit.E_Jprime", "circuit.E_cchi", "circuit.E_cxi",  "circuit.C_s",    "circuit.C_J",
          "circuit.C_L",    "circuit.L",     "circuit.C_Jprime", "noise.K_theta",  "noise.K_phi",
          "noise.K_f"};
}

void apply_parameter(RunConfig& cfg, const std::string& path, double value) {
  const auto known = sweepable_parameters();
  if (std::find(known.begin(), known.end(), path) == known.end()) {
    throw ConfigError(fmt::format("unknown sweep parameter '{}' (allowed: {})", path, fmt::join(known, ", ")));
  }
  if (path == "circuit.f") {
    cfg.circuit.f = value;
  } else if (path == "noise.K_theta") {
    cfg.noise.theta.K = value;
  } else if (path == "noise.K_phi") {
    cfg.noise.phi.K = value;
  } else if (path == "noise.K_f") {
    cfg.noise.flux.K = value;
  } else {
    const std::string key = path.substr(std::string("circuit.").size());
    if (auto* d = std::get_if<DirectEnergies>(&cfg.circuit.parameters)) {
      if (key == "E_J") d->E_J = value;
      else if (key == "E_ctheta") d->E_ctheta = value;
      else if (key == "E_cphi") d->E_cphi = value;
      else if (key == "E_L") d->E_L = value;
      else if (key == "E_Jprime") d->E_Jprime = value;
      else if (key == "E_cchi") d->E_cchi = value;
      else if (key == "E_cxi") d->E_cxi = value;
      else throw ConfigError(fmt::format("sweep parameter '{}' needs element-level circuit input", path));
    } else {
      auto& el = std::get<CircuitElements>(cfg.circuit.parameters);
      if (key == "E_J") el.E_J = value;
      else if (key == "C_s") el.C_s = value;
      else if (key == "C_J") el.C_J = value;
      else if (key == "C_L") el.C_L = value;
      else if (key == "L") el.L = value;
      else if (key == "C_Jprime") el.C_Jprime = value;
      else if (key == "E_Jprime") el.E_Jprime = value;
      else throw ConfigError(fmt::format("sweep parameter '{}' needs direct-energy circuit input", path));
    }
  }
}

RunConfig parse_config_string(const std::string& text, const std::string& name) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  return parse_root(root, name);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_string(buffer.str(), path.stem().string());
}

}  // namespace pokesim
