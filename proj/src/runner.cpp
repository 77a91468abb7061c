#include "pokesim/runner.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include <fmt/format.h>
#include <fmt/os.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "pokesim/analytic.hpp"
#include "pokesim/errors.hpp"
#include "pokesim/wavefunction.hpp"

namespace pokesim {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool has_closed_forms(const DerivedEnergies& e) {
  return !is_jj_variant(e.variant) && e.E_J > 0.0 && e.E_L > 0.0;
}

OperatorMatrix localizer_for(const BasisConfig& b) {
  return assemble_observable(b.phi.periodic() ? Observable::SinPhi : Observable::Phi, b);
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

json pair_json(const AnalyticNumeric& v) {
  json j;
  j["numeric"] = v.numeric;
  j["analytic"] = std::isnan(v.analytic) ? json(nullptr) : json(v.analytic);
  j["relative_deviation"] = std::isnan(v.analytic) ? json(nullptr) : json(v.relative_deviation());
  return j;
}

json rates_json(const RelaxationRates& r) {
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return json{{"Gamma1_theta", num(r.Gamma1_theta)},
              {"Gamma1_phi", num(r.Gamma1_phi)},
              {"Gamma1", num(r.Gamma1)},
              {"T1", num(r.T1)}};
}

double phi_variance(const SolvedPoint& p, std::size_t level) {
  const auto phi = assemble_observable(Observable::Phi, p.basis);
  const auto phi2 = assemble_observable(Observable::PhiSquared, p.basis);
  const auto v = p.spectrum.vector(level);
  const double m = expectation(phi, v);
  return expectation(phi2, v) - m * m;
}

}  // namespace

void prepare_output_directory(const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw ConfigError(fmt::format("cannot create output directory '{}': {}", directory.string(), ec.message()));
  const fs::path probe = directory / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError(fmt::format("output directory '{}' is not writable", directory.string()));
  }
  fs::remove(probe, ec);
}

SolvedPoint solve_point(const RunConfig& cfg, bool require_qubit) {
  SolvedPoint p;
  try {
    p.energies = derive_energies(cfg.circuit);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  p.basis = cfg.basis;
  p.f = cfg.circuit.f;
  p.warnings = validate_regime(p.energies);
  p.hamiltonian = p.basis.chi_levels > 0 ? assemble_jj_pair_full(p.energies, p.basis, p.f)
                                         : assemble_hamiltonian(p.energies, p.basis, p.f);
  spdlog::info("{}: dimension {}, solving for {} levels", cfg.name, p.hamiltonian.dimension(), cfg.solver.k);
  p.spectrum = lowest_eigenpairs(p.hamiltonian, cfg.solver);

  if (!p.basis.phi.periodic()) {
    const double top = p.spectrum.eigenvalues.back();
    const double wall = p.energies.E_L * p.basis.phi.phi_max * p.basis.phi.phi_max;
    if (wall < 20.0 * top) {
      p.warnings.push_back(
          fmt::format("E_L phi_max^2 = {:.4g} is below 20x the highest level {:.4g}: walls may shift levels", wall, top));
    }
  }
  const auto cos_theta = assemble_observable(Observable::CosTheta, p.basis);
  for (std::size_t i = 0; i < p.spectrum.size(); ++i) p.cos_theta.push_back(expectation(cos_theta, p.spectrum.vector(i)));

  IdentificationOptions id = cfg.analysis;
  id.energy_scale = p.energies.E_J > 0.0 ? p.energies.E_J : 1.0;
  const auto loc = localizer_for(p.basis);
  try {
    p.qubit = identify_qubit_states(p.spectrum, cos_theta, &loc, id);
  } catch (const IdentificationError& e) {
    p.identification_error = e.what();
    if (require_qubit) throw;
  }
  for (const auto& w : p.warnings) spdlog::warn("{}: {}", cfg.name, w);
  return p;
}

NoiseReport noise_report(const SolvedPoint& p, const RunConfig& cfg) {
  if (!p.qubit) throw IdentificationError(p.identification_error.empty() ? "qubit states not identified" : p.identification_error);
  const auto& q = *p.qubit;
  const auto& e = p.energies;
  const auto& b = p.basis;
  const EnergyUnit& unit = cfg.circuit.unit;

  const auto sin_op = assemble_observable(Observable::CosThetaSinPhi, b, p.f);
  const auto cos_op = assemble_observable(Observable::CosThetaCosPhi, b, p.f);
  const auto n_theta = assemble_observable(Observable::Ntheta, b);
  const auto n_phi = assemble_observable(Observable::Nphi, b);

  const double A_f = dephasing_amplitude_numeric(q, sin_op, e.E_J);
  const auto elements = relaxation_elements_numeric(q, n_theta, n_phi, e);
  const auto rates = relaxation_rates(elements.theta, elements.phi, q.omega10, cfg.noise, unit);
  const auto dephasing = t_phi_solve(A_f, cfg.noise, unit);

  NoiseReport r = decoherence_summary(rates, dephasing);
  r.A_f.numeric = A_f;
  r.B_theta.numeric = elements.theta;
  r.B_phi.numeric = elements.phi;
  r.epsilon10.numeric = q.epsilon10;
  const double splitting = analytic_splitting(e);
  r.epsilon10.analytic = splitting > 0.0 ? splitting : kNaN;
  if (has_closed_forms(e)) {
    r.A_f.analytic = analytic::a_f(e.E_J, e.E_L, e.E_ctheta, e.E_cphi);
    const auto bf = analytic::b_factors(e.E_J, e.E_L, e.E_ctheta, e.E_cphi);
    r.B_theta.analytic = bf.theta;
    r.B_phi.analytic = bf.phi;
    r.gamma_analytic = analytic::gamma(e.E_J, e.E_L, e.E_ctheta, e.E_cphi);
    r.rates_analytic = relaxation_rates(bf.theta, bf.phi, r.epsilon10.analytic, cfg.noise, unit);
  } else {
    r.A_f.analytic = r.B_theta.analytic = r.B_phi.analytic = r.gamma_analytic = kNaN;
    r.rates_analytic = {kNaN, kNaN, kNaN, kNaN};
  }
  r.flux_relaxation = flux_relaxation_check(q, sin_op, cos_op, e.E_J);
  r.charge_dephasing = charge_dephasing_check(q, n_theta, n_phi, e);
  std::vector<std::string> warnings = p.warnings;
  warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
  r.warnings = std::move(warnings);
  return r;
}

std::string noise_report_json(const NoiseReport& r, const SolvedPoint& p, const RunConfig& cfg) {
  const auto& q = *p.qubit;
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["config"] = cfg.name;
  j["variant"] = std::string(to_string(p.energies.variant));
  j["energy_unit"] = cfg.circuit.unit.label;
  j["f"] = p.f;
  j["qubit"] = {{"index0", q.index0}, {"index1", q.index1}, {"cos_theta0", q.loc0}, {"cos_theta1", q.loc1},
                {"cluster0", q.cluster0}, {"cluster1", q.cluster1}};
  j["epsilon10"] = pair_json(r.epsilon10);
  j["A_f"] = pair_json(r.A_f);
  j["B_theta"] = pair_json(r.B_theta);
  j["B_phi"] = pair_json(r.B_phi);
  j["gamma_analytic"] = num(r.gamma_analytic);
  j["relaxation"] = {{"numeric", rates_json(r.rates)}, {"analytic", rates_json(r.rates_analytic)}};
  j["dephasing"] = {{"negligible", r.dephasing.negligible},
                    {"T_phi", r.dephasing.T_phi},
                    {"Gamma_phi", r.dephasing.Gamma_phi},
                    {"short_time_warning", r.dephasing.short_time_warning}};
  j["Gamma2"] = r.Gamma2;
  j["gamma_phi_significant"] = r.gamma_phi_significant;
  j["flux_relaxation_element"] = {{"first", r.flux_relaxation.first}, {"second", r.flux_relaxation.second}};
  j["charge_dephasing_elements"] = {{"first_theta", r.charge_dephasing.first_theta},
                                    {"first_phi", r.charge_dephasing.first_phi},
                                    {"second_theta", r.charge_dephasing.second_theta},
                                    {"second_phi", r.charge_dephasing.second_phi}};
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::vector<SweepRow> sweep_rows(const RunConfig& cfg, int jobs) {
  if (!cfg.sweep) throw ConfigError("the config has no 'sweep' section");
  const auto& values = cfg.sweep->values;
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepRow& row = rows[i];
      row.value = values[i];
      try {
        RunConfig point = cfg;
        apply_parameter(point, cfg.sweep->parameter, values[i]);
        const auto p = solve_point(point, true);
        const auto r = noise_report(p, point);
        const auto& q = *p.qubit;
        row.epsilon10 = q.epsilon10;
        row.E0 = p.spectrum.eigenvalues[q.index0];
        row.E1 = p.spectrum.eigenvalues[q.index1];
        row.index0 = static_cast<long>(q.index0);
        row.index1 = static_cast<long>(q.index1);
        row.A_f = r.A_f.numeric;
        row.B_theta = r.B_theta.numeric;
        row.B_phi = r.B_phi.numeric;
        row.Gamma1 = r.rates.Gamma1;
        row.T1 = r.rates.T1;
        row.T_phi = r.dephasing.T_phi;
        row.Gamma_phi = r.dephasing.Gamma_phi;
        row.Gamma2 = r.Gamma2;
      } catch (const std::exception& e) {
        row.error = e.what();
        spdlog::warn("sweep point {} = {} failed: {}", cfg.sweep->parameter, values[i], e.what());
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

Comparison compare_variants(const std::vector<RunConfig>& configs) {
  if (configs.size() < 2) throw ConfigError("compare needs at least two configs");
  Comparison c;
  std::optional<double> ej, el;
  for (const auto& cfg : configs) {
    const auto p = solve_point(cfg, true);
    const auto& e = p.energies;
    if (is_jj_variant(e.variant)) throw ConfigError(fmt::format("{}: compare supports linear-inductor variants", cfg.name));
    const auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
    if (ej && (!same(*ej, e.E_J) || !same(*el, e.E_L))) {
      throw ConfigError(fmt::format("{}: compared configs must share E_J and E_L", cfg.name));
    }
    ej = e.E_J;
    el = e.E_L;
    ComparisonRow row;
    row.name = cfg.name;
    row.variant = e.variant;
    row.E_J = e.E_J;
    row.E_L = e.E_L;
    row.E_ctheta = e.E_ctheta;
    row.E_cphi = e.E_cphi;
    const auto n_theta = assemble_observable(Observable::Ntheta, p.basis);
    const auto n_phi = assemble_observable(Observable::Nphi, p.basis);
    const auto el_num = relaxation_elements_numeric(*p.qubit, n_theta, n_phi, e);
    row.B_theta = el_num.theta;
    row.B_phi = el_num.phi;
    row.n_phi_element = el_num.phi / (8.0 * e.E_cphi);
    row.phi_variance = phi_variance(p, p.qubit->index0);
    if (has_closed_forms(e)) {
      const auto g = analytic::gaussian_ansatz(e.E_J, e.E_L, e.E_ctheta, e.E_cphi);
      row.alpha_theta_sq = g.alpha_theta_sq;
      row.alpha_phi_sq = g.alpha_phi_sq;
      row.gamma = analytic::gamma(e.E_J, e.E_L, e.E_ctheta, e.E_cphi);
      const auto bf = analytic::b_factors(e.E_J, e.E_L, e.E_ctheta, e.E_cphi);
      row.B_theta_analytic = bf.theta;
      row.B_phi_analytic = bf.phi;
    } else {
      row.alpha_theta_sq = row.alpha_phi_sq = row.gamma = row.B_theta_analytic = row.B_phi_analytic = kNaN;
    }
    c.rows.push_back(row);
  }
  const double first = c.rows.front().n_phi_element;
  for (auto& r : c.rows) r.n_phi_ratio = first > 0.0 ? r.n_phi_element / first : kNaN;
  const ComparisonRow* pokemon = nullptr;
  const ComparisonRow* zero_pi = nullptr;
  for (const auto& r : c.rows) {
    if (r.variant == Variant::Pokemon && !pokemon) pokemon = &r;
    if (r.variant == Variant::ZeroPi && !zero_pi) zero_pi = &r;
  }
  if (pokemon && zero_pi && zero_pi->n_phi_element > 0.0) c.pokemon_vs_zero_pi = pokemon->n_phi_element / zero_pi->n_phi_element;
  return c;
}

std::vector<fs::path> run_spectrum(const RunConfig& cfg) {
  prepare_output_directory(cfg.outputs.directory);
  SolvedPoint p;
  try {
    p = solve_point(cfg, false);
  } catch (const SolverError& e) {
    json d{{"error", e.what()}, {"best_residuals", e.best_residuals()}};
    write_text(cfg.outputs.directory / (cfg.name + "_solver_failure.json"), d.dump(2) + "\n");
    throw;
  }
  std::vector<fs::path> files;
  const auto is0 = [&](std::size_t i) { return p.qubit && p.qubit->index0 == i; };
  const auto is1 = [&](std::size_t i) { return p.qubit && p.qubit->index1 == i; };
  if (cfg.outputs.wants("csv")) {
    const fs::path path = cfg.outputs.directory / (cfg.name + "_spectrum.csv");
    std::string text = "index,energy,residual,cos_theta_expect,is_qubit0,is_qubit1\n";
    for (std::size_t i = 0; i < p.spectrum.size(); ++i) {
      text += fmt::format("{},{},{},{},{},{}\n", i, g17(p.spectrum.eigenvalues[i]), g17(p.spectrum.residuals[i]),
                          g17(p.cos_theta[i]), is0(i) ? "true" : "false", is1(i) ? "true" : "false");
    }
    write_text(path, text);
    files.push_back(path);
  }
  if (cfg.outputs.wants("json")) {
    const fs::path path = cfg.outputs.directory / (cfg.name + "_spectrum.json");
    json j;
    j["config"] = cfg.name;
    j["variant"] = std::string(to_string(p.energies.variant));
    j["dimension"] = p.hamiltonian.dimension();
    j["iterations"] = p.spectrum.iterations;
    j["norm_estimate"] = p.spectrum.norm_estimate;
    json levels = json::array();
    for (std::size_t i = 0; i < p.spectrum.size(); ++i) {
      levels.push_back({{"index", i}, {"energy", p.spectrum.eigenvalues[i]}, {"residual", p.spectrum.residuals[i]},
                        {"cos_theta_expect", p.cos_theta[i]}, {"is_qubit0", is0(i)}, {"is_qubit1", is1(i)}});
    }
    j["levels"] = levels;
    if (p.qubit) {
      j["epsilon10"] = p.qubit->epsilon10;
    } else {
      j["identification_error"] = p.identification_error;
    }
    j["warnings"] = p.warnings;
    write_text(path, j.dump(2) + "\n");
    files.push_back(path);
  }
  if (!p.qubit) throw IdentificationError(p.identification_error);
  return files;
}

std::vector<fs::path> run_wavefunction(const RunConfig& cfg, const std::vector<std::string>& states) {
  prepare_output_directory(cfg.outputs.directory);
  if (states.empty()) throw ConfigError("no states requested");
  bool needs_qubit = false;
  for (const auto& s : states) needs_qubit = needs_qubit || s == "q0" || s == "q1";
  const auto p = solve_point(cfg, needs_qubit);
  std::vector<fs::path> files;
  for (const auto& s : states) {
    std::vector<double> vec;
    std::size_t index = 0;
    std::string label = s;
    if (s == "q0" || s == "q1") {
      const bool one = s == "q1";
      vec = one ? p.qubit->state1 : p.qubit->state0;
      index = one ? p.qubit->index1 : p.qubit->index0;
    } else {
      std::size_t pos = 0;
      long v = -1;
      try {
        v = std::stol(s, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != s.size() || v < 0) throw ConfigError(fmt::format("invalid state '{}' (an index, q0 or q1)", s));
      if (static_cast<std::size_t>(v) >= p.spectrum.size()) {
        throw ConfigError(fmt::format("state index {} is out of range (solved {} levels)", v, p.spectrum.size()));
      }
      index = static_cast<std::size_t>(v);
      const auto span = p.spectrum.vector(index);
      vec.assign(span.begin(), span.end());
    }
    const auto grid = wavefunction_grid(p.energies, p.basis, p.f, vec, index, p.spectrum.eigenvalues[index]);
    const fs::path path = cfg.outputs.directory / fmt::format("{}_wavefunction_{}.csv", cfg.name, label);
    write_wavefunction_csv(grid, path);
    files.push_back(path);
  }
  return files;
}

std::vector<fs::path> run_rates(const RunConfig& cfg) {
  prepare_output_directory(cfg.outputs.directory);
  const auto p = solve_point(cfg, true);
  const auto r = noise_report(p, cfg);
  const fs::path path = cfg.outputs.directory / (cfg.name + "_rates.json");
  write_text(path, noise_report_json(r, p, cfg));
  return {path};
}

std::vector<fs::path> run_sweep(const RunConfig& cfg, int jobs) {
  prepare_output_directory(cfg.outputs.directory);
  const auto rows = sweep_rows(cfg, jobs);
  std::vector<fs::path> files;
  if (cfg.outputs.wants("csv")) {
    const fs::path path = cfg.outputs.directory / (cfg.name + "_sweep.csv");
    std::string text = "parameter,value,epsilon10,E0,E1,index0,index1,A_f,B_theta,B_phi,Gamma1,T1,T_phi,Gamma_phi,Gamma2,error\n";
    for (const auto& r : rows) {
      std::string error = r.error;
      for (auto& ch : error) {
        if (ch == '"' || ch == '\n' || ch == ',') ch = ' ';
      }
      if (r.error.empty()) {
        text += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},\n", cfg.sweep->parameter, g17(r.value),
                            g17(r.epsilon10), g17(r.E0), g17(r.E1), r.index0, r.index1, g17(r.A_f), g17(r.B_theta),
                            g17(r.B_phi), g17(r.Gamma1), g17(r.T1), g17(r.T_phi), g17(r.Gamma_phi), g17(r.Gamma2));
      } else {
        text += fmt::format("{},{},,,,,,,,,,,,,,\"{}\"\n", cfg.sweep->parameter, g17(r.value), error);
      }
    }
    write_text(path, text);
    files.push_back(path);
  }
  if (cfg.outputs.wants("json")) {
    const fs::path path = cfg.outputs.directory / (cfg.name + "_sweep.json");
    json arr = json::array();
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    for (const auto& r : rows) {
      json j{{"value", r.value}};
      if (r.error.empty()) {
        j.update(json{{"epsilon10", r.epsilon10}, {"E0", r.E0}, {"E1", r.E1}, {"index0", r.index0},
                      {"index1", r.index1}, {"A_f", r.A_f}, {"B_theta", r.B_theta}, {"B_phi", r.B_phi},
                      {"Gamma1", r.Gamma1}, {"T1", num(r.T1)}, {"T_phi", r.T_phi}, {"Gamma_phi", r.Gamma_phi},
                      {"Gamma2", r.Gamma2}});
      } else {
        j["error"] = r.error;
      }
      arr.push_back(j);
    }
    write_text(path, json{{"parameter", cfg.sweep->parameter}, {"rows", arr}}.dump(2) + "\n");
    files.push_back(path);
  }
  return files;
}

std::vector<fs::path> run_compare(const std::vector<RunConfig>& configs, const Outputs& outputs) {
  prepare_output_directory(outputs.directory);
  const auto c = compare_variants(configs);
  std::vector<fs::path> files;
  if (outputs.wants("csv")) {
    const fs::path path = outputs.directory / "compare.csv";
    std::string text =
        "name,variant,E_J,E_L,E_ctheta,E_cphi,alpha_theta_sq,alpha_phi_sq,gamma,B_theta,B_phi,B_theta_analytic,"
        "B_phi_analytic,n_phi_element,phi_variance,n_phi_ratio\n";
    for (const auto& r : c.rows) {
      text += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.name, to_string(r.variant), g17(r.E_J),
                          g17(r.E_L), g17(r.E_ctheta), g17(r.E_cphi), g17(r.alpha_theta_sq), g17(r.alpha_phi_sq),
                          g17(r.gamma), g17(r.B_theta), g17(r.B_phi), g17(r.B_theta_analytic), g17(r.B_phi_analytic),
                          g17(r.n_phi_element), g17(r.phi_variance), g17(r.n_phi_ratio));
    }
    write_text(path, text);
    files.push_back(path);
  }
  if (outputs.wants("json")) {
    const fs::path path = outputs.directory / "compare.json";
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json arr = json::array();
    for (const auto& r : c.rows) {
      arr.push_back({{"name", r.name}, {"variant", std::string(to_string(r.variant))}, {"E_J", r.E_J}, {"E_L", r.E_L},
                     {"E_ctheta", r.E_ctheta}, {"E_cphi", r.E_cphi}, {"alpha_theta_sq", num(r.alpha_theta_sq)},
                     {"alpha_phi_sq", num(r.alpha_phi_sq)}, {"gamma", num(r.gamma)}, {"B_theta", r.B_theta},
                     {"B_phi", r.B_phi}, {"B_theta_analytic", num(r.B_theta_analytic)},
                     {"B_phi_analytic", num(r.B_phi_analytic)}, {"n_phi_element", r.n_phi_element},
                     {"phi_variance", r.phi_variance}, {"n_phi_ratio", num(r.n_phi_ratio)}});
    }
    json j{{"rows", arr}};
    j["pokemon_vs_zero_pi"] = c.pokemon_vs_zero_pi ? json(*c.pokemon_vs_zero_pi) : json(nullptr);
    write_text(path, j.dump(2) + "\n");
    files.push_back(path);
  }
  return files;
}

}  // namespace pokesim
