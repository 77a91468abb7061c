#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>
#include <spdlog/spdlog.h>

#include <cstdlib>

#include "pokesim/analytic.hpp"
#include "pokesim/errors.hpp"
#include "pokesim/runner.hpp"

namespace py = pybind11;
using namespace pokesim;

namespace {

py::dict qubit_dict(const QubitStates& q) {
  py::dict d;
  d["index0"] = q.index0;
  d["index1"] = q.index1;
  d["cos_theta0"] = q.loc0;
  d["cos_theta1"] = q.loc1;
  d["epsilon10"] = q.epsilon10;
  return d;
}

py::dict point_dict(const SolvedPoint& p) {
  py::dict d;
  d["energies"] = p.spectrum.eigenvalues;
  d["residuals"] = p.spectrum.residuals;
  d["cos_theta"] = p.cos_theta;
  d["eigenvectors"] = p.spectrum.eigenvectors;
  d["qubit"] = p.qubit ? py::object(qubit_dict(*p.qubit)) : py::none();
  d["identification_error"] = p.identification_error;
  d["warnings"] = p.warnings;
  return d;
}

py::dict sweep_dict(const SweepRow& r) {
  py::dict d;
  d["value"] = r.value;
  d["error"] = r.error;
  if (!r.error.empty()) return d;
  d["epsilon10"] = r.epsilon10;
  d["index0"] = r.index0;
  d["index1"] = r.index1;
  d["A_f"] = r.A_f;
  d["B_theta"] = r.B_theta;
  d["B_phi"] = r.B_phi;
  d["Gamma1"] = r.Gamma1;
  d["T1"] = r.T1;
  d["T_phi"] = r.T_phi;
  d["Gamma2"] = r.Gamma2;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectra and coherence of protected two-mode superconducting qubits.";
  const char* level = std::getenv("SIM_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
  static py::exception<SolverError> solver_error(m, "SolverError", PyExc_RuntimeError);
  static py::exception<IdentificationError> identification_error(m, "IdentificationError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      config_error(e.what());
    } catch (const DomainError& e) {
      domain_error(e.what());
    } catch (const SolverError& e) {
      solver_error(e.what());
    } catch (const IdentificationError& e) {
      identification_error(e.what());
    }
  });

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("name", &RunConfig::name)
      .def_property(
          "f", [](const RunConfig& c) { return c.circuit.f; }, [](RunConfig& c, double f) { c.circuit.f = f; })
      .def_property(
          "k", [](const RunConfig& c) { return c.solver.k; }, [](RunConfig& c, int k) { c.solver.k = k; })
      .def_property(
          "n_phi", [](const RunConfig& c) { return c.basis.phi.n_phi; },
          [](RunConfig& c, int n) { c.basis.phi.n_phi = n; })
      .def_property(
          "n_theta_max", [](const RunConfig& c) { return c.basis.n_theta_max; },
          [](RunConfig& c, int n) { c.basis.n_theta_max = n; })
      .def_property(
          "output_directory", [](const RunConfig& c) { return c.outputs.directory; },
          [](RunConfig& c, const std::filesystem::path& p) { c.outputs.directory = p; })
      .def_property_readonly("variant", [](const RunConfig& c) { return std::string(to_string(c.circuit.variant)); })
      .def("set", &apply_parameter, py::arg("parameter"), py::arg("value"), "Set a sweepable parameter");

  m.def("load_config", &parse_config, py::arg("path"));
  m.def("parse_config", &parse_config_string, py::arg("text"), py::arg("name") = "config");
  m.def("sweepable_parameters", &sweepable_parameters);

  m.def(
      "solve",
      [](const RunConfig& c, bool require_qubit) {
        SolvedPoint p;
        {
          py::gil_scoped_release release;
          p = solve_point(c, require_qubit);
        }
        return point_dict(p);
      },
      py::arg("config"), py::arg("require_qubit") = false, "Lowest levels and qubit identification");
  m.def(
      "noise_report",
      [](const RunConfig& c) {
        std::string text;
        {
          py::gil_scoped_release release;
          const auto p = solve_point(c, true);
          text = noise_report_json(noise_report(p, c), p, c);
        }
        return py::module_::import("json").attr("loads")(text);
      },
      py::arg("config"), "Matrix elements, rates and times, numeric next to closed form");
  m.def(
      "sweep",
      [](const RunConfig& c, int jobs) {
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sweep_rows(c, jobs);
        }
        py::list out;
        for (const auto& r : rows) out.append(sweep_dict(r));
        return out;
      },
      py::arg("config"), py::arg("jobs") = 1);

  auto a = m.def_submodule("analytic", "Closed-form estimates");
  a.def("epsilon10", &analytic::epsilon10, py::arg("E_J"), py::arg("E_L"));
  a.def("a_f", &analytic::a_f, py::arg("E_J"), py::arg("E_L"), py::arg("E_ctheta"), py::arg("E_cphi"));
  a.def("gamma", &analytic::gamma, py::arg("E_J"), py::arg("E_L"), py::arg("E_ctheta"), py::arg("E_cphi"));
  a.def(
      "b_factors",
      [](double E_J, double E_L, double E_ctheta, double E_cphi) {
        const auto b = analytic::b_factors(E_J, E_L, E_ctheta, E_cphi);
        return py::make_tuple(b.theta, b.phi);
      },
      py::arg("E_J"), py::arg("E_L"), py::arg("E_ctheta"), py::arg("E_cphi"));
  a.def(
      "effective_ej_pair", [](double E_Jp, double E_cchi) { return analytic::effective_ej_pair(E_Jp, E_cchi).E_J1; },
      py::arg("E_Jprime"), py::arg("E_cchi"));

  m.def(
      "dephasing_eta",
      [](double t, double A_f, double K_f, double omega_c, const std::string& unit) {
        NoiseModel n;
        n.flux.K = K_f;
        n.omega_c = omega_c;
        return dephasing_eta(t, A_f, n, EnergyUnit::from_label(unit));
      },
      py::arg("t"), py::arg("A_f"), py::arg("K_f") = 3e-12, py::arg("omega_c") = 2.0 * constants::kPi,
      py::arg("unit") = "GHz");
  m.def(
      "t_phi",
      [](double A_f, double K_f, double omega_c, const std::string& unit) {
        NoiseModel n;
        n.flux.K = K_f;
        n.omega_c = omega_c;
        return t_phi_solve(A_f, n, EnergyUnit::from_label(unit)).T_phi;
      },
      py::arg("A_f"), py::arg("K_f") = 3e-12, py::arg("omega_c") = 2.0 * constants::kPi, py::arg("unit") = "GHz");
}
