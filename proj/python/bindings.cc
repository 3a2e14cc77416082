// Copyright 2026 The gaugesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <bit>

#include "gaugesim/circuit.h"
#include "gaugesim/config.h"
#include "gaugesim/errors.h"
#include "gaugesim/exact.h"
#include "gaugesim/harness.h"
#include "gaugesim/measurement.h"

namespace py = pybind11;
using namespace gaugesim;

namespace {

py::array_t<Complex> amplitudes(const StateVector& s) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(s.size()));
  auto view = out.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < view.shape(0); ++i) view(i) = s[static_cast<std::size_t>(i)];
  return out;
}

StateVector from_amplitudes(py::array_t<Complex, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 1) throw std::invalid_argument("amplitudes must be one-dimensional");
  const auto n = static_cast<std::size_t>(a.shape(0));
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("length must be a power of two");
  const auto view = a.unchecked<1>();
  std::vector<Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = view(static_cast<py::ssize_t>(i));
  return StateVector(std::countr_zero(n), std::move(v));
}

py::object to_py(const nlohmann::ordered_json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict series_dict(const ObservableSeries& s) {
  py::dict out;
  for (const auto& r : s.records()) {
    if (!out.contains(r.name)) out[py::str(r.name)] = py::list();
    py::object v = r.estimate.value ? py::object(py::float_(*r.estimate.value)) : py::object(py::none());
    out[py::str(r.name)].cast<py::list>().append(v);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Statevector simulation of Trotterized lattice gauge theories";
  m.attr("__version__") = std::string(software_version());

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<ToleranceError>(m, "ToleranceError", PyExc_ArithmeticError);

  py::enum_<Boundary>(m, "Boundary").value("OPEN", Boundary::kOpen).value("PERIODIC", Boundary::kPeriodic);
  py::enum_<ModelKind>(m, "ModelKind")
      .value("Z2", ModelKind::kZ2)
      .value("U1", ModelKind::kU1)
      .value("Z2_PROTECTED", ModelKind::kZ2Protected);
  py::enum_<InitialStateKind>(m, "InitialState")
      .value("DEFECT", InitialStateKind::kDefect)
      .value("HALF_FILLING", InitialStateKind::kHalfFilling)
      .value("PSI3", InitialStateKind::kPsi3);
  py::enum_<MeasureBasis>(m, "MeasureBasis")
      .value("COMPUTATIONAL", MeasureBasis::kComputational)
      .value("GAUGE_X", MeasureBasis::kGaugeX);

  py::class_<LatticeSpec>(m, "Lattice")
      .def(py::init<int, Boundary>(), py::arg("n_matter"), py::arg("boundary") = Boundary::kPeriodic)
      .def_property_readonly("n_matter", &LatticeSpec::n_matter)
      .def_property_readonly("n_links", &LatticeSpec::n_links)
      .def_property_readonly("num_qubits", &LatticeSpec::num_qubits)
      .def_property_readonly("periodic", &LatticeSpec::periodic)
      .def("matter_qubit", &LatticeSpec::matter_qubit)
      .def("link_qubit", &LatticeSpec::link_qubit);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double j, double f, double mu, double v, std::vector<double> c, double dt, int n_steps) {
             ModelParams p;
             p.j = j;
             p.f = f;
             p.mu = mu;
             p.protection_v = v;
             for (double x : c) p.protection_seq.push_back(Rational::from_double(x));
             p.dt = dt;
             p.n_steps = n_steps;
             return p;
           }),
           py::arg("j") = 1.0, py::arg("f") = 0.0, py::arg("mu") = 0.0, py::arg("v") = 0.0,
           py::arg("c") = std::vector<double>{}, py::arg("dt") = 0.2, py::arg("n_steps") = 0)
      .def_readwrite("j", &ModelParams::j)
      .def_readwrite("f", &ModelParams::f)
      .def_readwrite("mu", &ModelParams::mu)
      .def_readwrite("v", &ModelParams::protection_v)
      .def_readwrite("dt", &ModelParams::dt)
      .def_readwrite("n_steps", &ModelParams::n_steps)
      .def_property_readonly("c", &ModelParams::protection_seq_values)
      .def("validate", &ModelParams::validate);

  py::class_<ProductState>(m, "ProductState")
      .def_readonly("matter_z", &ProductState::matter_z)
      .def_readonly("gauge_x", &ProductState::gauge_x);
  py::class_<GaugeSector>(m, "GaugeSector")
      .def_readonly("g_z2", &GaugeSector::g_z2)
      .def_readonly("g_u1", &GaugeSector::g_u1);
  m.def("initial_state", &build_initial_state, py::arg("kind"), py::arg("lattice"));
  m.def("gauge_sector", &gauge_sector_of, py::arg("state"), py::arg("lattice"));

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<int>(), py::arg("num_qubits"))
      .def_static("from_amplitudes", &from_amplitudes)
      .def_property_readonly("num_qubits", &StateVector::num_qubits)
      .def("amplitudes", &amplitudes)
      .def("norm_squared", &StateVector::norm_squared)
      .def("sample", [](const StateVector& s, std::size_t shots, std::uint64_t seed) {
        return s.sample_shots(shots, seed).rows;
      }, py::arg("shots"), py::arg("seed"));

  py::class_<GateCounts>(m, "GateCounts")
      .def_readonly("two_qubit", &GateCounts::two_qubit)
      .def_readonly("rz", &GateCounts::rz)
      .def_readonly("rxy", &GateCounts::rxy)
      .def_readonly("cphase_residual", &GateCounts::cphase_residual);
  py::class_<Circuit>(m, "Circuit")
      .def_property_readonly("num_qubits", &Circuit::num_qubits)
      .def_property_readonly("num_moments", [](const Circuit& c) { return c.moments().size(); })
      .def("two_qubit_depth", &Circuit::two_qubit_depth)
      .def("counts", &Circuit::counts)
      .def("to_text", &Circuit::to_text)
      .def("apply", [](const Circuit& c, StateVector& s) { apply_circuit(c, s); });
  m.def("trotter_step", &build_trotter_step, py::arg("params"), py::arg("lattice"));
  m.def("experiment_circuit", &build_experiment_circuit, py::arg("initial"), py::arg("params"), py::arg("lattice"),
        py::arg("basis") = MeasureBasis::kGaugeX);
  m.def("with_cphase_noise", [](const Circuit& c, double phi, double spread, std::uint64_t seed) {
    NoiseParams np;
    np.cphase_phi_mean = phi;
    np.cphase_phi_spread = spread;
    np.seed = seed;
    return apply_cphase_noise(c, np);
  }, py::arg("circuit"), py::arg("phi") = 0.138, py::arg("spread") = 0.0, py::arg("seed") = 0);

  py::class_<SparseHamiltonian>(m, "Hamiltonian")
      .def_property_readonly("num_qubits", &SparseHamiltonian::num_qubits)
      .def("expectation", &SparseHamiltonian::expectation);
  m.def("hamiltonian", &build_hamiltonian, py::arg("params"), py::arg("model"), py::arg("lattice"));
  m.def("evolve_exact", [](const StateVector& s, const SparseHamiltonian& h, double t) { return evolve_exact(s, h, t); },
        py::arg("state"), py::arg("hamiltonian"), py::arg("t"));
  m.def("trotter_error_study", [](const ModelParams& p, const LatticeSpec& l, const std::vector<double>& grid,
                                  double t_f) {
    std::vector<std::tuple<double, int, double>> out;
    for (const auto& pt : trotter_error_study(p, l, grid, t_f)) out.emplace_back(pt.dt, pt.steps, pt.delta_e);
    return out;
  }, py::arg("params"), py::arg("lattice"), py::arg("dt_grid"), py::arg("t_f") = 10.0);

  m.def("electric_field", [](const StateVector& s, const LatticeSpec& l) { return electric_field_average(s, l); });
  m.def("eta_z2", [](const StateVector& s, const LatticeSpec& l, const GaugeSector& g) { return eta_z2(s, l, g); });
  m.def("eta_u1", [](const StateVector& s, const LatticeSpec& l, const GaugeSector& g) { return eta_u1(s, l, g); });
  m.def("site_resolved", [](const StateVector& s, const LatticeSpec& l) { return site_resolved(s, l); });

  m.def("preset_names", &preset_names);
  m.def("preset_config", [](const std::string& name) { return to_py(config_to_json(preset_config(name))); });
  m.def("validate_config", [](const py::object& cfg) { config_from_json(from_py(cfg)).validate(); });
  m.def("run_config", [](const py::object& cfg, bool write_files) {
    const RunResult r = run_config(config_from_json(from_py(cfg)), {.write_files = write_files});
    py::list series;
    for (const auto& s : r.series) {
      py::dict d;
      d["point"] = s.point;
      d["variant"] = s.variant;
      d["seed"] = s.seed;
      d["observables"] = series_dict(s.series);
      d["csv"] = s.series.to_csv();
      series.append(d);
    }
    py::list trotter;
    for (const auto& pt : r.trotter) trotter.append(py::make_tuple(pt.dt, pt.steps, pt.delta_e));
    py::dict out;
    out["series"] = series;
    out["trotter"] = trotter;
    out["trotter_slope"] = r.trotter_slope ? py::object(py::float_(*r.trotter_slope)) : py::object(py::none());
    out["files"] = r.files;
    out["wall_time_s"] = r.wall_time_s;
    return out;
  }, py::arg("config"), py::arg("write_files") = false);
}
