#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "darkdimer/darkstates.hpp"
#include "darkdimer/dynamics.hpp"
#include "darkdimer/errors.hpp"
#include "darkdimer/experiments.hpp"
#include "darkdimer/observables.hpp"

namespace py = pybind11;
using namespace darkdimer;

namespace {

DensityMatrix to_density(const ComplexMatrix& rho) { return DensityMatrix(rho); }

py::dict steady_dict(const SteadyStateResult& ss) {
  py::dict d;
  d["state"] = ss.state.matrix();
  d["converged"] = ss.converged;
  d["residual"] = ss.residual;
  d["t_converge"] = ss.t_converge;
  d["purity"] = purity(ss.state);
  py::list t, p;
  for (const SeriesRecord& r : ss.series.records) {
    t.append(r.t);
    p.append(r.purity);
  }
  d["times"] = t;
  d["purities"] = p;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dark dimer steady states of emitter arrays in a squeezed vacuum";
  m.attr("__version__") = DARKDIMER_VERSION;

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

  py::class_<BathParams>(m, "BathParams")
      .def_property_readonly("n_ph", &BathParams::n_ph)
      .def_property_readonly("m_abs", &BathParams::m_abs)
      .def_property_readonly("phi", &BathParams::phi)
      .def_property_readonly("is_minimal", &BathParams::is_minimal)
      .def_property_readonly("mu", &BathParams::mu)
      .def_property_readonly("nu", &BathParams::nu)
      .def_property_readonly("eta", &BathParams::eta)
      .def_property_readonly("thermal_ratio", &BathParams::thermal_ratio);
  m.def("make_bath", &make_bath, py::arg("n_ph"), py::arg("phi") = 0.0, py::arg("minimal") = true,
        py::arg("m_abs_override") = py::none());

  py::class_<ArrayGeometry>(m, "ArrayGeometry")
      .def_readonly("n_at", &ArrayGeometry::n_at)
      .def_readonly("k0a", &ArrayGeometry::k0a)
      .def_readonly("k0zc", &ArrayGeometry::k0zc)
      .def_readonly("k0z", &ArrayGeometry::k0z);
  m.def("make_geometry", &make_geometry, py::arg("n_at"), py::arg("k0a"), py::arg("k0zc"));

  py::class_<ModelOperators>(m, "ModelOperators")
      .def_readonly("hamiltonian", &ModelOperators::hamiltonian)
      .def_readonly("gamma", &ModelOperators::gamma)
      .def_readonly("geometry", &ModelOperators::geometry);
  m.def("build_model", &build_model, py::arg("geometry"), py::arg("bath"), py::arg("gamma") = 1.0);
  m.def("squeezed_jumps", &squeezed_jumps);

  py::enum_<GeneratorForm>(m, "GeneratorForm")
      .value("general", GeneratorForm::kGeneral)
      .value("squeezed", GeneratorForm::kSqueezed);
  m.def("lindblad_rhs", &lindblad_rhs, py::arg("rho"), py::arg("model"),
        py::arg("form") = GeneratorForm::kGeneral);

  m.def(
      "steady_state",
      [](const ComplexMatrix& rho0, const ModelOperators& model, double dt, double t_max, double tol,
         int record_stride) {
        EvolveConfig cfg;
        cfg.dt = dt;
        cfg.t_max = t_max;
        cfg.convergence_tol = tol;
        cfg.record_stride = record_stride;
        std::optional<SteadyStateResult> ss;
        {
          py::gil_scoped_release release;
          ss.emplace(steady_state(to_density(rho0), model, cfg));
        }
        return steady_dict(*ss);
      },
      py::arg("rho0"), py::arg("model"), py::arg("dt") = 0.005, py::arg("t_max") = 2.0e4,
      py::arg("tol") = 1e-9, py::arg("record_stride") = 200);
  m.def(
      "ground_state",
      [](int n_at) {
        return DensityMatrix::from_pure(PureState(basis_vector(std::vector<bool>(n_at, false)))).matrix();
      },
      py::arg("n_at"));

  m.def("purity", py::overload_cast<const ComplexMatrix&>(&purity));
  m.def("excitation_populations", py::overload_cast<const ComplexMatrix&>(&excitation_populations));
  m.def(
      "pair_correlations",
      [](const ComplexMatrix& rho, int n_at) {
        const CorrelationMatrix c = pair_correlations(rho, n_at);
        return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                   c.entries.data(), n_at, n_at)
            .eval();
      },
      py::arg("rho"), py::arg("n_at"));
  m.def(
      "polarization_moments",
      [](const ComplexMatrix& rho, int n_at) {
        const PolarizationMoments pm = CollectiveSpin(n_at).moments(rho);
        py::dict d;
        d["mean_x"] = pm.mean_x;
        d["mean_y"] = pm.mean_y;
        d["mean_z"] = pm.mean_z;
        d["var_x"] = pm.var_x;
        d["var_y"] = pm.var_y;
        d["var_z"] = pm.var_z;
        return d;
      },
      py::arg("rho"), py::arg("n_at"));
  m.def("dark_condition", &dark_condition);
  m.def(
      "fidelity",
      [](const ComplexVector& psi, const ComplexMatrix& rho) {
        return fidelity(PureState::normalized(psi), to_density(rho));
      },
      py::arg("psi"), py::arg("rho"));

  auto amplitudes = [](const PureState& s) { return s.amplitudes(); };
  m.def("dimer_chain", [=](const ArrayGeometry& g, const BathParams& b) { return amplitudes(dimer_chain(g, b)); });
  m.def("melted_dark", [=](const ArrayGeometry& g, const BathParams& b, int l) {
    return amplitudes(melted_dark(g, b, l));
  });
  m.def("agarwal_puri_state", [=](const ArrayGeometry& g, const BathParams& b, int l) {
    return amplitudes(agarwal_puri_state(g, b, l));
  });
  m.def(
      "squeezed_pair",
      [=](const ArrayGeometry& g, const BathParams& b, int n, int mm) {
        return amplitudes(pair_state(g, b, {n, mm, PairKind::kSqueezed}));
      },
      py::arg("geometry"), py::arg("bath"), py::arg("n") = 1, py::arg("m") = 2);

  py::enum_<PopulationLaw>(m, "PopulationLaw")
      .value("thermal", PopulationLaw::kThermal)
      .value("squeezed", PopulationLaw::kSqueezed)
      .value("dimer", PopulationLaw::kDimer);
  m.def("predicted_populations", &predicted_populations);
}
