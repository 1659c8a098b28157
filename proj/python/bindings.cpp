#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "usctopo/bandtheory.hpp"
#include "usctopo/basis.hpp"
#include "usctopo/commands.hpp"
#include "usctopo/dynamics.hpp"
#include "usctopo/errors.hpp"
#include "usctopo/hamiltonian.hpp"
#include "usctopo/observables.hpp"
#include "usctopo/spectra.hpp"
#include "usctopo/sweep.hpp"

namespace py = pybind11;
using namespace usctopo;

namespace {

py::dict table_to_dict(const Table& t) {
  py::dict d;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    py::list col;
    for (const auto& row : t.rows) {
      std::visit([&](const auto& v) { col.append(v); }, row[c]);
    }
    d[py::str(t.columns[c])] = col;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact diagonalization of dimerized two-level-system chains";
  m.attr("__version__") = USCTOPO_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SizeError>(m, "SizeError", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<NotHermitianError>(m, "NotHermitianError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<NormalizationError>(m, "NormalizationError", base.ptr());
  py::register_exception<SectorError>(m, "SectorError", base.ptr());

  py::class_<SectorTable>(m, "SectorTable")
      .def_property_readonly("n_sites", &SectorTable::n_sites)
      .def_property_readonly("dim", &SectorTable::dim)
      .def("sector_sizes",
           [](const SectorTable& b) {
             auto s = b.sector_sizes();
             return std::vector<std::size_t>(s.begin(), s.end());
           })
      .def("sector_members", [](const SectorTable& b, int sector) {
        auto s = b.sector_members(sector);
        return std::vector<Mask>(s.begin(), s.end());
      });
  m.def("build_basis", &build_basis, py::arg("n_sites"));
  m.def("bare_state_label", &bare_state_label, py::arg("mask"), py::arg("n_sites"));

  py::enum_<Boundary>(m, "Boundary").value("open", Boundary::open).value("periodic", Boundary::periodic);

  py::class_<ChainSpec>(m, "ChainSpec")
      .def(py::init([](int n_sites, double omega0, double j1, double j2, bool rwa, Boundary boundary) {
             return ChainSpec::from_couplings(n_sites, omega0, j1, j2, rwa, boundary);
           }),
           py::arg("n_sites"), py::arg("omega0") = 1.0, py::arg("j1") = 0.0, py::arg("j2") = 0.0,
           py::arg("rwa") = false, py::arg("boundary") = Boundary::open)
      .def_static("from_dimerization", &ChainSpec::from_dimerization, py::arg("n_sites"),
                  py::arg("omega0"), py::arg("epsilon"), py::arg("jbar"), py::arg("rwa") = false,
                  py::arg("boundary") = Boundary::open)
      .def_readonly("n_sites", &ChainSpec::n_sites)
      .def_readonly("omega0", &ChainSpec::omega0)
      .def_readonly("j1", &ChainSpec::j1)
      .def_readonly("j2", &ChainSpec::j2)
      .def_readonly("rwa", &ChainSpec::rwa)
      .def_readonly("boundary", &ChainSpec::boundary)
      .def_property_readonly("jbar", &ChainSpec::jbar)
      .def_property_readonly("epsilon", &ChainSpec::epsilon)
      .def("__repr__", [](const ChainSpec& s) { return describe(s); });

  py::class_<HermitianOperator>(m, "HermitianOperator")
      .def_static("from_matrix", &HermitianOperator::from_matrix, py::arg("matrix"),
                  py::arg("energy_scale") = 1.0, py::arg("conserves_excitations") = false)
      .def_property_readonly("matrix", &HermitianOperator::matrix)
      .def_property_readonly("dim", &HermitianOperator::dim)
      .def("hermiticity_defect", &HermitianOperator::hermiticity_defect);
  m.def("build_dimer", &build_dimer, py::arg("omega0"), py::arg("j"), py::arg("rwa") = false);
  m.def("build_chain", &build_chain, py::arg("spec"), py::arg("basis"));

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def_readonly("eigenvectors", &Spectrum::eigenvectors)
      .def_property_readonly("dim", &Spectrum::dim)
      .def("orthonormality_defect", &Spectrum::orthonormality_defect)
      .def("reconstruction_defect", &Spectrum::reconstruction_defect);
  m.def("diagonalize", &diagonalize, py::arg("op"));
  m.def("diagonalize_sector", &diagonalize_sector, py::arg("op"), py::arg("basis"), py::arg("sector"));

  py::class_<DimerEigensystem>(m, "DimerEigensystem")
      .def_readonly("frequencies", &DimerEigensystem::frequencies)
      .def_property_readonly("states", [](const DimerEigensystem& d) { return Eigen::MatrixXd(d.states); });
  m.def("dimer_exact", &dimer_exact, py::arg("omega0"), py::arg("j"));

  py::class_<StateDiagnostics>(m, "StateDiagnostics")
      .def_readonly("state_index", &StateDiagnostics::state_index)
      .def_readonly("eigenvalue", &StateDiagnostics::eigenvalue)
      .def_readonly("participation_ratio", &StateDiagnostics::participation_ratio)
      .def_readonly("edge_weight", &StateDiagnostics::edge_weight)
      .def_readonly("anti_edge_weight", &StateDiagnostics::anti_edge_weight)
      .def_readonly("dominant_sector", &StateDiagnostics::dominant_sector)
      .def_readonly("sector_fraction", &StateDiagnostics::sector_fraction);
  py::class_<GroundStateOccupancy>(m, "GroundStateOccupancy")
      .def_readonly("mean_excitations", &GroundStateOccupancy::mean_excitations)
      .def_readonly("vacuum_deficit", &GroundStateOccupancy::vacuum_deficit)
      .def_readonly("n_sites", &GroundStateOccupancy::n_sites)
      .def_property_readonly("per_site", &GroundStateOccupancy::per_site);

  m.def("participation_ratio", py::overload_cast<const Eigen::VectorXd&>(&participation_ratio),
        py::arg("state"));
  m.def("edge_weight",
        py::overload_cast<const Eigen::VectorXd&, const SectorTable&, int>(&edge_weight),
        py::arg("state"), py::arg("basis"), py::arg("region_sites") = 1);
  m.def("anti_edge_weight",
        py::overload_cast<const Eigen::VectorXd&, const SectorTable&, int>(&anti_edge_weight),
        py::arg("state"), py::arg("basis"), py::arg("region_sites") = 1);
  m.def("diagnose", &diagnose, py::arg("spectrum"), py::arg("basis"));
  m.def("ground_state_occupancy", &ground_state_occupancy, py::arg("spectrum"), py::arg("basis"));

  m.def(
      "dimer_mean_correlations",
      [](double omega0, double j, double t_max, int n_points) {
        const auto c = dimer_mean_correlations(omega0, j, TimeGrid(0.0, t_max, n_points, TimeUnit::inverse_coupling));
        return py::make_tuple(c.time, c.site1, c.site2);
      },
      py::arg("omega0"), py::arg("j"), py::arg("t_max") = 7.0, py::arg("n_points") = 1000,
      "Returns (J t, site1, site2).");

  m.def(
      "dispersion",
      [](double omega0, double j1, double j2, int n_points) {
        DispersionSpec spec;
        spec.omega0 = omega0;
        spec.j1 = j1;
        spec.j2 = j2;
        spec.n_momentum_points = n_points;
        const auto d = dispersion(spec);
        return py::make_tuple(d.qd, d.lower, d.upper);
      },
      py::arg("omega0"), py::arg("j1"), py::arg("j2"), py::arg("n_points") = 201,
      "Returns (q d, lower band, upper band).");
  m.def(
      "bowtie_boundaries",
      [](double epsilon, double jbar, double omega0) { return bowtie_boundaries(epsilon, jbar, omega0).as_array(); },
      py::arg("epsilon"), py::arg("jbar"), py::arg("omega0") = 1.0);

  m.def(
      "run_sweep",
      [](const std::string& plan_json, int threads) {
        const auto plan = plan_from_json(nlohmann::json::parse(plan_json));
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(plan, SweepOptions{threads});
        }
        py::dict out;
        out["states"] = table_to_dict(sweep_state_table(result));
        out["points"] = table_to_dict(sweep_point_table(result));
        py::list failures;
        for (const auto& f : result.failures) failures.append(f.message);
        out["failures"] = failures;
        return out;
      },
      py::arg("plan_json"), py::arg("threads") = 0,
      "Runs a JSON sweep plan; returns column dicts for states and ground-state points.");

  m.def("seed_check", []() {
    std::ostringstream log;
    const bool ok = seed_check(log);
    return py::make_tuple(ok, log.str());
  });
}
