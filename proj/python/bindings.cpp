#include "curldiv/cases.hpp"
#include "curldiv/errors.hpp"
#include "curldiv/workflow.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace curldiv;

namespace {

Eigen::MatrixXd vertex_array(const Mesh& m) {
  Eigen::MatrixXd v(m.num_vertices(), 3);
  for (int i = 0; i < m.num_vertices(); ++i) v.row(i) = m.vertex(i).transpose();
  return v;
}

Eigen::MatrixXi tet_array(const Mesh& m) {
  Eigen::MatrixXi t(m.num_tets(), 4);
  for (int i = 0; i < m.num_tets(); ++i)
    for (int k = 0; k < 4; ++k) t(i, k) = m.tet(i)[k];
  return t;
}

Mesh mesh_from_arrays(const Eigen::MatrixXd& vertices, const Eigen::MatrixXi& tets, std::vector<int> tags) {
  if (vertices.cols() != 3 || tets.cols() != 4) throw MeshError("expected (n, 3) vertices and (m, 4) cells");
  std::vector<Point3> coords;
  for (int i = 0; i < vertices.rows(); ++i) coords.emplace_back(vertices.row(i).transpose());
  std::vector<std::array<int, 4>> cells;
  for (int i = 0; i < tets.rows(); ++i) cells.push_back({tets(i, 0), tets(i, 1), tets(i, 2), tets(i, 3)});
  return Mesh::build(std::move(coords), cells, std::move(tags));
}

py::dict solve_dict(const Mesh& m, const std::string& config_json) {
  const SolveOutcome o = run_solve(m, parse_config(config_json));
  py::dict d;
  d["report"] = o.report_json;
  d["ok"] = o.ok;
  d["space"] = to_string(o.solution.u_h.space);
  d["coefficients"] = o.solution.u_h.coeffs;
  d["reduced_coefficients"] = o.solution.coeffs;
  d["iterations"] = o.solution.stats.iterations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Curl-div finite element solver on tetrahedral meshes";

  auto base = py::register_exception<Error>(mod, "CurldivError", PyExc_RuntimeError);
  py::register_exception<MeshError>(mod, "MeshError", base.ptr());
  py::register_exception<TopologyError>(mod, "TopologyError", base.ptr());
  py::register_exception<DataError>(mod, "DataError", base.ptr());
  py::register_exception<SolverError>(mod, "SolverError", base.ptr());
  py::register_exception<ParseError>(mod, "ParseError", base.ptr());
  py::register_exception<IoError>(mod, "IoError", base.ptr());

  py::class_<Mesh>(mod, "Mesh")
      .def(py::init(&mesh_from_arrays), py::arg("vertices"), py::arg("tets"), py::arg("tags") = std::vector<int>{})
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_edges", &Mesh::num_edges)
      .def_property_readonly("num_faces", &Mesh::num_faces)
      .def_property_readonly("num_tets", &Mesh::num_tets)
      .def_property_readonly("euler_characteristic", &Mesh::euler_characteristic)
      .def_property_readonly("vertices", &vertex_array)
      .def_property_readonly("tets", &tet_array)
      .def_property_readonly("tags", &Mesh::tags)
      .def("__repr__", [](const Mesh& m) {
        return "<Mesh vertices=" + std::to_string(m.num_vertices()) + " tets=" + std::to_string(m.num_tets()) + ">";
      });

  mod.def("read_gmsh", [](const std::string& path) { return read_gmsh(path).mesh; }, py::arg("path"));
  mod.def("write_gmsh", &write_gmsh, py::arg("mesh"), py::arg("path"));
  mod.def("structured_cube_mesh", &structured_cube_mesh, py::arg("n"));
  mod.def("solid_torus_mesh", &solid_torus_mesh, py::arg("k") = 1);
  mod.def("hollow_ball_mesh", &hollow_ball_mesh, py::arg("k") = 1);

  mod.def("topology_report", [](const Mesh& m) { return topology_report(m, analyze_topology(m)); },
          py::arg("mesh"), "Topology report as a JSON string");
  mod.def("case_names", &case_names);
  mod.def("solve", &solve_dict, py::arg("mesh"), py::arg("config_json"),
          "Solve with a JSON configuration; returns the report and the solution coefficients");
  mod.def(
      "convergence",
      [](const std::string& name, const std::string& formulation, int levels, int first_level) {
        Formulation f;
        if (formulation == "tangential") {
          f = Formulation::Tangential;
        } else if (formulation == "normal") {
          f = Formulation::Normal;
        } else {
          throw DataError("formulation must be 'tangential' or 'normal'");
        }
        return run_convergence(name, f, levels, first_level).to_json();
      },
      py::arg("case"), py::arg("formulation") = "tangential", py::arg("levels") = 2, py::arg("first_level") = 0,
      "Refinement study as a JSON string");
}
