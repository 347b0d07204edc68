#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <memory>

#include "tracefem/driver.hpp"

namespace py = pybind11;
using namespace tracefem;

namespace {

Vec3 to_vec(const std::array<double, 3>& p) { return {p[0], p[1], p[2]}; }
std::array<double, 3> from_vec(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coupled bulk/surface transport solver on an implicitly described sphere";

  py::class_<Mesh, std::shared_ptr<Mesh>>(m, "Mesh")
      .def_property_readonly("n_vertices", &Mesh::n_vertices)
      .def_property_readonly("n_tets", &Mesh::n_tets)
      .def_readonly("subdivisions", &Mesh::subdivisions)
      .def_readonly("level", &Mesh::level)
      .def("__repr__", [](const Mesh& mesh) {
        return "Mesh(n=" + std::to_string(mesh.subdivisions) +
               ", tets=" + std::to_string(mesh.n_tets()) + ")";
      });

  m.def(
      "build_cube_mesh",
      [](int n, std::array<double, 3> lo, std::array<double, 3> hi) {
        return std::make_shared<Mesh>(build_cube_mesh(n, Box{to_vec(lo), to_vec(hi)}));
      },
      py::arg("n"), py::arg("lo") = std::array<double, 3>{-1.5, -1.5, -1.5},
      py::arg("hi") = std::array<double, 3>{1.5, 1.5, 1.5});
  m.def("refine_uniform",
        [](const Mesh& mesh) { return std::make_shared<Mesh>(refine_uniform(mesh)); });
  m.def("mesh_size", [](const Mesh& mesh) { return mesh_size(mesh); });

  py::class_<LevelSetField>(m, "LevelSetField")
      .def_property_readonly("nodal_values", [](const LevelSetField& f) { return f.nodal_values; });

  m.def("sphere_field", [](std::shared_ptr<Mesh> mesh) { return interpolate_p1(phi_sphere, mesh); });
  m.def("interpolate_p1", [](const std::function<double(std::array<double, 3>)>& phi,
                             std::shared_ptr<Mesh> mesh) {
    return interpolate_p1([&phi](const Vec3& p) { return phi(from_vec(p)); }, mesh);
  });
  m.def("class_counts", [](const LevelSetField& f) {
    const auto c = class_counts(f);
    return py::make_tuple(c[0], c[1], c[2]);
  });

  py::class_<CutGeometry>(m, "CutGeometry")
      .def_property_readonly("n_sub_tets", &CutGeometry::n_sub_tets)
      .def_property_readonly("n_triangles", &CutGeometry::n_triangles)
      .def_readonly("n_degenerate", &CutGeometry::n_degenerate);

  m.def("build_cut_geometry", &build_cut_geometry);
  m.def("interface_area", static_cast<double (*)(const CutGeometry&)>(&interface_area));
  m.def("interface_area", static_cast<double (*)(const LevelSetField&)>(&interface_area));
  m.def("subdomain_volume", static_cast<double (*)(const CutGeometry&, int)>(&subdomain_volume),
        py::arg("geom"), py::arg("tag"));
  m.def("subdomain_volume", static_cast<double (*)(const LevelSetField&, int)>(&subdomain_volume),
        py::arg("field"), py::arg("tag"));

  py::class_<DofMaps>(m, "DofMaps")
      .def_property_readonly("n_bulk1", [](const DofMaps& d) { return d.bulk1.size(); })
      .def_property_readonly("n_bulk2", [](const DofMaps& d) { return d.bulk2.size(); })
      .def_property_readonly("n_surface", [](const DofMaps& d) { return d.surface.size(); })
      .def_property_readonly("n_dirichlet", [](const DofMaps& d) {
        return d.bulk1.dirichlet.size() + d.bulk2.dirichlet.size();
      });
  m.def("build_dofmaps", &build_dofmaps);

  py::class_<ProblemParams>(m, "ProblemParams")
      .def(py::init<>())
      .def_readwrite("nu1", &ProblemParams::nu1)
      .def_readwrite("nu2", &ProblemParams::nu2)
      .def_readwrite("nu_gamma", &ProblemParams::nu_gamma)
      .def_readwrite("k1a", &ProblemParams::k1a)
      .def_readwrite("k2a", &ProblemParams::k2a)
      .def_readwrite("k1d", &ProblemParams::k1d)
      .def_readwrite("k2d", &ProblemParams::k2d)
      .def_readwrite("K", &ProblemParams::K)
      .def("validate", &ProblemParams::validate);

  py::class_<TransformedParams>(m, "TransformedParams")
      .def_readonly("nu1t", &TransformedParams::nu1t)
      .def_readonly("nu2t", &TransformedParams::nu2t)
      .def_readonly("nuGt", &TransformedParams::nuGt)
      .def_readonly("q1", &TransformedParams::q1)
      .def_readonly("q2", &TransformedParams::q2)
      .def_readonly("r", &TransformedParams::r)
      .def_readonly("K", &TransformedParams::K);
  m.def("transform", &transform);

  m.def("velocity", [](std::array<double, 3> p) { return from_vec(velocity_field(to_vec(p))); });
  m.def("exact_surface",
        [](std::array<double, 3> p) { return ManufacturedSolution::surface(to_vec(p)); });
  m.def("exact_bulk", [](int i, std::array<double, 3> p) {
    return ManufacturedSolution::bulk(i, to_vec(p));
  });

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("experiment", &RunConfig::experiment)
      .def_readwrite("max_level", &RunConfig::max_level)
      .def_readwrite("level", &RunConfig::level)
      .def_readwrite("tol", &RunConfig::tol)
      .def_readwrite("out_dir", &RunConfig::out_dir)
      .def_readwrite("threads", &RunConfig::threads)
      .def_readwrite("eps", &RunConfig::eps)
      .def_readwrite("write_vtk", &RunConfig::write_vtk)
      .def_readwrite("params", &RunConfig::params)
      .def("validate", &RunConfig::validate)
      .def("save", &RunConfig::save)
      .def_static("load", &RunConfig::load);

  py::class_<LevelErrors>(m, "LevelErrors")
      .def_readonly("level", &LevelErrors::level)
      .def_readonly("h", &LevelErrors::h)
      .def_readonly("l2_bulk", &LevelErrors::l2_bulk)
      .def_readonly("h1_bulk", &LevelErrors::h1_bulk)
      .def_readonly("l2_surf", &LevelErrors::l2_surf)
      .def_readonly("h1_surf", &LevelErrors::h1_surf)
      .def_readonly("gcr_iters", &LevelErrors::gcr_iters);

  py::class_<ConvergenceResult>(m, "ConvergenceResult")
      .def_property_readonly("rows",
                             [](const ConvergenceResult& r) { return r.report.rows; })
      .def_readonly("all_converged", &ConvergenceResult::all_converged)
      .def_readonly("csv_path", &ConvergenceResult::csv_path);

  py::class_<DesorptionRow>(m, "DesorptionRow")
      .def_readonly("eps", &DesorptionRow::eps)
      .def_readonly("mean_u1", &DesorptionRow::mean_u1)
      .def_readonly("surf_integral", &DesorptionRow::surf_integral)
      .def_readonly("iterations", &DesorptionRow::iterations)
      .def_readonly("converged", &DesorptionRow::converged);

  py::class_<DesorptionResult>(m, "DesorptionResult")
      .def_readonly("rows", &DesorptionResult::rows)
      .def_readonly("all_converged", &DesorptionResult::all_converged)
      .def_readonly("csv_path", &DesorptionResult::csv_path);

  m.def("run_convergence", &run_convergence, py::call_guard<py::gil_scoped_release>());
  m.def("run_desorption", &run_desorption, py::call_guard<py::gil_scoped_release>());
  m.def("convergence_order", &convergence_order);
}
