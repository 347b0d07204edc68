#include "tracefem/postproc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace tracefem {

ExactFields manufactured_exact() {
  ExactFields exact;
  exact.bulk = [](int i, const Vec3& p) { return ManufacturedSolution::bulk(i, p); };
  exact.bulk_grad = [](int i, const Vec3& p) { return ManufacturedSolution::bulk_grad(i, p); };
  exact.surface = [](const Vec3& p) { return ManufacturedSolution::surface(p); };
  exact.surface_grad = [](const Vec3& p) { return ManufacturedSolution::surface_grad(p); };
  return exact;
}

double convergence_order(double err_coarse, double err_fine) {
  return std::log2(err_coarse / err_fine);
}

namespace {

std::array<int, 4> local_dofs(const DofMap& map, const std::array<int, 4>& verts) {
  std::array<int, 4> dof;
  for (int i = 0; i < 4; ++i) {
    dof[i] = map.vertex_to_local[verts[i]];
    if (dof[i] < 0) throw std::logic_error("postproc: vertex without dof in active element");
  }
  return dof;
}

}  // namespace

LevelErrors compute_errors(const DiscreteSolution& sol, const ExactFields& exact,
                           const LevelSetField& field, const CutGeometry& geom,
                           const DofMaps& dofs, bool project_exact_surface_grad) {
  const Mesh& mesh = *field.mesh;
  const QuadratureRule& tet_rule = quad_simplex(3, 5);
  const QuadratureRule& tri_rule = quad_simplex(2, 5);

  double l2b = 0.0, semib = 0.0;
  for (int s = 0; s < geom.n_sub_tets(); ++s) {
    const SubTet& st = geom.sub_tets[s];
    const auto& tet = mesh.tets[geom.sub_tet_parent[s]];
    std::array<Vec3, 4> parent_pts;
    for (int i = 0; i < 4; ++i) parent_pts[i] = mesh.vertices[tet[i]];
    const auto dof = local_dofs(st.tag == 1 ? dofs.bulk1 : dofs.bulk2, tet);
    const auto& coeff = st.tag == 1 ? sol.u1 : sol.u2;

    const double scale = 6.0 * tet_volume(st.pts[0], st.pts[1], st.pts[2], st.pts[3]);
    for (int q = 0; q < tet_rule.size(); ++q) {
      const Vec3 x = bary_to_point(tet_rule.bary[q], st.pts);
      const double w = tet_rule.weights[q] * scale;
      const P1Basis basis = eval_p1(parent_pts, x);
      double uh = 0.0;
      Vec3 guh{0, 0, 0};
      for (int a = 0; a < 4; ++a) {
        uh += coeff[dof[a]] * basis.value[a];
        guh += coeff[dof[a]] * basis.grad[a];
      }
      const double e = exact.bulk(st.tag, x) - uh;
      const Vec3 ge = exact.bulk_grad(st.tag, x) - guh;
      l2b += w * e * e;
      semib += w * norm2(ge);
    }
  }

  double l2s = 0.0, semis = 0.0;
  for (int s = 0; s < geom.n_triangles(); ++s) {
    const InterfaceTri& tri = geom.triangles[s];
    const auto& tet = mesh.tets[geom.tri_parent[s]];
    std::array<Vec3, 4> parent_pts;
    for (int i = 0; i < 4; ++i) parent_pts[i] = mesh.vertices[tet[i]];
    const auto dof = local_dofs(dofs.surface, tet);
    const Vec3 n = tri.normal;

    const double scale = 2.0 * triangle_area(tri.pts);
    for (int q = 0; q < tri_rule.size(); ++q) {
      const Vec3 x = bary_to_point(tri_rule.bary[q], tri.pts);
      const double w = tri_rule.weights[q] * scale;
      const P1Basis basis = eval_p1(parent_pts, x);
      double vh = 0.0;
      Vec3 gvh{0, 0, 0};
      for (int a = 0; a < 4; ++a) {
        vh += sol.v[dof[a]] * basis.value[a];
        gvh += sol.v[dof[a]] * basis.grad[a];
      }
      gvh -= dot(n, gvh) * n;  // discrete tangential gradient
      Vec3 gex = exact.surface_grad(x);
      if (project_exact_surface_grad) gex -= dot(n, gex) * n;
      const double e = exact.surface(x) - vh;
      l2s += w * e * e;
      semis += w * norm2(gex - gvh);
    }
  }

  LevelErrors out;
  out.l2_bulk = std::sqrt(l2b);
  out.h1_bulk = std::sqrt(l2b + semib);
  out.l2_surf = std::sqrt(l2s);
  out.h1_surf = std::sqrt(l2s + semis);
  return out;
}

double mean_bulk_concentration(const DiscreteSolution& sol, const LevelSetField& field,
                               const CutGeometry& geom, const DofMaps& dofs, int tag) {
  const Mesh& mesh = *field.mesh;
  const QuadratureRule& rule = quad_simplex(3, 2);
  double integral = 0.0, volume = 0.0;
  for (int s = 0; s < geom.n_sub_tets(); ++s) {
    const SubTet& st = geom.sub_tets[s];
    if (st.tag != tag) continue;
    const auto& tet = mesh.tets[geom.sub_tet_parent[s]];
    std::array<Vec3, 4> parent_pts;
    for (int i = 0; i < 4; ++i) parent_pts[i] = mesh.vertices[tet[i]];
    const auto dof = local_dofs(tag == 1 ? dofs.bulk1 : dofs.bulk2, tet);
    const auto& coeff = tag == 1 ? sol.u1 : sol.u2;

    const double vol = tet_volume(st.pts[0], st.pts[1], st.pts[2], st.pts[3]);
    volume += vol;
    const double scale = 6.0 * vol;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 x = bary_to_point(rule.bary[q], st.pts);
      const P1Basis basis = eval_p1(parent_pts, x);
      double uh = 0.0;
      for (int a = 0; a < 4; ++a) uh += coeff[dof[a]] * basis.value[a];
      integral += rule.weights[q] * scale * uh;
    }
  }
  if (volume <= 0.0) throw std::runtime_error("mean_bulk_concentration: empty subdomain");
  return integral / volume;
}

double surface_integral(const DiscreteSolution& sol, const LevelSetField& field,
                        const CutGeometry& geom, const DofMaps& dofs) {
  const Mesh& mesh = *field.mesh;
  const QuadratureRule& rule = quad_simplex(2, 2);
  double integral = 0.0;
  for (int s = 0; s < geom.n_triangles(); ++s) {
    const InterfaceTri& tri = geom.triangles[s];
    const auto& tet = mesh.tets[geom.tri_parent[s]];
    std::array<Vec3, 4> parent_pts;
    for (int i = 0; i < 4; ++i) parent_pts[i] = mesh.vertices[tet[i]];
    const auto dof = local_dofs(dofs.surface, tet);

    const double scale = 2.0 * triangle_area(tri.pts);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 x = bary_to_point(rule.bary[q], tri.pts);
      const P1Basis basis = eval_p1(parent_pts, x);
      double vh = 0.0;
      for (int a = 0; a < 4; ++a) vh += sol.v[dof[a]] * basis.value[a];
      integral += rule.weights[q] * scale * vh;
    }
  }
  return integral;
}

void write_convergence_csv(const std::string& path, const ErrorReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_convergence_csv: cannot open " + path);
  out << "level,h,l2_bulk,order_l2_bulk,h1_bulk,order_h1_bulk,"
         "l2_surf,order_l2_surf,h1_surf,order_h1_surf,gcr_iters\n";

  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.5e", v);
    return std::string(buf);
  };

  const LevelErrors* prev = nullptr;
  for (const auto& row : report.rows) {
    out << row.level << ',' << num(row.h);
    const double errs[4] = {row.l2_bulk, row.h1_bulk, row.l2_surf, row.h1_surf};
    const double prev_errs[4] = {prev ? prev->l2_bulk : 0.0, prev ? prev->h1_bulk : 0.0,
                                 prev ? prev->l2_surf : 0.0, prev ? prev->h1_surf : 0.0};
    for (int k = 0; k < 4; ++k) {
      out << ',' << num(errs[k]) << ',';
      if (prev) out << num(convergence_order(prev_errs[k], errs[k]));
    }
    out << ',' << row.gcr_iters << '\n';
    prev = &row;
  }
}

void write_vtk_volume(const std::string& path, const LevelSetField& field,
                      const DiscreteSolution& sol, const DofMaps& dofs) {
  const Mesh& mesh = *field.mesh;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk_volume: cannot open " + path);

  out << "# vtk DataFile Version 3.0\nbulk concentration\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  char buf[96];
  for (const auto& p : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", p.x, p.y, p.z);
    out << buf;
  }
  out << "CELLS " << mesh.n_tets() << ' ' << 5 * mesh.n_tets() << '\n';
  for (const auto& t : mesh.tets) out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "CELL_TYPES " << mesh.n_tets() << '\n';
  for (int t = 0; t < mesh.n_tets(); ++t) out << "10\n";

  out << "POINT_DATA " << mesh.n_vertices() << '\n';
  out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    // Each vertex carries the concentration of the subdomain it lies in.
    double val = 0.0;
    if (field.nodal_values[v] < 0.0) {
      const int l = dofs.bulk1.vertex_to_local[v];
      if (l >= 0) val = sol.u1[l];
    } else {
      const int l = dofs.bulk2.vertex_to_local[v];
      if (l >= 0) val = sol.u2[l];
    }
    std::snprintf(buf, sizeof(buf), "%.9g\n", val);
    out << buf;
  }
  out << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (double v : field.nodal_values) {
    std::snprintf(buf, sizeof(buf), "%.9g\n", v);
    out << buf;
  }
}

void write_vtk_interface(const std::string& path, const LevelSetField& field,
                         const CutGeometry& geom, const DiscreteSolution& sol,
                         const DofMaps& dofs) {
  const Mesh& mesh = *field.mesh;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk_interface: cannot open " + path);

  // Triangle corners are shared bitwise between neighboring cut tets, so a
  // coordinate map deduplicates them exactly.
  std::map<std::array<double, 3>, int> point_id;
  std::vector<std::array<double, 3>> points;
  std::vector<double> values;
  std::vector<std::array<int, 3>> cells;

  for (int s = 0; s < geom.n_triangles(); ++s) {
    const InterfaceTri& tri = geom.triangles[s];
    const auto& tet = mesh.tets[geom.tri_parent[s]];
    std::array<Vec3, 4> parent_pts;
    for (int i = 0; i < 4; ++i) parent_pts[i] = mesh.vertices[tet[i]];
    const auto dof = local_dofs(dofs.surface, tet);

    std::array<int, 3> cell;
    for (int c = 0; c < 3; ++c) {
      const Vec3& p = tri.pts[c];
      const std::array<double, 3> key{p.x, p.y, p.z};
      auto [it, inserted] = point_id.try_emplace(key, static_cast<int>(points.size()));
      if (inserted) {
        points.push_back(key);
        const P1Basis basis = eval_p1(parent_pts, p);
        double vh = 0.0;
        for (int a = 0; a < 4; ++a) vh += sol.v[dof[a]] * basis.value[a];
        values.push_back(vh);
      }
      cell[c] = it->second;
    }
    cells.push_back(cell);
  }

  out << "# vtk DataFile Version 3.0\nsurface concentration\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points.size() << " double\n";
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", p[0], p[1], p[2]);
    out << buf;
  }
  out << "CELLS " << cells.size() << ' ' << 4 * cells.size() << '\n';
  for (const auto& c : cells) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << cells.size() << '\n';
  for (size_t c = 0; c < cells.size(); ++c) out << "5\n";
  out << "POINT_DATA " << points.size() << '\n';
  out << "SCALARS v double 1\nLOOKUP_TABLE default\n";
  for (double v : values) {
    std::snprintf(buf, sizeof(buf), "%.9g\n", v);
    out << buf;
  }
}

}  // namespace tracefem
