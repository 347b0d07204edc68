#include "tracefem/fespace.hpp"

#include <cmath>
#include <stdexcept>

namespace tracefem {

namespace {

DofMap finalize(SpaceId space, const std::vector<std::uint8_t>& active_flag, const Mesh& mesh,
                bool with_dirichlet) {
  DofMap map;
  map.space = space;
  map.vertex_to_local.assign(mesh.n_vertices(), -1);
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (active_flag[v]) {
      map.vertex_to_local[v] = static_cast<int>(map.active.size());
      map.active.push_back(v);
    }
  map.is_dirichlet.assign(map.active.size(), 0);
  if (with_dirichlet) {
    for (int l = 0; l < map.size(); ++l)
      if (mesh.on_boundary[map.active[l]]) {
        map.is_dirichlet[l] = 1;
        map.dirichlet.push_back(l);
      }
  }
  return map;
}

}  // namespace

DofMaps build_dofmaps(const LevelSetField& field) {
  const Mesh& mesh = *field.mesh;
  std::vector<std::uint8_t> in1(mesh.n_vertices(), 0), in2(mesh.n_vertices(), 0),
      on_surf(mesh.n_vertices(), 0);

  for (int t = 0; t < mesh.n_tets(); ++t) {
    const TetClass cls = classify(field, t);
    for (int v : mesh.tets[t]) {
      if (cls != TetClass::Inside2) in1[v] = 1;
      if (cls != TetClass::Inside1) in2[v] = 1;
      if (cls == TetClass::Cut) on_surf[v] = 1;
    }
  }

  DofMaps maps;
  maps.bulk1 = finalize(SpaceId::Bulk1, in1, mesh, true);
  maps.bulk2 = finalize(SpaceId::Bulk2, in2, mesh, true);
  maps.surface = finalize(SpaceId::Surface, on_surf, mesh, false);
  return maps;
}

P1Basis eval_p1(const std::array<Vec3, 4>& pts, const Vec3& x) {
  const Vec3 e1 = pts[1] - pts[0], e2 = pts[2] - pts[0], e3 = pts[3] - pts[0];
  const double det = dot(e1, cross(e2, e3));
  if (det == 0.0 || !std::isfinite(det)) throw std::invalid_argument("eval_p1: degenerate tet");

  P1Basis basis;
  basis.grad[1] = cross(e2, e3) / det;
  basis.grad[2] = cross(e3, e1) / det;
  basis.grad[3] = cross(e1, e2) / det;
  basis.grad[0] = -(basis.grad[1] + basis.grad[2] + basis.grad[3]);

  const Vec3 r = x - pts[0];
  basis.value[1] = dot(basis.grad[1], r);
  basis.value[2] = dot(basis.grad[2], r);
  basis.value[3] = dot(basis.grad[3], r);
  basis.value[0] = 1.0 - basis.value[1] - basis.value[2] - basis.value[3];
  return basis;
}

}  // namespace tracefem
