#include "tracefem/levelset.hpp"

#include <cmath>
#include <stdexcept>

namespace tracefem {

double phi_sphere(const Vec3& p) { return norm(p) - 1.0; }

LevelSetField interpolate_p1(const std::function<double(const Vec3&)>& phi,
                             std::shared_ptr<const Mesh> mesh) {
  if (!mesh) throw std::invalid_argument("interpolate_p1: null mesh");
  LevelSetField field;
  field.mesh = mesh;
  field.nodal_values.resize(mesh->n_vertices());

  // Any nodal value this close to zero is nudged to the positive side so
  // every tet has a clean sign pattern; cut positions move by O(1e-12 h).
  const double eps = 1e-12 * mesh_size(*mesh);
  for (int v = 0; v < mesh->n_vertices(); ++v) {
    double val = phi(mesh->vertices[v]);
    if (!std::isfinite(val))
      throw std::runtime_error("interpolate_p1: non-finite level set value at a vertex");
    if (std::abs(val) < eps) val = eps;
    field.nodal_values[v] = val;
  }
  return field;
}

TetClass classify(const LevelSetField& field, int tet) {
  const auto& t = field.mesh->tets[tet];
  int neg = 0;
  for (int v : t)
    if (field.nodal_values[v] < 0.0) ++neg;
  if (neg == 4) return TetClass::Inside1;
  if (neg == 0) return TetClass::Inside2;
  return TetClass::Cut;
}

std::array<int, 3> class_counts(const LevelSetField& field) {
  std::array<int, 3> counts{0, 0, 0};
  for (int t = 0; t < field.mesh->n_tets(); ++t)
    ++counts[static_cast<int>(classify(field, t))];
  return counts;
}

}  // namespace tracefem
