#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "tracefem/mesh.hpp"

namespace tracefem {

/// Signed distance to the unit sphere, |x| - 1. Negative inside.
double phi_sphere(const Vec3& p);

/// Piecewise-linear level set given by nodal values on a mesh.
struct LevelSetField {
  std::shared_ptr<const Mesh> mesh;
  std::vector<double> nodal_values;  // one per vertex, never exactly zero
};

/// Samples phi at the vertices. Nodal values with |v| < 1e-12 * mesh_size are
/// replaced by +1e-12 * mesh_size so that no vertex sits exactly on the zero
/// set; that keeps every cut pattern unambiguous downstream. Throws if phi
/// returns a non-finite value.
LevelSetField interpolate_p1(const std::function<double(const Vec3&)>& phi,
                             std::shared_ptr<const Mesh> mesh);

enum class TetClass : std::uint8_t {
  Inside1,  // all nodal values negative
  Inside2,  // all positive
  Cut       // mixed signs
};

TetClass classify(const LevelSetField& field, int tet);

/// Counts of (Inside1, Inside2, Cut) tets.
std::array<int, 3> class_counts(const LevelSetField& field);

}  // namespace tracefem
