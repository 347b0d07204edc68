#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tracefem/vec3.hpp"

namespace tracefem {

/// Axis-aligned box given by its two extreme corners.
struct Box {
  Vec3 lo{-1.5, -1.5, -1.5};
  Vec3 hi{1.5, 1.5, 1.5};

  double volume() const { return (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z); }
};

/// Conforming tetrahedral triangulation of a box.
///
/// The box is sliced into n^3 equal cubes and each cube is split into the six
/// tetrahedra around its main diagonal (Kuhn split), so rebuilding with 2n
/// subdivisions is identical to uniformly refining the n-subdivision mesh.
/// Vertices are numbered lexicographically over the grid (x fastest), tets
/// cube by cube in a fixed permutation order; the whole construction is
/// deterministic.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;  // positively oriented
  Box bounds;
  int subdivisions = 0;  // n
  int level = 0;         // refinement level bookkeeping, n = n0 * 2^level

  std::vector<int> boundary_vertices;   // ascending vertex ids on the box boundary
  std::vector<std::uint8_t> on_boundary;  // per-vertex flag, same content as above

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_tets() const { return static_cast<int>(tets.size()); }
};

/// Signed volume of the tetrahedron (a,b,c,d); positive for right-handed order.
double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Builds the Kuhn-split mesh with n subdivisions per axis. Throws on n < 1 or
/// an empty box.
Mesh build_cube_mesh(int n, const Box& bounds = {});

/// Rebuilds with doubled subdivisions; equivalent to one uniform refinement.
Mesh refine_uniform(const Mesh& mesh);

/// Largest tet diameter (max vertex pair distance over all tets).
double mesh_size(const Mesh& mesh);

}  // namespace tracefem
