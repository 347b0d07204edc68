#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tracefem/levelset.hpp"

namespace tracefem {

/// Quadrature rule on the reference simplex (triangle or tetrahedron).
/// Points are stored in barycentric coordinates; weights sum to the reference
/// measure (1/2 for dim 2, 1/6 for dim 3) and are all positive.
struct QuadratureRule {
  int dim = 3;
  int degree = 1;  // polynomials up to this degree are integrated exactly
  std::vector<std::array<double, 4>> bary;  // last entries unused for dim 2
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Positive-weight rule exact to (at least) the requested degree.
/// dim 2 supports degrees 1..5, dim 3 degrees 1..5. Throws otherwise.
const QuadratureRule& quad_simplex(int dim, int degree);

inline Vec3 bary_to_point(const std::array<double, 4>& b, const std::array<Vec3, 4>& pts) {
  return pts[0] * b[0] + pts[1] * b[1] + pts[2] * b[2] + pts[3] * b[3];
}

inline Vec3 bary_to_point(const std::array<double, 4>& b, const std::array<Vec3, 3>& pts) {
  return pts[0] * b[0] + pts[1] * b[1] + pts[2] * b[2];
}

double triangle_area(const std::array<Vec3, 3>& pts);

/// One tetrahedral piece of a cut parent tet, tagged with the subdomain it
/// covers (1 where the level set is negative, 2 where positive).
struct SubTet {
  std::array<Vec3, 4> pts;  // positively oriented
  int tag = 0;
};

/// One triangle of the piecewise-planar interface, oriented so that the stored
/// unit normal points from subdomain 1 into subdomain 2.
struct InterfaceTri {
  std::array<Vec3, 3> pts;
  Vec3 normal;
};

/// Decomposition of a single tet against nodal level set values.
struct CutDecomposition {
  std::vector<SubTet> sub_tets;       // 1 (uncut) up to 6 pieces
  std::vector<InterfaceTri> triangles;  // 0, 1 or 2
  int n_degenerate = 0;  // sub-tets with volume below 1e-14 * parent volume
};

/// Marching-tetrahedra style split of one tet. `keys` are globally unique
/// vertex ids; they fix the diagonal choices (always toward the smallest key)
/// and the edge cut formula orientation, making the output independent of
/// local vertex order and consistent across face-sharing tets. Throws if any
/// nodal value is exactly zero.
CutDecomposition decompose(const std::array<Vec3, 4>& pts, const std::array<double, 4>& phi,
                           const std::array<long long, 4>& keys);

/// Cut decomposition of every tet of a level set field, with parent links.
struct CutGeometry {
  std::vector<TetClass> classes;        // per parent tet
  std::vector<SubTet> sub_tets;         // grouped by parent, parent order
  std::vector<int> sub_tet_parent;
  std::vector<InterfaceTri> triangles;  // grouped by parent, parent order
  std::vector<int> tri_parent;
  long long n_degenerate = 0;

  int n_sub_tets() const { return static_cast<int>(sub_tets.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
};

CutGeometry build_cut_geometry(const LevelSetField& field);

/// Total area of the interface triangulation.
double interface_area(const CutGeometry& geom);
double interface_area(const LevelSetField& field);

/// Volume covered by sub-tets with the given tag (1 or 2).
double subdomain_volume(const CutGeometry& geom, int tag);
double subdomain_volume(const LevelSetField& field, int tag);

}  // namespace tracefem
