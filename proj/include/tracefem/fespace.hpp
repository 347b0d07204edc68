#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tracefem/cutgeom.hpp"

namespace tracefem {

enum class SpaceId : std::uint8_t { Bulk1, Bulk2, Surface };

/// Restriction of the background P1 space to an active vertex set.
/// Local dofs are numbered by ascending vertex id.
struct DofMap {
  SpaceId space = SpaceId::Bulk1;
  std::vector<int> active;           // ascending vertex ids carrying a dof
  std::vector<int> vertex_to_local;  // size n_vertices, -1 when inactive
  std::vector<int> dirichlet;        // ascending local dof ids (empty for Surface)
  std::vector<std::uint8_t> is_dirichlet;  // per local dof

  int size() const { return static_cast<int>(active.size()); }
};

struct DofMaps {
  DofMap bulk1;    // vertices of tets classified Inside1 or Cut
  DofMap bulk2;    // vertices of tets classified Inside2 or Cut
  DofMap surface;  // vertices of Cut tets; subset of both bulk sets
};

/// Active sets from the tet classification; Dirichlet dofs are the active
/// vertices on the box boundary (bulk spaces only, the surface space never
/// reaches the boundary for an immersed interface).
DofMaps build_dofmaps(const LevelSetField& field);

/// Values and gradients of the four P1 hat functions of a tet at a point.
struct P1Basis {
  std::array<double, 4> value;
  std::array<Vec3, 4> grad;  // constant over the tet
};

/// Evaluates the hat functions of the (non-degenerate) tet spanned by pts.
/// Values are barycentric coordinates of x; gradients come from the affine
/// map inverse. Throws on a degenerate tet.
P1Basis eval_p1(const std::array<Vec3, 4>& pts, const Vec3& x);

}  // namespace tracefem
