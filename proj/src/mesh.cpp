#include "tracefem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tracefem {

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(b - a, cross(c - a, d - a)) / 6.0;
}

namespace {

// The six permutations of (x, y, z); even ones keep the Kuhn tet positively
// oriented, odd ones need a swap.
constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
constexpr bool kPermEven[6] = {true, false, false, true, true, false};

}  // namespace

Mesh build_cube_mesh(int n, const Box& bounds) {
  if (n < 1) throw std::invalid_argument("build_cube_mesh: need at least one subdivision");
  if (!(bounds.hi.x > bounds.lo.x && bounds.hi.y > bounds.lo.y && bounds.hi.z > bounds.lo.z))
    throw std::invalid_argument("build_cube_mesh: empty box");

  Mesh mesh;
  mesh.bounds = bounds;
  mesh.subdivisions = n;

  const int m = n + 1;
  const double sx = (bounds.hi.x - bounds.lo.x) / n;
  const double sy = (bounds.hi.y - bounds.lo.y) / n;
  const double sz = (bounds.hi.z - bounds.lo.z) / n;

  mesh.vertices.reserve(static_cast<size_t>(m) * m * m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        mesh.vertices.push_back(
            {bounds.lo.x + i * sx, bounds.lo.y + j * sy, bounds.lo.z + k * sz});

  auto vid = [m](int i, int j, int k) { return (k * m + j) * m + i; };

  mesh.tets.reserve(static_cast<size_t>(6) * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < 6; ++p) {
          int c[3] = {i, j, k};
          std::array<int, 4> tet;
          tet[0] = vid(c[0], c[1], c[2]);
          for (int step = 0; step < 3; ++step) {
            c[kPerms[p][step]] += 1;
            tet[step + 1] = vid(c[0], c[1], c[2]);
          }
          if (!kPermEven[p]) std::swap(tet[1], tet[2]);
          mesh.tets.push_back(tet);
        }

  mesh.on_boundary.assign(mesh.vertices.size(), 0);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        if (i == 0 || i == n || j == 0 || j == n || k == 0 || k == n)
          mesh.on_boundary[vid(i, j, k)] = 1;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (mesh.on_boundary[v]) mesh.boundary_vertices.push_back(v);

  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh out = build_cube_mesh(2 * mesh.subdivisions, mesh.bounds);
  out.level = mesh.level + 1;
  return out;
}

double mesh_size(const Mesh& mesh) {
  double h2 = 0.0;
  for (const auto& t : mesh.tets)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        h2 = std::max(h2, norm2(mesh.vertices[t[a]] - mesh.vertices[t[b]]));
  return std::sqrt(h2);
}

}  // namespace tracefem
