#include "tracefem/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "tracefem/parallel.hpp"

namespace tracefem {

namespace {

struct Chunk {
  // bb entries arrive from both the sub-tet and the triangle loop; they are
  // kept apart so the merge below can reproduce the single-thread duplicate
  // order (all volume terms first, then all interface terms).
  std::vector<Triplet> bb, bb_iface, bs, sb, ss;
  std::vector<std::pair<int, double>> rhs_b, rhs_s;
};

// Appends (row, value) pairs instead of adding into a vector directly; the
// final accumulation then runs in element insertion order, which makes the
// right-hand side bitwise independent of the chunking.
void add_rhs(std::vector<std::pair<int, double>>& out, int row, double value) {
  out.emplace_back(row, value);
}

}  // namespace

SystemBlocks assemble(const LevelSetField& field, const CutGeometry& geom, const DofMaps& dofs,
                      const TransformedParams& tp, const Sources& src, int threads) {
  if (dofs.surface.size() == 0)
    throw std::invalid_argument("assemble: empty surface space, interface does not cut the mesh");
  if (threads < 1) threads = 1;

  const Mesh& mesh = *field.mesh;
  const int n1 = dofs.bulk1.size();
  const int nb = n1 + dofs.bulk2.size();
  const int ns = dofs.surface.size();

  const QuadratureRule& tet_bilinear = quad_simplex(3, 4);
  const QuadratureRule& tet_load = quad_simplex(3, 5);
  const QuadratureRule& tri_bilinear = quad_simplex(2, 4);
  const QuadratureRule& tri_load = quad_simplex(2, 5);

  std::vector<Chunk> chunks(threads);
  const auto sub_ranges = split_ranges(geom.n_sub_tets(), threads);
  const auto tri_ranges = split_ranges(geom.n_triangles(), threads);

  run_parallel(threads, [&](int t) {
    Chunk& ch = chunks[t];

    for (int s = sub_ranges[t].first; s < sub_ranges[t].second; ++s) {
      const SubTet& st = geom.sub_tets[s];
      const auto& tet = mesh.tets[geom.sub_tet_parent[s]];
      std::array<Vec3, 4> parent_pts;
      for (int i = 0; i < 4; ++i) parent_pts[i] = mesh.vertices[tet[i]];
      const P1Basis parent = eval_p1(parent_pts, parent_pts[0]);

      const DofMap& map = st.tag == 1 ? dofs.bulk1 : dofs.bulk2;
      const int offset = st.tag == 1 ? 0 : n1;
      std::array<int, 4> dof;
      for (int i = 0; i < 4; ++i) {
        dof[i] = map.vertex_to_local[tet[i]] + offset;
        if (dof[i] < offset) throw std::logic_error("assemble: inactive vertex in tagged sub-tet");
      }

      const double vol = tet_volume(st.pts[0], st.pts[1], st.pts[2], st.pts[3]);
      const double nu = st.tag == 1 ? tp.nu1t : tp.nu2t;
      const double inv_k = st.tag == 1 ? tp.inv_k1a : tp.inv_k2a;
      const auto& f = st.tag == 1 ? src.f1 : src.f2;

      std::array<std::array<double, 4>, 4> local{};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) local[a][b] = nu * dot(parent.grad[a], parent.grad[b]) * vol;

      // Skew-symmetrized convection, 0.5 [(w.grad u, eta) - (w.grad eta, u)].
      const double scale = 6.0 * vol;  // reference weights carry the 1/6
      for (int q = 0; q < tet_bilinear.size(); ++q) {
        const Vec3 x = bary_to_point(tet_bilinear.bary[q], st.pts);
        const double w = tet_bilinear.weights[q] * scale;
        const P1Basis at_x = eval_p1(parent_pts, x);
        const Vec3 wvec = velocity_field(x) * inv_k;
        std::array<double, 4> wg;
        for (int a = 0; a < 4; ++a) wg[a] = dot(wvec, parent.grad[a]);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            local[a][b] += 0.5 * w * (at_x.value[a] * wg[b] - at_x.value[b] * wg[a]);
      }

      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) ch.bb.push_back({dof[a], dof[b], local[a][b]});

      for (int q = 0; q < tet_load.size(); ++q) {
        const Vec3 x = bary_to_point(tet_load.bary[q], st.pts);
        const double w = tet_load.weights[q] * scale;
        const P1Basis at_x = eval_p1(parent_pts, x);
        const double fx = f(x);
        for (int a = 0; a < 4; ++a) add_rhs(ch.rhs_b, dof[a], w * fx * at_x.value[a]);
      }
    }

    for (int s = tri_ranges[t].first; s < tri_ranges[t].second; ++s) {
      const InterfaceTri& tri = geom.triangles[s];
      const auto& tet = mesh.tets[geom.tri_parent[s]];
      std::array<Vec3, 4> parent_pts;
      for (int i = 0; i < 4; ++i) parent_pts[i] = mesh.vertices[tet[i]];
      const P1Basis parent = eval_p1(parent_pts, parent_pts[0]);

      std::array<int, 4> d1, d2, dsurf;
      for (int i = 0; i < 4; ++i) {
        d1[i] = dofs.bulk1.vertex_to_local[tet[i]];
        d2[i] = dofs.bulk2.vertex_to_local[tet[i]] + n1;
        dsurf[i] = dofs.surface.vertex_to_local[tet[i]];
        if (d1[i] < 0 || d2[i] < n1 || dsurf[i] < 0)
          throw std::logic_error("assemble: cut tet vertex missing a dof");
      }

      // Tangential projector from the triangle normal.
      const Vec3 n = tri.normal;
      std::array<Vec3, 4> pg;
      for (int a = 0; a < 4; ++a) pg[a] = parent.grad[a] - dot(n, parent.grad[a]) * n;

      const double area = triangle_area(tri.pts);
      const double scale = 2.0 * area;

      std::array<std::array<double, 4>, 4> mass{}, surf{};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) surf[a][b] = tp.nuGt * dot(pg[a], pg[b]) * area;

      for (int q = 0; q < tri_bilinear.size(); ++q) {
        const Vec3 x = bary_to_point(tri_bilinear.bary[q], tri.pts);
        const double w = tri_bilinear.weights[q] * scale;
        const P1Basis at_x = eval_p1(parent_pts, x);
        const Vec3 wvec = velocity_field(x) * tp.inv_sum;
        std::array<double, 4> wg;
        for (int a = 0; a < 4; ++a) wg[a] = dot(wvec, pg[a]);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            mass[a][b] += w * at_x.value[a] * at_x.value[b];
            surf[a][b] += 0.5 * w * (at_x.value[a] * wg[b] - at_x.value[b] * wg[a]);
          }
      }

      // Exchange coupling (u_i - q_i v, eta_i - K zeta) summed over i, written
      // out into the four blocks; the bulk-bulk part is a plain interface mass
      // on both diagonal sub-blocks.
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const double m = mass[a][b];
          ch.ss.push_back({dsurf[a], dsurf[b], surf[a][b] + tp.K * (tp.q1 + tp.q2) * m});
          ch.bb_iface.push_back({d1[a], d1[b], m});
          ch.bb_iface.push_back({d2[a], d2[b], m});
          ch.bs.push_back({d1[a], dsurf[b], -tp.q1 * m});
          ch.bs.push_back({d2[a], dsurf[b], -tp.q2 * m});
          ch.sb.push_back({dsurf[a], d1[b], -tp.K * m});
          ch.sb.push_back({dsurf[a], d2[b], -tp.K * m});
        }

      for (int q = 0; q < tri_load.size(); ++q) {
        const Vec3 x = bary_to_point(tri_load.bary[q], tri.pts);
        const double w = tri_load.weights[q] * scale;
        const P1Basis at_x = eval_p1(parent_pts, x);
        const double gx = src.g(x);
        for (int a = 0; a < 4; ++a) add_rhs(ch.rhs_s, dsurf[a], w * gx * at_x.value[a]);
      }
    }
  });

  std::vector<Triplet> t_bb, t_bs, t_sb, t_ss;
  SystemBlocks out;
  out.rhs_b.assign(nb, 0.0);
  out.rhs_s.assign(ns, 0.0);
  for (const Chunk& ch : chunks) {
    t_bb.insert(t_bb.end(), ch.bb.begin(), ch.bb.end());
    t_bs.insert(t_bs.end(), ch.bs.begin(), ch.bs.end());
    t_sb.insert(t_sb.end(), ch.sb.begin(), ch.sb.end());
    t_ss.insert(t_ss.end(), ch.ss.begin(), ch.ss.end());
    for (const auto& [row, val] : ch.rhs_b) out.rhs_b[row] += val;
    for (const auto& [row, val] : ch.rhs_s) out.rhs_s[row] += val;
  }
  for (const Chunk& ch : chunks) t_bb.insert(t_bb.end(), ch.bb_iface.begin(), ch.bb_iface.end());

  out.A_bb = csr_from_triplets(nb, nb, t_bb);
  out.A_bs = csr_from_triplets(nb, ns, t_bs);
  out.A_sb = csr_from_triplets(ns, nb, t_sb);
  out.A_ss = csr_from_triplets(ns, ns, t_ss);
  out.dofs = dofs;
  out.n_bulk1 = n1;

  for (const SparseMatrix* A : {&out.A_bb, &out.A_bs, &out.A_sb, &out.A_ss})
    for (double v : A->values)
      if (!std::isfinite(v)) throw std::runtime_error("assemble: non-finite matrix entry");
  for (const auto* rhs : {&out.rhs_b, &out.rhs_s})
    for (double v : *rhs)
      if (!std::isfinite(v)) throw std::runtime_error("assemble: non-finite load entry");

  return out;
}

void SystemBlocks::multiply(const double* x, double* y, int threads) const {
  const int nb = n_bulk(), ns = n_surface();
  std::vector<double> tmp(static_cast<size_t>(std::max(nb, ns)));
  A_bb.multiply(x, y, threads);
  A_bs.multiply(x + nb, tmp.data(), threads);
  for (int i = 0; i < nb; ++i) y[i] += tmp[i];
  A_sb.multiply(x, y + nb, threads);
  A_ss.multiply(x + nb, tmp.data(), threads);
  for (int i = 0; i < ns; ++i) y[nb + i] += tmp[i];
}

void apply_dirichlet(SystemBlocks& blocks, const Mesh& mesh,
                     const std::function<double(int, const Vec3&)>& value) {
  const int nb = blocks.n_bulk();
  std::vector<std::uint8_t> is_dir(nb, 0);
  std::vector<double> dir_val(nb, 0.0);

  auto mark = [&](const DofMap& map, int offset, int space) {
    for (int l : map.dirichlet) {
      const int row = offset + l;
      is_dir[row] = 1;
      dir_val[row] = value(space, mesh.vertices[map.active[l]]);
    }
  };
  mark(blocks.dofs.bulk1, 0, 1);
  mark(blocks.dofs.bulk2, blocks.n_bulk1, 2);

  SparseMatrix& A = blocks.A_bb;
  for (int r = 0; r < nb; ++r) {
    if (is_dir[r]) {
      bool has_diag = false;
      for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) {
        const bool diag = A.col_idx[k] == r;
        A.values[k] = diag ? 1.0 : 0.0;
        has_diag = has_diag || diag;
      }
      if (!has_diag) throw std::runtime_error("apply_dirichlet: missing diagonal entry");
      blocks.rhs_b[r] = dir_val[r];
    } else {
      for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) {
        const int c = A.col_idx[k];
        if (is_dir[c]) {
          blocks.rhs_b[r] -= A.values[k] * dir_val[c];
          A.values[k] = 0.0;
        }
      }
    }
  }

  SparseMatrix& B = blocks.A_bs;
  for (int r = 0; r < nb; ++r)
    if (is_dir[r])
      for (int k = B.row_ptr[r]; k < B.row_ptr[r + 1]; ++k) B.values[k] = 0.0;

  SparseMatrix& C = blocks.A_sb;
  for (int r = 0; r < C.rows; ++r)
    for (int k = C.row_ptr[r]; k < C.row_ptr[r + 1]; ++k) {
      const int c = C.col_idx[k];
      if (is_dir[c]) {
        blocks.rhs_s[r] -= C.values[k] * dir_val[c];
        C.values[k] = 0.0;
      }
    }
}

}  // namespace tracefem
