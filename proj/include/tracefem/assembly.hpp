#pragma once

#include "tracefem/fespace.hpp"
#include "tracefem/linalg.hpp"
#include "tracefem/model.hpp"

namespace tracefem {

/// Assembled coupled system in transformed variables, stored as four CSR
/// blocks. The bulk index space is the concatenation [bulk1 dofs; bulk2 dofs]
/// and the full unknown layout is [bulk; surface].
struct SystemBlocks {
  SparseMatrix A_bb;  // bulk-bulk: diffusion, skew convection, interface mass
  SparseMatrix A_bs;  // bulk rows, surface columns: -q_i interface mass
  SparseMatrix A_sb;  // surface rows, bulk columns: -K interface mass
  SparseMatrix A_ss;  // surface: diffusion, skew convection, K(q1+q2) mass
  std::vector<double> rhs_b;
  std::vector<double> rhs_s;
  DofMaps dofs;
  int n_bulk1 = 0;  // offset of the bulk2 segment inside the bulk block

  int n_bulk() const { return A_bb.rows; }
  int n_surface() const { return A_ss.rows; }
  int size() const { return n_bulk() + n_surface(); }

  /// y = A x on the full [bulk; surface] layout.
  void multiply(const double* x, double* y, int threads = 1) const;
};

/// Integrates the bilinear form and load over the cut geometry: bulk terms
/// over tagged sub-tets, surface and coupling terms over the interface
/// triangles, with degree-4 rules for matrix entries and degree-5 rules for
/// the right-hand side. Convection enters in skew-symmetrized form. Equal
/// work partitions of the tet range make the result bitwise independent of
/// `threads`. Throws when the surface space is empty (nothing to couple) or
/// when a non-finite entry is produced.
SystemBlocks assemble(const LevelSetField& field, const CutGeometry& geom, const DofMaps& dofs,
                      const TransformedParams& tp, const Sources& src, int threads = 1);

/// Eliminates bulk Dirichlet dofs symmetrically: each Dirichlet row becomes
/// an identity row with the prescribed (transformed) value on the right-hand
/// side, and known values are moved out of the remaining rows of A_bb and
/// A_sb. `value(i, p)` returns the transformed boundary value for bulk space
/// i at vertex position p.
void apply_dirichlet(SystemBlocks& blocks, const Mesh& mesh,
                     const std::function<double(int, const Vec3&)>& value);

}  // namespace tracefem
