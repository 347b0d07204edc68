#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace tracefem {

/// Coordinate-format entry used during assembly.
struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Compressed sparse row matrix with ordered column indices per row.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;   // size rows + 1
  std::vector<int> col_idx;   // ascending within each row
  std::vector<double> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

  /// y = A x (y overwritten). Optionally splits rows over threads; the value
  /// of each y entry is computed by exactly one thread in a fixed order, so
  /// results are bitwise independent of the thread count.
  void multiply(const double* x, double* y, int threads = 1) const;

  double operator()(int r, int c) const;  // 0.0 when the entry is absent
};

/// Deterministic duplicate-summing conversion: triplets are stably sorted by
/// (row, col) and equal positions accumulated in their original order.
SparseMatrix csr_from_triplets(int rows, int cols, std::vector<Triplet>& triplets);

using ApplyFn = std::function<void(const double* x, double* y)>;

/// Symmetric Gauss-Seidel sweep for one CSR matrix: z = (D+U)^{-1} D (D+L)^{-1} r,
/// i.e. one forward and one backward sweep from a zero initial guess. Zero
/// diagonal entries are replaced by 1 and counted.
class SgsSweep {
 public:
  explicit SgsSweep(const SparseMatrix& A);

  void apply(const double* r, double* z) const;
  int n_zero_diagonals() const { return n_zero_diag_; }

 private:
  const SparseMatrix* A_;
  std::vector<double> diag_;
  int n_zero_diag_ = 0;
};

/// Block-diagonal preconditioner for the coupled system: one SGS sweep on the
/// bulk block and one on the surface block, coupling blocks ignored.
class BlockSgsPreconditioner {
 public:
  BlockSgsPreconditioner(const SparseMatrix& A_bb, const SparseMatrix& A_ss);

  /// z = M^{-1} r with r laid out as [bulk; surface].
  void apply(const double* r, double* z) const;
  int n_zero_diagonals() const { return bulk_.n_zero_diagonals() + surf_.n_zero_diagonals(); }
  ApplyFn as_fn() const;

 private:
  SgsSweep bulk_;
  SgsSweep surf_;
  int n_bulk_;
};

struct SolveReport {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
  bool breakdown = false;  // stalled before reaching the tolerance
  std::vector<double> residual_history;  // |r_k| / |b|, k = 0 .. iterations
};

struct GcrOptions {
  double tol = 1e-10;    // relative residual target |r| <= tol * |b|
  int max_iter = 2000;
  int truncation = 100;  // stored (search, A*search) pair window
};

/// Right-preconditioned truncated generalized conjugate residual method.
/// Minimizes the true residual over the retained search space each step, so
/// the residual history is monotonically non-increasing. b = 0 returns x = 0.
/// A breakdown (no residual progress and no usable new direction) is reported
/// via the flag rather than an exception.
SolveReport gcr_solve(int n, const ApplyFn& A, const ApplyFn& M_inv, const double* b, double* x,
                      const GcrOptions& opts = {});

}  // namespace tracefem
