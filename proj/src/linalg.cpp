#include "tracefem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <stdexcept>

#include "tracefem/parallel.hpp"

namespace tracefem {

SparseMatrix csr_from_triplets(int rows, int cols, std::vector<Triplet>& triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::out_of_range("csr_from_triplets: index out of range");

  // Stable sort keeps the insertion order among duplicates, so the summation
  // order (and the floating point result) is reproducible.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix A;
  A.rows = rows;
  A.cols = cols;
  A.row_ptr.assign(rows + 1, 0);
  A.col_idx.reserve(triplets.size());
  A.values.reserve(triplets.size());

  size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      const int c = triplets[i].col;
      double v = triplets[i].value;
      for (++i; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i)
        v += triplets[i].value;
      A.col_idx.push_back(c);
      A.values.push_back(v);
    }
    A.row_ptr[r + 1] = static_cast<int>(A.col_idx.size());
  }
  return A;
}

void SparseMatrix::multiply(const double* x, double* y, int threads) const {
  auto ranges = split_ranges(rows, threads);
  run_parallel(static_cast<int>(ranges.size()), [&](int t) {
    for (int r = ranges[t].first; r < ranges[t].second; ++r) {
      double s = 0.0;
      for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += values[k] * x[col_idx[k]];
      y[r] = s;
    }
  });
}

double SparseMatrix::operator()(int r, int c) const {
  const auto begin = col_idx.begin() + row_ptr[r], end = col_idx.begin() + row_ptr[r + 1];
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return 0.0;
  return values[it - col_idx.begin()];
}

SgsSweep::SgsSweep(const SparseMatrix& A) : A_(&A) {
  if (A.rows != A.cols) throw std::invalid_argument("SgsSweep: matrix must be square");
  diag_.assign(A.rows, 1.0);
  for (int r = 0; r < A.rows; ++r) {
    const double d = A(r, r);
    if (d == 0.0)
      ++n_zero_diag_;  // keep the substitute 1.0 so the sweep stays defined
    else
      diag_[r] = d;
  }
}

void SgsSweep::apply(const double* r, double* z) const {
  const SparseMatrix& A = *A_;
  const int n = A.rows;
  // (D+L) y = r, then (D+U) z = D y; one symmetric Gauss-Seidel sweep from a
  // zero initial guess.
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    double s = r[i];
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1] && A.col_idx[k] < i; ++k)
      s -= A.values[k] * y[A.col_idx[k]];
    y[i] = s / diag_[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = diag_[i] * y[i];
    for (int k = A.row_ptr[i + 1] - 1; k >= A.row_ptr[i] && A.col_idx[k] > i; --k)
      s -= A.values[k] * z[A.col_idx[k]];
    z[i] = s / diag_[i];
  }
}

BlockSgsPreconditioner::BlockSgsPreconditioner(const SparseMatrix& A_bb, const SparseMatrix& A_ss)
    : bulk_(A_bb), surf_(A_ss), n_bulk_(A_bb.rows) {}

void BlockSgsPreconditioner::apply(const double* r, double* z) const {
  bulk_.apply(r, z);
  surf_.apply(r + n_bulk_, z + n_bulk_);
}

ApplyFn BlockSgsPreconditioner::as_fn() const {
  return [this](const double* r, double* z) { apply(r, z); };
}

namespace {

double dot_n(int n, const double* a, const double* b) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm_n(int n, const double* a) { return std::sqrt(dot_n(n, a, a)); }

}  // namespace

SolveReport gcr_solve(int n, const ApplyFn& A, const ApplyFn& M_inv, const double* b, double* x,
                      const GcrOptions& opts) {
  SolveReport report;
  std::fill(x, x + n, 0.0);

  const double beta = norm_n(n, b);
  if (beta == 0.0) {
    report.converged = true;
    report.residual_history.push_back(0.0);
    return report;
  }

  std::vector<double> r(b, b + n), z(n), q(n);
  double res = beta;
  report.residual_history.push_back(1.0);

  // Stored search directions z_j with their normalized images q_j = A z_j;
  // the window is dropped oldest-first once the truncation length is hit.
  std::deque<std::vector<double>> zs, qs;

  for (int k = 0; k < opts.max_iter; ++k) {
    if (res <= opts.tol * beta) break;

    if (M_inv)
      M_inv(r.data(), z.data());
    else
      std::copy(r.begin(), r.end(), z.begin());
    A(z.data(), q.data());

    const double q_norm_pre = norm_n(n, q.data());
    // Modified Gram-Schmidt, repeated once if the pass cancels more than half
    // of the norm; keeps the stored basis orthogonal enough for a reliable
    // convergence tail at tolerances near machine precision.
    double q_norm = q_norm_pre;
    for (int pass = 0; pass < 2 && !qs.empty(); ++pass) {
      for (size_t j = 0; j < qs.size(); ++j) {
        const double alpha = dot_n(n, q.data(), qs[j].data());
        for (int i = 0; i < n; ++i) {
          q[i] -= alpha * qs[j][i];
          z[i] -= alpha * zs[j][i];
        }
      }
      const double after = norm_n(n, q.data());
      const bool heavy_cancellation = after < 0.5 * q_norm;
      q_norm = after;
      if (!heavy_cancellation) break;
    }
    if (!(q_norm > 1e-14 * q_norm_pre) || q_norm == 0.0) {
      report.breakdown = true;  // no usable new direction
      break;
    }
    for (int i = 0; i < n; ++i) {
      q[i] /= q_norm;
      z[i] /= q_norm;
    }

    const double gamma = dot_n(n, q.data(), r.data());
    for (int i = 0; i < n; ++i) {
      x[i] += gamma * z[i];
      r[i] -= gamma * q[i];
    }
    res = norm_n(n, r.data());
    ++report.iterations;
    report.residual_history.push_back(res / beta);

    zs.push_back(z);
    qs.push_back(q);
    if (static_cast<int>(zs.size()) > opts.truncation) {
      zs.pop_front();
      qs.pop_front();
    }
  }

  report.rel_residual = res / beta;
  report.converged = report.rel_residual <= opts.tol;
  return report;
}

}  // namespace tracefem
