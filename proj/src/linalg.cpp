#include "wl1/linalg.hpp"

#include <cmath>
#include <string>

namespace wl1 {

namespace {

constexpr double kPivotRatio = 1e-12;

Vector solve_with_factor(const Matrix& L, Vector x) {
  const Index n = L.rows();
  for (Index i = 0; i < n; ++i) {  // L c = b
    for (Index t = 0; t < i; ++t) x[i] -= L(i, t) * x[t];
    x[i] /= L(i, i);
  }
  for (Index i = n - 1; i >= 0; --i) {  // L^T x = c
    for (Index t = i + 1; t < n; ++t) x[i] -= L(t, i) * x[t];
    x[i] /= L(i, i);
  }
  return x;
}

}  // namespace

void validate_index_set(const IndexSet& idx, Index bound, const char* context) {
  Index prev = -1;
  for (Index i : idx) {
    if (i < 0 || i >= bound)
      throw ValidationError(std::string(context) + ": index " + std::to_string(i) +
                            " outside [0, " + std::to_string(bound) + ")");
    if (i <= prev)
      throw ValidationError(std::string(context) + ": indices must be strictly increasing");
    prev = i;
  }
}

Matrix column_submatrix(const Matrix& M, const IndexSet& idx) {
  validate_index_set(idx, M.cols(), "column_submatrix");
  Matrix out(M.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Index>(j)) = M.col(idx[j]);
  return out;
}

bool cholesky_factor(const Matrix& G, Matrix& L) {
  if (G.rows() != G.cols()) throw ValidationError("cholesky_factor: matrix is not square");
  const Index n = G.rows();
  L = Matrix::Zero(n, n);
  double max_diag = 0.0;
  for (Index i = 0; i < n; ++i) max_diag = std::max(max_diag, G(i, i));
  const double floor = kPivotRatio * max_diag;
  for (Index j = 0; j < n; ++j) {
    double d = G(j, j);
    for (Index t = 0; t < j; ++t) d -= L(j, t) * L(j, t);
    if (!(d > floor)) return false;  // also rejects NaN
    d = std::sqrt(d);
    L(j, j) = d;
    for (Index i = j + 1; i < n; ++i) {
      double v = G(i, j);
      for (Index t = 0; t < j; ++t) v -= L(i, t) * L(j, t);
      L(i, j) = v / d;
    }
  }
  return true;
}

Vector solve_spd(const Matrix& G, const Vector& b) {
  if (G.rows() != b.size()) throw ValidationError("solve_spd: dimension mismatch");
  Matrix L;
  if (!cholesky_factor(G, L))
    throw NumericalError("solve_spd: matrix is singular or not positive definite");
  return solve_with_factor(L, b);
}

bool full_column_rank(const Matrix& A) {
  if (A.cols() == 0) return true;
  Matrix L;
  const Matrix gram = A.transpose() * A;
  return cholesky_factor(gram, L);
}

Vector pseudoinverse_apply(const Matrix& A, const Vector& v) {
  if (A.rows() != v.size()) throw ValidationError("pseudoinverse_apply: dimension mismatch");
  if (A.cols() == 0) return Vector(0);
  const Matrix gram = A.transpose() * A;
  Matrix L;
  if (!cholesky_factor(gram, L))
    throw NumericalError("pseudoinverse_apply: matrix is column rank deficient");
  return solve_with_factor(L, A.transpose() * v);
}

Vector residual_projection(const Matrix& A, const Vector& v) {
  if (A.rows() != v.size()) throw ValidationError("residual_projection: dimension mismatch");
  if (A.cols() == 0) return v;
  return v - A * pseudoinverse_apply(A, v);
}

}  // namespace wl1
