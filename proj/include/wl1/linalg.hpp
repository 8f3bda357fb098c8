#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wl1/errors.hpp"

namespace wl1 {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Sorted, duplicate-free column/coordinate indices.
using IndexSet = std::vector<Index>;

/// Throws ValidationError unless idx is strictly increasing and within [0, bound).
void validate_index_set(const IndexSet& idx, Index bound, const char* context);

/// Columns of M selected by idx, in order.
Matrix column_submatrix(const Matrix& M, const IndexSet& idx);

/// Lower-triangular Cholesky factor of a symmetric matrix G.
/// Returns false (leaving L unspecified) when a pivot is non-positive or
/// falls at or below 1e-12 times the largest diagonal entry of G, which is
/// the library-wide rank-deficiency rule.
bool cholesky_factor(const Matrix& G, Matrix& L);

/// Solves G x = b for symmetric positive definite G via cholesky_factor.
/// Throws NumericalError when G is singular or indefinite under the pivot rule.
Vector solve_spd(const Matrix& G, const Vector& b);

/// True when A has full column rank, judged by the Cholesky pivot rule on A^T A.
/// A matrix with zero columns has full column rank vacuously.
bool full_column_rank(const Matrix& A);

/// A^+ v = (A^T A)^{-1} A^T v for a full-column-rank A (least-squares solve).
/// Throws NumericalError on rank deficiency. Zero-column A yields an empty vector.
Vector pseudoinverse_apply(const Matrix& A, const Vector& v);

/// (I - A A^+) v, the residual of v after orthogonal projection onto range(A).
Vector residual_projection(const Matrix& A, const Vector& v);

}  // namespace wl1
