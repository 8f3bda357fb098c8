#pragma once

#include <vector>

#include "wl1/linalg.hpp"
#include "wl1/solver.hpp"

namespace wl1 {

/// Largest n the exhaustive oracle accepts (3^n sign patterns).
inline constexpr Index kOracleMaxDimension = 14;

/// One sign pattern that passes the stationarity certificate.
struct CertifiedPattern {
  IndexSet support;
  std::vector<int> signs;   // aligned with support, entries +1 / -1
  Vector x;                 // full-length minimizer candidate
  double objective = 0.0;
  double dual_margin = 0.0; // min off-support slack, +infinity for full support
};

struct OracleResult {
  Vector x_opt;
  IndexSet support;
  std::vector<int> signs;
  double objective = 0.0;
  double dual_margin = 0.0;
  bool unique = false;      // strict margin and full-rank support block
  std::size_t certified_count = 0;
};

/// Enumerates every (support, sign) pattern of A's columns, solves the
/// stationarity system on each support, and keeps the patterns whose solution
/// is sign-consistent and dual feasible (tolerance 1e-11 scaled). Deterministic
/// order: cardinality ascending, supports lexicographic, signs by bit mask
/// (+1 first). Throws ValidationError when n exceeds kOracleMaxDimension.
std::vector<CertifiedPattern> enumerate_certificates(const Matrix& A, const Vector& y,
                                                     const WeightVector& w, double h);

/// Global minimizer of the weighted program by exhaustive certification.
/// Throws NumericalError if no pattern certifies (cannot happen for h > 0
/// unless numerics break down).
OracleResult brute_force_minimum(const Matrix& A, const Vector& y,
                                 const WeightVector& w, double h);

}  // namespace wl1
