#include "wl1/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wl1 {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

/// Advances idx to the next size-r subset of [0, n) in lexicographic order.
bool next_combination(std::vector<Index>& idx, Index n) {
  const auto r = static_cast<Index>(idx.size());
  for (Index j = r - 1; j >= 0; --j) {
    if (idx[static_cast<std::size_t>(j)] < n - r + j) {
      ++idx[static_cast<std::size_t>(j)];
      for (Index t = j + 1; t < r; ++t)
        idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
      return true;
    }
  }
  return false;
}

constexpr double kSignTol = 1e-12;

}  // namespace

std::vector<CertifiedPattern> enumerate_certificates(const Matrix& A, const Vector& y,
                                                     const WeightVector& wv, double h) {
  const Index m = A.rows();
  const Index n = A.cols();
  require(n >= 1 && m >= 1, "oracle: A must be non-empty");
  require(n <= kOracleMaxDimension,
          "oracle: refusing n > " + std::to_string(kOracleMaxDimension) +
              " (exhaustive enumeration)");
  require(y.size() == m, "oracle: y length differs from A rows");
  require(wv.size() == n, "oracle: weight length differs from A columns");
  require(std::isfinite(h) && h > 0.0, "oracle: h must be positive");

  const Vector& w = wv.values();
  const double md = static_cast<double>(m);
  const Matrix gram = A.transpose() * A;
  const Vector corr_y = A.transpose() * y;
  const double y_sq = y.squaredNorm();
  const double pass_tol = 1e-11 * std::max(1.0, h * w.maxCoeff());

  std::vector<CertifiedPattern> found;

  // empty support: x = 0 certifies when all correlations stay inside the tube
  {
    double margin = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i)
      margin = std::min(margin, h * w[i] - std::abs(corr_y[i]) / md);
    if (margin >= -pass_tol) {
      CertifiedPattern p;
      p.x = Vector::Zero(n);
      p.objective = 0.5 * y_sq / md;
      p.dual_margin = margin;
      found.push_back(std::move(p));
    }
  }

  std::vector<Index> support;
  Matrix sub_gram, L;
  Vector rhs, solution;

  for (Index r = 1; r <= n; ++r) {
    support.resize(static_cast<std::size_t>(r));
    for (Index j = 0; j < r; ++j) support[static_cast<std::size_t>(j)] = j;
    do {
      sub_gram.resize(r, r);
      for (Index a = 0; a < r; ++a)
        for (Index b = 0; b < r; ++b)
          sub_gram(a, b) = gram(support[static_cast<std::size_t>(a)],
                                support[static_cast<std::size_t>(b)]);
      if (!cholesky_factor(sub_gram, L)) continue;  // rank-deficient support block

      rhs.resize(r);
      for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
        for (Index j = 0; j < r; ++j) {
          const Index col = support[static_cast<std::size_t>(j)];
          const double s = (mask >> j) & 1u ? -1.0 : 1.0;
          rhs[j] = corr_y[col] - md * h * w[col] * s;
        }
        solution = solve_spd(sub_gram, rhs);

        bool signs_ok = true;
        for (Index j = 0; j < r && signs_ok; ++j) {
          const double s = (mask >> j) & 1u ? -1.0 : 1.0;
          signs_ok = s * solution[j] > kSignTol;
        }
        if (!signs_ok) continue;

        double margin = std::numeric_limits<double>::infinity();
        std::size_t in_support = 0;
        for (Index i = 0; i < n; ++i) {
          if (in_support < support.size() && support[in_support] == i) {
            ++in_support;
            continue;
          }
          double dot = corr_y[i];
          for (Index j = 0; j < r; ++j)
            dot -= gram(i, support[static_cast<std::size_t>(j)]) * solution[j];
          margin = std::min(margin, h * w[i] - std::abs(dot) / md);
        }
        if (margin < -pass_tol) continue;

        CertifiedPattern p;
        p.support = support;
        p.signs.resize(static_cast<std::size_t>(r));
        p.x = Vector::Zero(n);
        for (Index j = 0; j < r; ++j) {
          p.signs[static_cast<std::size_t>(j)] = (mask >> j) & 1u ? -1 : 1;
          p.x[support[static_cast<std::size_t>(j)]] = solution[j];
        }
        p.dual_margin = margin;
        p.objective = (y - A * p.x).squaredNorm() / (2.0 * md);
        for (Index j = 0; j < r; ++j) {
          const Index col = support[static_cast<std::size_t>(j)];
          p.objective += h * w[col] * std::abs(solution[j]);
        }
        found.push_back(std::move(p));
      }
    } while (next_combination(support, n));
  }
  return found;
}

OracleResult brute_force_minimum(const Matrix& A, const Vector& y, const WeightVector& w,
                                 double h) {
  const auto certified = enumerate_certificates(A, y, w, h);
  if (certified.empty())
    throw NumericalError("oracle: no sign pattern certified, numerical breakdown");

  std::size_t best = 0;
  for (std::size_t i = 1; i < certified.size(); ++i)
    if (certified[i].objective < certified[best].objective) best = i;

  const CertifiedPattern& p = certified[best];
  OracleResult result;
  result.x_opt = p.x;
  result.support = p.support;
  result.signs = p.signs;
  result.objective = p.objective;
  result.dual_margin = p.dual_margin;
  result.certified_count = certified.size();
  result.unique = p.dual_margin > 0.0 &&
                  full_column_rank(column_submatrix(A, p.support));
  return result;
}

}  // namespace wl1
