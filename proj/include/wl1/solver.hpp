#pragma once

#include <vector>

#include "wl1/ensemble.hpp"
#include "wl1/linalg.hpp"

namespace wl1 {

/// Strictly positive, finite per-coordinate weights.
class WeightVector {
 public:
  explicit WeightVector(Vector values);

  static WeightVector uniform(Index n, double value);
  /// Weight `on` at the given indices, `off` elsewhere.
  static WeightVector support_weight(Index n, const IndexSet& support, double on,
                                     double off = 1.0);

  Index size() const { return values_.size(); }
  const Vector& values() const { return values_; }
  double operator[](Index i) const { return values_[i]; }

 private:
  Vector values_;
};

enum class StepRule { kBacktracking, kFixed };

struct SolverConfig {
  double h = 0.0;                  // penalty level, must be > 0
  int max_iters = 50000;
  double tol_kkt = 1e-9;           // stationarity residual in the sup norm
  double tol_obj = 0.0;            // optional stall guard on the objective, 0 = off
  StepRule step_rule = StepRule::kBacktracking;

  void validate() const;
};

struct SolveResult {
  Vector x_hat;
  int iterations = 0;
  std::vector<double> objective_trace;  // objective at x0 and after each step
  double kkt_residual = 0.0;
  bool converged = false;
};

/// (1/2m) ||Ax - y||^2 + h ||Wx||_1.
double objective(const Matrix& A, const Vector& y, const Vector& x,
                 const WeightVector& w, double h);

/// Scalar soft threshold: sign(v) max(|v| - tau, 0), exact zero inside the dead zone.
double soft_threshold(double v, double tau);

/// Sup-norm violation of the stationarity condition at x:
/// g = (1/m) A^T (Ax - y); on supp(x) |g_i + h w_i sign(x_i)|, off it max(|g_i| - h w_i, 0).
double kkt_residual(const Matrix& A, const Vector& y, const Vector& x,
                    const WeightVector& w, double h);

/// FISTA with backtracking line search and function-value restart.
/// The restart re-takes the step without momentum, so the recorded objective
/// trace is non-increasing. Zeros are exact (soft-threshold dead zone).
SolveResult solve_weighted_l1(const Matrix& A, const Vector& y,
                              const WeightVector& w, const SolverConfig& config);
SolveResult solve_weighted_l1(const ProblemInstance& inst, const WeightVector& w,
                              const SolverConfig& config);

struct DualFeasibilityReport {
  bool strict = false;        // every off-support correlation strictly inside
  double margin = 0.0;        // min over off-support of h w_i - |A_i^T r| / m
  bool full_rank = false;     // support block of A has full column rank
  IndexSet support;
};

/// Checks the uniqueness certificate at x: strict dual feasibility off supp(x)
/// plus full column rank of the support block. margin is +infinity when the
/// support is all of [n].
DualFeasibilityReport strict_dual_feasibility(const Matrix& A, const Vector& y,
                                              const Vector& x, const WeightVector& w,
                                              double h);

}  // namespace wl1
