#include "wl1/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wl1 {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

double weighted_l1(const Vector& x, const Vector& w) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += w[i] * std::abs(x[i]);
  return s;
}

/// out_i = soft_threshold(base_i - step * grad_i, step * h * w_i)
void prox_step(const Vector& base, const Vector& grad, double step, double h,
               const Vector& w, Vector& out) {
  for (Index i = 0; i < base.size(); ++i)
    out[i] = soft_threshold(base[i] - step * grad[i], step * h * w[i]);
}

/// A x, exploiting sparsity of x when it pays off.
void product(const Matrix& A, const Vector& x, Vector& out) {
  const Index n = x.size();
  Index nnz = 0;
  for (Index j = 0; j < n; ++j) nnz += (x[j] != 0.0) ? 1 : 0;
  if (4 * nnz >= n) {
    out.noalias() = A * x;
    return;
  }
  out.setZero();
  for (Index j = 0; j < n; ++j)
    if (x[j] != 0.0) out.noalias() += x[j] * A.col(j);
}

double kkt_from_gradient(const Vector& grad, const Vector& x, const Vector& w, double h) {
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    double v;
    if (x[i] > 0.0)
      v = std::abs(grad[i] + h * w[i]);
    else if (x[i] < 0.0)
      v = std::abs(grad[i] - h * w[i]);
    else
      v = std::max(std::abs(grad[i]) - h * w[i], 0.0);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace

WeightVector::WeightVector(Vector values) : values_(std::move(values)) {
  require(values_.size() >= 1, "weights: empty vector");
  for (Index i = 0; i < values_.size(); ++i)
    require(std::isfinite(values_[i]) && values_[i] > 0.0,
            "weights: entries must be finite and strictly positive");
}

WeightVector WeightVector::uniform(Index n, double value) {
  require(n >= 1, "weights: n must be positive");
  return WeightVector(Vector::Constant(n, value));
}

WeightVector WeightVector::support_weight(Index n, const IndexSet& support, double on,
                                          double off) {
  require(n >= 1, "weights: n must be positive");
  validate_index_set(support, n, "weights");
  Vector v = Vector::Constant(n, off);
  for (Index i : support) v[i] = on;
  return WeightVector(std::move(v));
}

void SolverConfig::validate() const {
  require(std::isfinite(h) && h > 0.0, "solver: h must be positive and finite");
  require(max_iters >= 1, "solver: max_iters must be positive");
  require(std::isfinite(tol_kkt) && tol_kkt > 0.0, "solver: tol_kkt must be positive");
  require(std::isfinite(tol_obj) && tol_obj >= 0.0, "solver: tol_obj must be non-negative");
}

double soft_threshold(double v, double tau) {
  if (v > tau) return v - tau;
  if (v < -tau) return v + tau;
  return 0.0;
}

double objective(const Matrix& A, const Vector& y, const Vector& x,
                 const WeightVector& w, double h) {
  require(A.rows() == y.size(), "objective: A and y row counts differ");
  require(A.cols() == x.size(), "objective: A and x column counts differ");
  require(w.size() == x.size(), "objective: weight length differs from x");
  const double m = static_cast<double>(A.rows());
  return (A * x - y).squaredNorm() / (2.0 * m) + h * weighted_l1(x, w.values());
}

double kkt_residual(const Matrix& A, const Vector& y, const Vector& x,
                    const WeightVector& w, double h) {
  require(A.rows() == y.size(), "kkt_residual: A and y row counts differ");
  require(A.cols() == x.size(), "kkt_residual: A and x column counts differ");
  require(w.size() == x.size(), "kkt_residual: weight length differs from x");
  const Vector grad = A.transpose() * (A * x - y) / static_cast<double>(A.rows());
  return kkt_from_gradient(grad, x, w.values(), h);
}

SolveResult solve_weighted_l1(const Matrix& A, const Vector& y, const WeightVector& wv,
                              const SolverConfig& config) {
  config.validate();
  const Index m = A.rows();
  const Index n = A.cols();
  require(m >= 1 && n >= 1, "solve: A must be non-empty");
  require(y.size() == m, "solve: y length differs from A rows");
  require(wv.size() == n, "solve: weight length differs from A columns");

  const Vector& w = wv.values();
  const double h = config.h;
  const double inv_m = 1.0 / static_cast<double>(m);
  const bool adapt = config.step_rule == StepRule::kBacktracking;

  // 1/L lower bound: L = sigma_max(A)^2 / m <= ||A||_F^2 / m
  const double frob_sq = A.squaredNorm();
  require(std::isfinite(frob_sq), "solve: A has non-finite entries");
  const double step_safe = frob_sq > 0.0 ? static_cast<double>(m) / frob_sq : 1.0;
  const double step_min = step_safe * 1e-10;
  double step = step_safe;

  Vector x = Vector::Zero(n), x_prev = Vector::Zero(n);
  Vector ax = Vector::Zero(m), ax_prev = Vector::Zero(m);
  Vector extr(n), a_extr(m), grad(n), x_new(n), ax_new(m);

  const auto smooth = [&](const Vector& av) { return 0.5 * inv_m * (av - y).squaredNorm(); };
  const auto kkt_at = [&](const Vector& xv, const Vector& axv) {
    grad.noalias() = A.transpose() * (axv - y);
    grad *= inv_m;
    return kkt_from_gradient(grad, xv, w, h);
  };

  double obj = smooth(ax);  // x0 = 0, penalty term vanishes
  std::vector<double> trace{obj};
  trace.reserve(128);

  double kkt = kkt_at(x, ax);
  if (kkt <= config.tol_kkt) return {std::move(x), 0, std::move(trace), kkt, true};

  double momentum = 1.0;
  bool converged = false;
  bool may_grow = true;   // growth requires a clean majorization pass
  bool endgame = false;   // line search retired, certified step only
  int steps = 0;
  int since_check = 0;
  constexpr int kCheckEvery = 8;
  constexpr double kNoiseFloor = 64.0 * std::numeric_limits<double>::epsilon();

  while (steps < config.max_iters) {
    const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double beta = (momentum - 1.0) / momentum_next;
    extr = x + beta * (x - x_prev);
    a_extr = ax + beta * (ax - ax_prev);

    bool restarted = false;
    const Vector* base = &extr;
    const Vector* a_base = &a_extr;

    for (int attempt = 0; attempt < 2; ++attempt) {
      grad.noalias() = A.transpose() * (*a_base - y);
      grad *= inv_m;
      const double f_base = smooth(*a_base);
      if (adapt && !endgame && may_grow) step *= 1.25;

      double f_new;
      for (;;) {
        prox_step(*base, grad, step, h, w, x_new);
        product(A, x_new, ax_new);
        f_new = smooth(ax_new);
        if (!std::isfinite(f_new)) throw NumericalError("solve: objective diverged");
        if (!adapt || endgame) break;
        const double diff_sq = (x_new - *base).squaredNorm();
        if (diff_sq == 0.0) break;
        const double quad = 0.5 * diff_sq / step;
        // once the quadratic term sinks below the rounding noise of the
        // smooth-term values the majorization test reads pure noise; retire
        // the line search and finish on the certified Frobenius step, which
        // contracts no matter what the test would claim
        if (quad <= kNoiseFloor * std::max(std::abs(f_base), std::abs(f_new))) {
          endgame = true;
          if (step == step_safe) break;
          step = step_safe;
          continue;
        }
        const double lin = grad.dot(x_new - *base);
        if (f_new <= f_base + lin + quad) {
          may_grow = true;
          break;
        }
        step *= 0.5;
        may_grow = false;
        if (step < step_min) throw NumericalError("solve: line search step collapsed");
      }

      const double obj_new = f_new + h * weighted_l1(x_new, w);
      if (obj_new <= obj || restarted) {
        obj = std::min(obj, obj_new);
        break;
      }
      // objective went up under momentum: restart as a plain step from x
      restarted = true;
      base = &x;
      a_base = &ax;
    }

    x_prev.swap(x);
    x.swap(x_new);
    ax_prev.swap(ax);
    ax.swap(ax_new);
    momentum = restarted ? 1.0 : momentum_next;
    ++steps;
    trace.push_back(obj);

    if (++since_check >= kCheckEvery || steps == config.max_iters) {
      since_check = 0;
      kkt = kkt_at(x, ax);
      if (kkt <= config.tol_kkt) {
        converged = true;
        break;
      }
      if (config.tol_obj > 0.0 && trace.size() > 16) {
        const double before = trace[trace.size() - 16];
        if (std::abs(before - obj) <= config.tol_obj * std::max(1.0, std::abs(obj))) break;
      }
    }
  }

  if (!converged) kkt = kkt_at(x, ax);
  return {std::move(x), steps, std::move(trace), kkt, converged};
}

SolveResult solve_weighted_l1(const ProblemInstance& inst, const WeightVector& w,
                              const SolverConfig& config) {
  return solve_weighted_l1(inst.A, inst.y, w, config);
}

DualFeasibilityReport strict_dual_feasibility(const Matrix& A, const Vector& y,
                                              const Vector& x, const WeightVector& w,
                                              double h) {
  require(A.rows() == y.size(), "dual_feasibility: A and y row counts differ");
  require(A.cols() == x.size(), "dual_feasibility: A and x column counts differ");
  require(w.size() == x.size(), "dual_feasibility: weight length differs from x");
  require(std::isfinite(h) && h > 0.0, "dual_feasibility: h must be positive");

  DualFeasibilityReport report;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) report.support.push_back(i);

  const Vector corr = A.transpose() * (y - A * x) / static_cast<double>(A.rows());
  double margin = std::numeric_limits<double>::infinity();
  std::size_t s = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (s < report.support.size() && report.support[s] == i) {
      ++s;
      continue;
    }
    margin = std::min(margin, h * w[i] - std::abs(corr[i]));
  }
  report.margin = margin;
  report.strict = margin > 0.0;
  report.full_rank = full_column_rank(column_submatrix(A, report.support));
  return report;
}

}  // namespace wl1
