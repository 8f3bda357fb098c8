#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "wl1/ensemble.hpp"
#include "wl1/solver.hpp"

using namespace wl1;

namespace {

// 4 x 2 design with A^T A = m I (m = 4), so the program is separable and
// the minimizer is soft_threshold((A^T y)_i / m, h w_i) coordinatewise.
Matrix orthogonal_design() {
  Matrix A = Matrix::Zero(4, 2);
  A(0, 0) = 2.0;
  A(1, 1) = 2.0;
  return A;
}

SolverConfig config_with(double h, double tol = 1e-10) {
  SolverConfig cfg;
  cfg.h = h;
  cfg.tol_kkt = tol;
  return cfg;
}

ProblemInstance random_instance(Index n, Index k, Index m, std::uint64_t seed,
                                double sigma_z = 0.0) {
  EnsembleConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.m = m;
  cfg.sigma_z = sigma_z;
  cfg.seed = seed;
  return sample_instance(cfg);
}

}  // namespace

TEST_CASE("weight vector construction and validation") {
  const WeightVector u = WeightVector::uniform(3, 2.0);
  CHECK(u.size() == 3);
  CHECK(u[0] == 2.0);
  CHECK(u[2] == 2.0);

  const WeightVector s = WeightVector::support_weight(4, {1, 3}, 0.5);
  CHECK(s[0] == 1.0);
  CHECK(s[1] == 0.5);
  CHECK(s[2] == 1.0);
  CHECK(s[3] == 0.5);

  Vector bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(WeightVector{bad}, ValidationError);
  bad << 1.0, -2.0;
  CHECK_THROWS_AS(WeightVector{bad}, ValidationError);
  bad << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(WeightVector{bad}, ValidationError);
  CHECK_THROWS_AS(WeightVector::uniform(0, 1.0), ValidationError);
  CHECK_THROWS_AS(WeightVector::support_weight(4, {5}, 0.5), ValidationError);
}

TEST_CASE("objective value on hand computed cases") {
  Matrix A(1, 1);
  A << 1.0;
  Vector y(1), x(1);
  y << 2.0;
  x << 1.0;
  CHECK(objective(A, y, x, WeightVector::uniform(1, 3.0), 0.5) ==
        doctest::Approx(2.0).epsilon(1e-15));

  const Matrix I2 = Matrix::Identity(2, 2);
  Vector y2(2), x2(2);
  y2 << 0.0, 0.0;
  x2 << 1.0, -2.0;
  // (1/4)(1 + 4) + 1 * (1 + 2) = 4.25
  CHECK(objective(I2, y2, x2, WeightVector::uniform(2, 1.0), 1.0) ==
        doctest::Approx(4.25).epsilon(1e-15));
}

TEST_CASE("soft threshold closed form") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  CHECK(soft_threshold(0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-0.5, 1.0) == 0.0);
  CHECK(soft_threshold(1.0, 1.0) == 0.0);   // boundary lands in the dead zone
  CHECK(soft_threshold(-1.0, 1.0) == 0.0);
  CHECK(soft_threshold(2.5, 0.0) == 2.5);
  CHECK(soft_threshold(0.0, 0.0) == 0.0);
}

TEST_CASE("zero data yields the zero solution immediately") {
  const ProblemInstance inst = random_instance(10, 2, 6, 3);
  const Vector y0 = Vector::Zero(6);
  const SolveResult r = solve_weighted_l1(inst.A, y0, WeightVector::uniform(10, 1.0),
                                          config_with(0.3));
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.x_hat.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(r.kkt_residual == 0.0);
}

TEST_CASE("orthogonal design matches the separable closed form") {
  const Matrix A = orthogonal_design();
  Vector y(4);
  y << 4.0, -2.0, 0.0, 0.0;  // A^T y / m = (2, -1)

  Vector wv(2);
  wv << 1.0, 2.0;
  const WeightVector w{wv};
  const SolveResult r = solve_weighted_l1(A, y, w, config_with(0.6, 1e-12));
  REQUIRE(r.converged);
  CHECK(r.x_hat[0] == doctest::Approx(1.4).epsilon(1e-10));
  CHECK(r.x_hat[1] == 0.0);  // dead zone produces an exact zero

  const SolveResult r2 = solve_weighted_l1(A, y, WeightVector::uniform(2, 1.0),
                                           config_with(0.7, 1e-12));
  REQUIRE(r2.converged);
  CHECK(r2.x_hat[0] == doctest::Approx(1.3).epsilon(1e-10));
  CHECK(r2.x_hat[1] == doctest::Approx(-0.3).epsilon(1e-10));
}

TEST_CASE("kkt_residual formula on the orthogonal design") {
  const Matrix A = orthogonal_design();
  Vector y(4);
  y << 4.0, -2.0, 0.0, 0.0;
  const WeightVector w = WeightVector::uniform(2, 1.0);

  const Vector zero = Vector::Zero(2);
  // at x = 0 the gradient is -(2, -1); off-support slack max(|g_i| - h, 0)
  CHECK(kkt_residual(A, y, zero, w, 2.5) == 0.0);
  CHECK(kkt_residual(A, y, zero, w, 1.5) == doctest::Approx(0.5).epsilon(1e-15));

  Vector x(2);
  x << 1.0, 0.0;
  // gradient at x is x - (2, -1) = (-1, 1); h = 0.6:
  // on-support |(-1) + 0.6| = 0.4, off-support max(1 - 0.6, 0) = 0.4
  CHECK(kkt_residual(A, y, x, w, 0.6) == doctest::Approx(0.4).epsilon(1e-15));

  // the closed form minimizer has (numerically) zero residual
  Vector opt(2);
  opt << 1.4, -0.4;
  CHECK(kkt_residual(A, y, opt, w, 0.6) <= 1e-14);
}

TEST_CASE("solution is covariant under the weight rescaling (h, W) -> (h/c, cW)") {
  const ProblemInstance inst = random_instance(24, 3, 16, 9, 0.3);
  Vector wv(24);
  for (Index i = 0; i < 24; ++i) wv[i] = 0.5 + 0.1 * static_cast<double>(i % 7);
  const double c = 3.7;

  const SolveResult a =
      solve_weighted_l1(inst.A, inst.y, WeightVector{wv}, config_with(0.21, 1e-11));
  const SolveResult b = solve_weighted_l1(inst.A, inst.y, WeightVector{Vector(c * wv)},
                                          config_with(0.21 / c, 1e-11));
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK((a.x_hat - b.x_hat).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("objective trace is non-increasing thanks to the restart rule") {
  const ProblemInstance inst = random_instance(40, 4, 20, 77, 0.4);
  SolverConfig cfg = config_with(0.05, 1e-9);
  const SolveResult r = solve_weighted_l1(inst.A, inst.y, WeightVector::uniform(40, 1.0), cfg);
  REQUIRE(r.objective_trace.size() >= 2);
  for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
    CHECK(r.objective_trace[t] <=
          r.objective_trace[t - 1] + 1e-12 * (1.0 + std::abs(r.objective_trace[t - 1])));
  }
  CHECK(std::isfinite(r.objective_trace.back()));
}

TEST_CASE("converged runs satisfy the reported tolerance independently") {
  const ProblemInstance inst = random_instance(32, 3, 48, 5, 0.25);
  const WeightVector w = WeightVector::uniform(32, 1.0);
  const SolverConfig cfg = config_with(0.08, 1e-10);
  const SolveResult r = solve_weighted_l1(inst.A, inst.y, w, cfg);
  REQUIRE(r.converged);
  CHECK(r.kkt_residual <= cfg.tol_kkt);
  CHECK(kkt_residual(inst.A, inst.y, r.x_hat, w, cfg.h) <= cfg.tol_kkt);
  CHECK(r.iterations <= cfg.max_iters);
}

TEST_CASE("fixed step rule converges on a well conditioned problem") {
  const ProblemInstance inst = random_instance(12, 2, 36, 13, 0.1);
  SolverConfig cfg = config_with(0.1, 1e-10);
  cfg.step_rule = StepRule::kFixed;
  const SolveResult r = solve_weighted_l1(inst.A, inst.y, WeightVector::uniform(12, 1.0), cfg);
  CHECK(r.converged);
  CHECK(kkt_residual(inst.A, inst.y, r.x_hat, WeightVector::uniform(12, 1.0), cfg.h) <= 1e-10);
}

TEST_CASE("solver config validation") {
  const ProblemInstance inst = random_instance(6, 1, 4, 1);
  const WeightVector w = WeightVector::uniform(6, 1.0);
  SolverConfig cfg;  // h defaults to 0, which is invalid
  CHECK_THROWS_AS(solve_weighted_l1(inst.A, inst.y, w, cfg), ValidationError);
  cfg.h = 0.5;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(solve_weighted_l1(inst.A, inst.y, w, cfg), ValidationError);
  cfg.max_iters = 100;
  cfg.tol_kkt = 0.0;
  CHECK_THROWS_AS(solve_weighted_l1(inst.A, inst.y, w, cfg), ValidationError);
  cfg.tol_kkt = 1e-9;
  CHECK_NOTHROW(solve_weighted_l1(inst.A, inst.y, w, cfg));

  Vector short_w = Vector::Ones(5);
  CHECK_THROWS_AS(solve_weighted_l1(inst.A, inst.y, WeightVector{short_w}, cfg),
                  ValidationError);
}

TEST_CASE("unconverged runs are reported honestly") {
  const ProblemInstance inst = random_instance(48, 5, 24, 21, 0.5);
  SolverConfig cfg = config_with(0.01, 1e-13);
  cfg.max_iters = 3;
  const SolveResult r = solve_weighted_l1(inst.A, inst.y, WeightVector::uniform(48, 1.0), cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(r.kkt_residual ==
        doctest::Approx(kkt_residual(inst.A, inst.y, r.x_hat,
                                     WeightVector::uniform(48, 1.0), cfg.h))
            .epsilon(1e-12));
}

TEST_CASE("strict dual feasibility report on the orthogonal design") {
  const Matrix A = orthogonal_design();
  Vector y(4);
  y << 4.0, -2.0, 0.0, 0.0;

  Vector wv(2);
  wv << 1.0, 2.0;
  Vector x(2);
  x << 1.4, 0.0;
  // residual correlation on index 1 is -1; margin = 0.6 * 2 - 1 = 0.2
  const DualFeasibilityReport rep = strict_dual_feasibility(A, y, x, WeightVector{wv}, 0.6);
  CHECK(rep.strict);
  CHECK(rep.margin == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(rep.full_rank);
  REQUIRE(rep.support.size() == 1);
  CHECK(rep.support[0] == 0);

  // x = 0 with a huge penalty: margin = min_i (h w_i - |(A^T y)_i| / m)
  const DualFeasibilityReport at_zero =
      strict_dual_feasibility(A, y, Vector::Zero(2), WeightVector{wv}, 10.0);
  CHECK(at_zero.strict);
  CHECK(at_zero.margin == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(at_zero.support.empty());
  CHECK(at_zero.full_rank);

  // boundary case: margin exactly zero is not strict
  const DualFeasibilityReport boundary =
      strict_dual_feasibility(A, y, Vector::Zero(2), WeightVector::uniform(2, 1.0), 2.0);
  CHECK_FALSE(boundary.strict);
  CHECK(boundary.margin == 0.0);
}

TEST_CASE("duplicated support columns break the rank half of the certificate") {
  Matrix A(4, 3);
  A.setZero();
  A(0, 0) = 2.0;
  A(0, 1) = 2.0;  // duplicate of column 0
  A(1, 2) = 2.0;
  Vector y(4);
  y << 4.0, 0.0, 0.0, 0.0;
  Vector x(3);
  x << 0.5, 0.5, 0.0;
  const DualFeasibilityReport rep =
      strict_dual_feasibility(A, y, x, WeightVector::uniform(3, 1.0), 0.3);
  CHECK_FALSE(rep.full_rank);
  REQUIRE(rep.support.size() == 2);

  // full support: no off-support coordinates, margin is +infinity
  Vector full(3);
  full << 0.1, 0.1, 0.1;
  const DualFeasibilityReport rep2 =
      strict_dual_feasibility(A, y, full, WeightVector::uniform(3, 1.0), 0.3);
  CHECK(std::isinf(rep2.margin));
  CHECK(rep2.strict);
}
