#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "wl1/ensemble.hpp"
#include "wl1/oracle.hpp"
#include "wl1/theory.hpp"

using namespace wl1;

namespace {

ProblemInstance random_instance(Index n, Index k, Index m, std::uint64_t seed,
                                double sigma_z) {
  EnsembleConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.m = m;
  cfg.sigma_z = sigma_z;
  cfg.seed = seed;
  return sample_instance(cfg);
}

}  // namespace

TEST_CASE("one dimensional program has the textbook solution") {
  Matrix A(1, 1);
  A << 2.0;
  Vector y(1);
  y << 2.0;
  const WeightVector w = WeightVector::uniform(1, 1.0);

  const OracleResult r = brute_force_minimum(A, y, w, 0.5);
  REQUIRE(r.support.size() == 1);
  CHECK(r.support[0] == 0);
  CHECK(r.signs[0] == 1);
  CHECK(r.x_opt[0] == doctest::Approx(0.875).epsilon(1e-14));
  CHECK(r.objective == doctest::Approx(0.46875).epsilon(1e-14));
  CHECK(std::isinf(r.dual_margin));  // full support leaves no dual constraint
  CHECK(r.unique);
  CHECK(r.certified_count == 1);
}

TEST_CASE("large penalty certifies the zero solution") {
  Matrix A(1, 1);
  A << 2.0;
  Vector y(1);
  y << 2.0;
  const OracleResult r = brute_force_minimum(A, y, WeightVector::uniform(1, 1.0), 5.0);
  CHECK(r.support.empty());
  CHECK(r.x_opt[0] == 0.0);
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.dual_margin == doctest::Approx(1.0).epsilon(1e-14));  // 5 - |A^T y|/m = 1
  CHECK(r.unique);
  CHECK(r.certified_count == 1);
}

TEST_CASE("duplicate columns are detected as non-unique") {
  Matrix A(2, 2);
  A << 1.0, 1.0, 1.0, 1.0;
  Vector y(2);
  y << 2.0, 2.0;
  const OracleResult r = brute_force_minimum(A, y, WeightVector::uniform(2, 1.0), 0.5);
  // both single-index supports give the same objective; the margin is exactly
  // zero so the winner cannot be certified unique
  REQUIRE(r.support.size() == 1);
  CHECK(r.x_opt.lpNorm<Eigen::Infinity>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.objective == doctest::Approx(0.875).epsilon(1e-12));
  CHECK(std::abs(r.dual_margin) <= 1e-12);
  CHECK_FALSE(r.unique);
  CHECK(r.certified_count == 2);
}

TEST_CASE("oracle agrees with the recovery certificate on an orthogonal design") {
  Matrix A = Matrix::Zero(4, 2);
  A(0, 0) = 2.0;
  A(1, 1) = 2.0;
  SparseSignal sig;
  sig.n = 2;
  sig.support = {0};
  sig.values = Vector::Constant(1, 1.5);
  const Vector y = A * sig.dense();
  const WeightVector w = WeightVector::uniform(2, 1.0);

  const RecoveryCertificate cert = check_recovery_events(A, Vector::Zero(4), sig, w, 0.3);
  REQUIRE(cert.event1_holds);
  REQUIRE(cert.event2_holds);

  const OracleResult r = brute_force_minimum(A, y, w, 0.3);
  CHECK(r.support == sig.support);
  CHECK(r.unique);
  CHECK((r.x_opt - cert.x_dagger).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("oracle and iterative solver find the same minimum on random problems") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const ProblemInstance inst = random_instance(8, 2, 6, seed, 0.3);
    const WeightVector w = WeightVector::uniform(8, 1.0);
    const double h = 0.15;

    SolverConfig cfg;
    cfg.h = h;
    cfg.tol_kkt = 1e-12;
    cfg.max_iters = 200000;
    const SolveResult s = solve_weighted_l1(inst.A, inst.y, w, cfg);
    REQUIRE(s.converged);

    const OracleResult o = brute_force_minimum(inst.A, inst.y, w, h);
    const double f_solver = objective(inst.A, inst.y, s.x_hat, w, h);
    CHECK(f_solver <= o.objective + 1e-9 * (1.0 + std::abs(o.objective)));
    CHECK(f_solver >= o.objective - 1e-9 * (1.0 + std::abs(o.objective)));
    if (o.unique) CHECK((s.x_hat - o.x_opt).lpNorm<Eigen::Infinity>() <= 1e-6);
  }
}

TEST_CASE("weighted problems shift the oracle solution as the weights say") {
  const ProblemInstance inst = random_instance(6, 2, 8, 11, 0.2);
  const WeightVector cheap =
      WeightVector::support_weight(6, inst.signal.support, 0.25);
  const WeightVector flat = WeightVector::uniform(6, 1.0);
  const double h = 0.4;
  const OracleResult with_help = brute_force_minimum(inst.A, inst.y, cheap, h);
  const OracleResult without = brute_force_minimum(inst.A, inst.y, flat, h);
  // cheaper support weights can only improve the penalized fit on the support
  CHECK(with_help.objective <= without.objective + 1e-12);
}

TEST_CASE("enumeration is deterministic and ordered") {
  const ProblemInstance inst = random_instance(5, 1, 4, 3, 0.5);
  const WeightVector w = WeightVector::uniform(5, 1.0);
  const auto a = enumerate_certificates(inst.A, inst.y, w, 0.2);
  const auto b = enumerate_certificates(inst.A, inst.y, w, 0.2);
  REQUIRE(a.size() == b.size());
  REQUIRE(!a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].support == b[i].support);
    CHECK(a[i].signs == b[i].signs);
    CHECK(a[i].objective == b[i].objective);
    CHECK((a[i].x - b[i].x).lpNorm<Eigen::Infinity>() == 0.0);
  }
  // cardinality never decreases along the enumeration order
  for (std::size_t i = 1; i < a.size(); ++i)
    CHECK(a[i].support.size() >= a[i - 1].support.size());

  // the brute force winner attains the enumeration minimum
  const OracleResult best = brute_force_minimum(inst.A, inst.y, w, 0.2);
  double lowest = a[0].objective;
  for (const auto& p : a) lowest = std::min(lowest, p.objective);
  CHECK(best.objective == doctest::Approx(lowest).epsilon(1e-15));
  CHECK(best.certified_count == a.size());
}

TEST_CASE("every certified pattern satisfies stationarity") {
  const ProblemInstance inst = random_instance(6, 2, 5, 21, 0.4);
  const WeightVector w = WeightVector::uniform(6, 1.0);
  const double h = 0.25;
  for (const auto& p : enumerate_certificates(inst.A, inst.y, w, h)) {
    CHECK(kkt_residual(inst.A, inst.y, p.x, w, h) <= 1e-8);
    for (std::size_t j = 0; j < p.support.size(); ++j) {
      const double v = p.x[p.support[j]];
      CHECK(v * p.signs[j] > 0.0);
    }
  }
}

TEST_CASE("oracle input validation") {
  const ProblemInstance inst = random_instance(15, 2, 6, 1, 0.1);
  const WeightVector w = WeightVector::uniform(15, 1.0);
  CHECK_THROWS_AS(brute_force_minimum(inst.A, inst.y, w, 0.2), ValidationError);

  Matrix A(2, 2);
  A << 1, 0, 0, 1;
  Vector y(2);
  y << 1, 1;
  const WeightVector w2 = WeightVector::uniform(2, 1.0);
  CHECK_THROWS_AS(brute_force_minimum(A, y, w2, 0.0), ValidationError);
  CHECK_THROWS_AS(brute_force_minimum(A, Vector::Ones(3), w2, 0.2), ValidationError);
  CHECK_THROWS_AS(brute_force_minimum(A, y, WeightVector::uniform(3, 1.0), 0.2),
                  ValidationError);
}
