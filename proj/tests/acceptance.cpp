// Acceptance gate: one self-contained check per criterion, each printing a
// single [PASS]/[FAIL] line. The exit code is the number of failed criteria.
//
// Usage: wl1_acceptance [criterion ...]   (no arguments = run all eight)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wl1/ensemble.hpp"
#include "wl1/harness.hpp"
#include "wl1/oracle.hpp"
#include "wl1/rng.hpp"
#include "wl1/solver.hpp"
#include "wl1/theory.hpp"

using namespace wl1;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const char* const kOutDir = "acceptance_out";

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

/// Shared phase-transition gate: every theta at or above `upper_theta` must
/// reach `>= 0.95`, every theta at or below `lower_theta` must stay `<= 0.5`.
Outcome gate_check(const std::vector<SweepRecord>& records, double upper_theta,
                   double lower_theta, const std::string& label) {
  double upper_min = 1.0, lower_max = 0.0;
  int upper_count = 0, lower_count = 0;
  for (const SweepRecord& r : records) {
    if (r.theta >= upper_theta) {
      upper_min = std::min(upper_min, r.prob);
      ++upper_count;
    }
    if (r.theta <= lower_theta) {
      lower_max = std::max(lower_max, r.prob);
      ++lower_count;
    }
  }
  Outcome out;
  out.pass = upper_count > 0 && lower_count > 0 && upper_min >= 0.95 && lower_max <= 0.5;
  out.detail = label + ": prob >= " + fmt(upper_min) + " on " +
               std::to_string(upper_count) + " points with theta >= " + fmt(upper_theta, 2) +
               " (need >= 0.95), prob <= " + fmt(lower_max) + " on " +
               std::to_string(lower_count) + " points with theta <= " + fmt(lower_theta, 2) +
               " (need <= 0.5)";
  return out;
}

SweepConfig phase_config(std::uint64_t seed, std::vector<Index> m_list,
                         WeightScheme scheme, HRule h_rule) {
  SweepConfig cfg;
  cfg.n_list = {512};
  cfg.k = 10;
  cfg.m_list = std::move(m_list);
  cfg.trials = 200;
  cfg.sigma_z = 0.5;
  cfg.sigma_a = 1.0;
  cfg.phi_n = 9.0;
  cfg.weight_scheme = scheme;
  cfg.h_rule = h_rule;
  cfg.master_seed = seed;
  return cfg;
}

SweepConfig criterion1_config() {
  return phase_config(1, {62, 87, 111, 137, 162, 199, 236, 274, 323, 373},
                      WeightScheme::uniform(), HRule::kPointEta);
}

// 1. Unweighted phase transition at n = 512: success probability reaches 0.95
//    by theta = 2.2 and stays at or below 0.5 up to theta = 0.9.
Outcome criterion1() {
  const SweepConfig cfg = criterion1_config();
  const std::vector<SweepRecord> records = run_sweep(cfg, 0);
  emit_csv(records, std::string(kOutDir) + "/phase_eta100.csv");
  emit_plot(records, std::string(kOutDir) + "/phase_eta100.svg", PlotAxis::kTheta);
  return gate_check(records, 2.2, 0.9, "eta=1 transition");
}

// 2. Support weights sqrt(2)/2 (eta = 0.5) halve the transition point:
//    0.95 by theta = 1.2, at most 0.5 up to theta = 0.45.
Outcome criterion2() {
  const SweepConfig cfg =
      phase_config(2, {37, 55, 75, 99, 124, 150, 199, 249, 311, 373},
                   WeightScheme::support_weight(std::sqrt(2.0) / 2.0), HRule::kUnitEta);
  const std::vector<SweepRecord> records = run_sweep(cfg, 0);
  emit_csv(records, std::string(kOutDir) + "/phase_eta050.csv");
  return gate_check(records, 1.2, 0.45, "eta=0.5 transition");
}

// 3. Support weights 1/2 (eta = 0.25) quarter it: 0.95 by theta = 0.65,
//    at most 0.5 up to theta = 0.22.
Outcome criterion3() {
  const SweepConfig cfg =
      phase_config(3, {12, 20, 27, 44, 62, 81, 100, 124, 187, 274, 373},
                   WeightScheme::support_weight(0.5), HRule::kUnitEta);
  const std::vector<SweepRecord> records = run_sweep(cfg, 0);
  emit_csv(records, std::string(kOutDir) + "/phase_eta025.csv");
  return gate_check(records, 0.65, 0.22, "eta=0.25 transition");
}

// 4. Curve collapse: the theta of the 0.5-probability crossing agrees across
//    n in {128, 256, 512} (k by the default rule) to within 0.25.
Outcome criterion4() {
  SweepConfig cfg;
  cfg.n_list = {128, 256, 512};
  cfg.theta_min = 0.5;
  cfg.theta_max = 1.5;
  cfg.theta_steps = 9;
  cfg.trials = 150;
  cfg.sigma_z = 0.5;
  cfg.sigma_a = 1.0;
  cfg.phi_n = 9.0;
  cfg.master_seed = 4;
  const std::vector<SweepRecord> records = run_sweep(cfg, 0);
  emit_csv(records, std::string(kOutDir) + "/collapse.csv");
  emit_plot(records, std::string(kOutDir) + "/collapse.svg", PlotAxis::kTheta);

  Outcome out;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::string crossings;
  for (Index n : cfg.n_list) {
    std::vector<SweepRecord> group;
    for (const SweepRecord& r : records)
      if (r.n == n) group.push_back(r);
    const std::optional<double> cross = crossing_theta(group, 0.5);
    if (!cross) {
      out.detail = "curve collapse: n=" + std::to_string(n) + " never reaches prob 0.5";
      return out;
    }
    lo = std::min(lo, *cross);
    hi = std::max(hi, *cross);
    crossings += (crossings.empty() ? "" : "/") + fmt(*cross);
  }
  out.pass = hi - lo <= 0.25;
  out.detail = "curve collapse: 0.5-crossings at theta " + crossings + ", spread " +
               fmt(hi - lo) + " (need <= 0.25)";
  return out;
}

// 5. Oracle equivalence: on 500 seeded small instances with h spanning
//    [0.01, 10], the iterative solver reproduces the exhaustive minimizer
//    (sign pattern and sup-norm distance 1e-6) whenever the dual margin
//    exceeds 1e-6.
Outcome criterion5() {
  const std::uint64_t master = 5;
  int certified = 0, mismatched = 0;
  double worst_dx = 0.0;

  for (int i = 0; i < 500; ++i) {
    SplitMix64 pick(derive_seed(master, {static_cast<std::uint64_t>(i)}));
    EnsembleConfig ecfg;
    ecfg.n = 4 + 2 * static_cast<Index>(pick.next_below(3));   // 4, 6, 8
    ecfg.k = 1 + static_cast<Index>(pick.next_below(2));       // 1, 2
    ecfg.m = 3 + static_cast<Index>(pick.next_below(6));       // 3 .. 8
    const double sigmas[] = {0.0, 0.3, 0.8};
    ecfg.sigma_z = sigmas[pick.next_below(3)];
    ecfg.seed = derive_seed(master, {static_cast<std::uint64_t>(i), 77});
    const ProblemInstance inst = sample_instance(ecfg);
    const WeightVector w = WeightVector::uniform(ecfg.n, 1.0);
    const double h = 0.01 * std::pow(10.0, 3.0 * static_cast<double>(i) / 499.0);

    const OracleResult oracle = brute_force_minimum(inst.A, inst.y, w, h);
    if (!(oracle.dual_margin > 1e-6)) continue;
    ++certified;

    SolverConfig scfg;
    scfg.h = h;
    scfg.tol_kkt = 1e-11;
    scfg.max_iters = 500000;
    const SolveResult s = solve_weighted_l1(inst.A, inst.y, w, scfg);
    const double dx = (s.x_hat - oracle.x_opt).lpNorm<Eigen::Infinity>();
    worst_dx = std::max(worst_dx, dx);
    if (!s.converged || sign_pattern(s.x_hat) != sign_pattern(oracle.x_opt) ||
        dx > 1e-6)
      ++mismatched;
  }

  Outcome out;
  out.pass = mismatched == 0 && certified >= 300;
  out.detail = "oracle equivalence: " + std::to_string(certified) +
               "/500 instances had dual margin > 1e-6, " + std::to_string(mismatched) +
               " mismatches (need 0), worst |x_hat - x_opt| = " +
               std::to_string(worst_dx);
  return out;
}

// 6. Certificate consistency: on 200 instances whose recovery events both hold
//    with margin > 1e-8, the solver returns the certified minimizer (signs of
//    the truth, within 1e-6 of x_dagger) at least 99% of the time.
Outcome criterion6() {
  const std::uint64_t master = 6;
  const Index n = 64, k = 4, m = 98;
  const double h = select_h(static_cast<double>(m), n, k, 1.0, 0.5, 1.0, 9.0);
  const WeightVector w = WeightVector::uniform(n, 1.0);

  int qualifying = 0, good = 0, attempts = 0;
  while (qualifying < 200 && attempts < 500) {
    EnsembleConfig ecfg;
    ecfg.n = n;
    ecfg.k = k;
    ecfg.m = m;
    ecfg.sigma_z = 0.5;
    ecfg.seed = derive_seed(master, {static_cast<std::uint64_t>(attempts)});
    ++attempts;
    const ProblemInstance inst = sample_instance(ecfg);

    const RecoveryCertificate cert = check_recovery_events(inst, w, h);
    if (!(cert.event1_holds && cert.event1_margin > 1e-8 && cert.event2_holds)) continue;
    ++qualifying;

    SolverConfig scfg;
    scfg.h = h;
    scfg.tol_kkt = 1e-10;
    scfg.max_iters = 200000;
    const SolveResult s = solve_weighted_l1(inst.A, inst.y, w, scfg);
    const bool signs_ok = sign_pattern(s.x_hat) == inst.signal.sign_pattern();
    const bool close = (s.x_hat - cert.x_dagger).lpNorm<Eigen::Infinity>() <= 1e-6;
    if (s.converged && signs_ok && close) ++good;
  }

  Outcome out;
  out.pass = qualifying == 200 && good >= 198;
  out.detail = "certificate consistency: " + std::to_string(good) + "/" +
               std::to_string(qualifying) + " certified instances solved to x_dagger (" +
               std::to_string(attempts) + " sampled, need >= 198/200)";
  return out;
}

// 7. Closed forms: the pinned penalty value, and theta(m*) = eta exactly in
//    the noiseless limit for 100 random shapes.
Outcome criterion7() {
  const double h = select_h(200.0, 512, 10, 1.0, 0.5, 1.0, 9.0);
  const double dh = std::abs(h - 0.37406);
  const bool h_ok = dh <= 1e-4;

  SplitMix64 rng(7);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index n = 16 + static_cast<Index>(rng.next_below(2000));
    const Index k =
        1 + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(std::min<Index>(n - 2, 40))));
    const double eta = 0.1 + 3.9 * rng.next_uniform();
    const double sigma_z = rng.next_uniform();
    const double sigma_a = 0.5 + rng.next_uniform();
    const double m_star = sample_threshold(n, k, eta, std::numeric_limits<double>::infinity(),
                                           sigma_z, sigma_a, 0.0);
    worst = std::max(worst, std::abs(rescaled_theta(m_star, n, k) - eta));
  }

  Outcome out;
  out.pass = h_ok && worst <= 1e-12;
  std::ostringstream detail;
  detail << "closed forms: |h - 0.37406| = " << dh << " (need <= 1e-4), worst |theta(m*) - eta| = "
         << worst << " over 100 shapes (need <= 1e-12)";
  out.detail = detail.str();
  return out;
}

// 8. Determinism: running the criterion-1 sweep twice with the same master
//    seed produces byte-identical CSV files.
Outcome criterion8() {
  const SweepConfig cfg = criterion1_config();
  const std::string path1 = std::string(kOutDir) + "/determinism_run1.csv";
  const std::string path2 = std::string(kOutDir) + "/determinism_run2.csv";
  emit_csv(run_sweep(cfg, 0), path1);
  emit_csv(run_sweep(cfg, 0), path2);

  const auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const std::string a = slurp(path1), b = slurp(path2);

  Outcome out;
  out.pass = !a.empty() && a == b;
  out.detail = "determinism: two sweeps wrote " + std::to_string(a.size()) + " and " +
               std::to_string(b.size()) + " bytes, " +
               (out.pass ? "byte-identical" : "files differ");
  return out;
}

Outcome run_criterion(int index) {
  switch (index) {
    case 1: return criterion1();
    case 2: return criterion2();
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6();
    case 7: return criterion7();
    case 8: return criterion8();
    default: return {false, "unknown criterion " + std::to_string(index)};
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};

  std::error_code ec;
  std::filesystem::create_directories(kOutDir, ec);

  int failures = 0;
  for (int index : selected) {
    Outcome out;
    try {
      out = run_criterion(index);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failures;
    std::cout << (out.pass ? "[PASS]" : "[FAIL]") << " criterion " << index << ": "
              << out.detail << std::endl;
  }
  return failures;
}
