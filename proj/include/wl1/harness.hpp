#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wl1/ensemble.hpp"
#include "wl1/solver.hpp"
#include "wl1/theory.hpp"

namespace wl1 {

/// Per-trial weight assignment for a sweep.
struct WeightScheme {
  enum class Kind { kUniform, kSupportWeight, kPerIndex };

  Kind kind = Kind::kUniform;
  double support_value = 1.0;       // kSupportWeight: weight on the true support
  std::vector<double> per_index;    // kPerIndex: fixed weights, length n

  static WeightScheme uniform() { return {}; }
  static WeightScheme support_weight(double ws);
  static WeightScheme per_index_weights(std::vector<double> values);

  WeightVector weights_for(const SparseSignal& signal) const;
};

/// Which eta enters the penalty rule. kPointEta rescales h by the weight
/// scheme's own eta; kUnitEta keeps the unweighted (eta = 1) penalty so
/// weighted and unweighted curves share the same h at a given m.
enum class HRule { kPointEta, kUnitEta };

struct SweepConfig {
  std::vector<Index> n_list;
  std::optional<Index> k;             // sparsity: explicit k, default rule ceil(0.4 sqrt(n))
  std::vector<Index> m_list;          // m_grid: explicit list, overrides the theta grid
  double theta_min = 0.25;            // m_grid: theta grid bounds and resolution
  double theta_max = 3.0;
  int theta_steps = 25;
  int trials = 200;
  WeightScheme weight_scheme;
  double sigma_z = 0.5;
  double sigma_a = 1.0;
  double phi_n = 9.0;
  std::optional<double> h;            // fixed penalty override (e.g. noiseless runs)
  HRule h_rule = HRule::kPointEta;
  std::uint64_t master_seed = 0;
  std::string success_definition = "sign_pattern";
  bool check_certificates = false;    // also evaluate recovery events per trial
  SolverConfig solver;                // solver.h is overwritten per trial

  void validate() const;
};

SweepConfig sweep_config_from_json(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

struct TrialOutcome {
  std::uint64_t seed = 0;
  bool success = false;        // solver converged and sign(x_hat) == sign(x*)
  bool converged = false;
  double kkt_residual = 0.0;
  int iterations = 0;
  double eta = 0.0;
  double h = 0.0;
  bool certificate_checked = false;
  bool event1_holds = false;
  bool event2_holds = false;
};

/// One grid point: (n, m) with k fixed, aggregated over trials.
struct SweepRecord {
  Index n = 0;
  Index k = 0;
  Index m = 0;
  double theta = 0.0;
  double eta = 0.0;            // mean over trials (constant for fixed schemes)
  double h = 0.0;              // mean over trials
  int trials = 0;
  int successes = 0;
  double prob = 0.0;
  std::uint64_t master_seed = 0;
  int event_both = 0;          // trials with both recovery events, if checked
};

/// Runs one trial at (n, k, m). The instance seed is
/// derive_seed(master_seed, {n, m, trial_index}), independent of scheduling.
TrialOutcome run_trial(const SweepConfig& cfg, Index n, Index k, Index m,
                       int trial_index);

/// Full grid sweep, trial-parallel. threads <= 0 picks the hardware count.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, int threads = 0);

/// CSV round trip. Column order and 17-significant-digit float formatting are
/// fixed; rows sorted by n then m. Writers and parsers agree byte for byte.
std::string records_to_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_csv(const std::string& text);
void emit_csv(const std::vector<SweepRecord>& records, const std::string& path);
std::vector<SweepRecord> read_csv(const std::string& path);

enum class PlotAxis { kTheta, kSampleSize };

/// Standalone SVG of success probability against theta or m, one polyline per
/// (n, k) group, with axes, ticks and a legend.
std::string render_svg(const std::vector<SweepRecord>& records, PlotAxis axis);
void emit_plot(const std::vector<SweepRecord>& records, const std::string& path,
               PlotAxis axis);

/// Least-squares non-decreasing fit (pool adjacent violators, uniform weights).
std::vector<double> isotonic_fit(const std::vector<double>& values);

/// First theta at which the isotonic fit of prob reaches `level`, linearly
/// interpolated between grid points. Records must share one (n, k) group.
std::optional<double> crossing_theta(const std::vector<SweepRecord>& records,
                                     double level);

}  // namespace wl1
