#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wl1/linalg.hpp"
#include "wl1/rng.hpp"

namespace wl1 {

/// How nonzero signal values are produced on the sampled support.
struct MagnitudeRule {
  enum class Kind { kRademacher, kFixed, kExplicit };

  Kind kind = Kind::kRademacher;
  double magnitude = 1.0;        // kFixed: |value|, sign uniform
  std::vector<double> values;    // kExplicit: one value per support index

  static MagnitudeRule rademacher() { return {}; }
  static MagnitudeRule fixed(double magnitude);
  static MagnitudeRule explicit_values(std::vector<double> values);
};

struct EnsembleConfig {
  Index n = 0;
  Index k = 0;
  Index m = 0;
  double sigma_a = 1.0;
  double sigma_z = 0.0;
  MagnitudeRule magnitude = MagnitudeRule::rademacher();
  std::uint64_t seed = 0;

  void validate() const;
};

/// k-sparse ground truth: strictly increasing support, nonzero values.
struct SparseSignal {
  Index n = 0;
  IndexSet support;
  Vector values;

  void validate() const;
  Vector dense() const;
  std::vector<int> sign_pattern() const;  // length n, entries in {-1, 0, +1}
};

/// Entrywise signs of an arbitrary vector, same convention as SparseSignal.
std::vector<int> sign_pattern(const Vector& x);

struct ProblemInstance {
  Matrix A;  // m x n
  Vector z;  // m
  Vector y;  // m, equals A x* + z
  SparseSignal signal;
  EnsembleConfig config;

  void validate() const;
};

/// Default sparsity level k(n) = ceil(0.4 sqrt(n)), evaluated exactly
/// (smallest k with 25 k^2 >= 4 n) so boundary cases never round up twice.
Index sparsity_rule(Index n);

/// Draws support (uniform without replacement), values (per magnitude rule),
/// Gaussian A (entries N(0, sigma_a^2), column-major draw order) and noise z,
/// then forms y = A x* + z. Fully determined by cfg.seed.
ProblemInstance sample_instance(const EnsembleConfig& cfg);

std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);
ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

}  // namespace wl1
