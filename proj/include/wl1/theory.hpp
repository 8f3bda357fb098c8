#pragma once

#include "wl1/ensemble.hpp"
#include "wl1/linalg.hpp"
#include "wl1/solver.hpp"

namespace wl1 {

/// Scalars of the scaling law, bundled for prediction and reporting.
struct ScalingParams {
  double xi = 1.0;
  double eta = 1.0;
  double epsilon_prime = 0.0;
  double phi_n = 9.0;
  double c3 = 1.0;  // gap constant, heuristic (no value given for it)

  void validate() const;
};

/// Mean squared weight over the support: (1/k) sum_{i in S} w_i^2.
double xi_of(const WeightVector& w, const IndexSet& support);

/// Weight-geometry ratio eta = xi / (min off-support weight)^2.
double eta_of(const WeightVector& w, const IndexSet& support);

/// Candidate minimizer built on the true support, as a full n-vector:
/// x_dagger_S = x*_S + A_S^+ z - m h (A_S^T A_S)^{-1} W_S u_S with
/// u_S = sign(x*_S), zero off the support. h = 0 gives the oracle least
/// squares on the true support. Throws NumericalError when A_S is rank
/// deficient.
Vector x_dagger(const Matrix& A, const Vector& z, const SparseSignal& signal,
                const WeightVector& w, double h);
Vector x_dagger(const ProblemInstance& inst, const WeightVector& w, double h);

struct RecoveryCertificate {
  bool event1_holds = false;   // strict off-support dual feasibility of the candidate
  double event1_margin = 0.0;  // min over off-support of h w_i - |A_i^T v| / m
  bool event2_holds = false;   // sign(x_dagger) matches sign(x*) on the support
  Vector x_dagger;             // full n-vector, zero off the support
};

/// Evaluates both recovery events for a known instance (oracle-side: uses the
/// true support, signs and noise). When both hold, the program's unique
/// minimizer is x_dagger.
RecoveryCertificate check_recovery_events(const Matrix& A, const Vector& z,
                                          const SparseSignal& signal,
                                          const WeightVector& w, double h);
RecoveryCertificate check_recovery_events(const ProblemInstance& inst,
                                          const WeightVector& w, double h);

/// Sufficient sample count m*(h) = 2 eta k log(n-k) (1 + eps_prime)
/// (1 + sigma_z^2 sigma_a^2 / (h^2 k)). h may be +infinity (noise factor -> 1).
double sample_threshold(Index n, Index k, double eta, double h, double sigma_z,
                        double sigma_a, double eps_prime);

/// Penalty rule h = sqrt(2 phi_n eta sigma_z^2 sigma_a^2 log(n-k) / m), phi_n >= 2.
/// Rejects sigma_z = 0 (h = 0 leaves the program unregularized); noiseless
/// callers must pass an explicit h instead.
double select_h(double m, Index n, Index k, double eta, double sigma_z,
                double sigma_a, double phi_n);

/// Smallest recoverable magnitude scale
/// g(h) = c3 h max_{i in S} w_i + 6 sqrt(sigma_z^2 log(k) / (m sigma_a^2)).
double gap(double h, const WeightVector& w, const IndexSet& support, double m,
           double sigma_z, double sigma_a, double c3 = 1.0);

/// Rescaled sample size theta = m / (2 k log(n-k)).
double rescaled_theta(double m, Index n, Index k);

}  // namespace wl1
