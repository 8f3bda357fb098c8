#include "wl1/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wl1 {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void require_shape(Index n, Index k, const char* context) {
  require(k >= 1, std::string(context) + ": k must be at least 1");
  require(n - k >= 2, std::string(context) + ": need n - k >= 2 so log(n - k) > 0");
}

struct SupportSystem {
  Matrix as;          // A_S
  Vector proj_coeff;  // (A_S^T A_S)^{-1} A_S^T z
  Vector penal_coeff; // (A_S^T A_S)^{-1} W_S u_S
};

SupportSystem support_system(const Matrix& A, const Vector& z, const SparseSignal& signal,
                             const WeightVector& w, double h, const char* context) {
  signal.validate();
  require(A.cols() == signal.n,
          std::string(context) + ": A column count differs from signal dimension");
  require(A.rows() == z.size(), std::string(context) + ": A and z row counts differ");
  require(w.size() == signal.n,
          std::string(context) + ": weight length differs from signal dimension");
  require(std::isfinite(h) && h >= 0.0, std::string(context) + ": h must be non-negative");

  SupportSystem sys;
  sys.as = column_submatrix(A, signal.support);
  const Matrix gram = sys.as.transpose() * sys.as;
  Matrix L;
  if (!cholesky_factor(gram, L))
    throw NumericalError(std::string(context) + ": support block is rank deficient");

  const Index k = sys.as.cols();
  Vector wu(k);
  for (Index j = 0; j < k; ++j) {
    const double u = signal.values[j] > 0.0 ? 1.0 : -1.0;
    wu[j] = w[signal.support[static_cast<std::size_t>(j)]] * u;
  }
  sys.proj_coeff = solve_spd(gram, Vector(sys.as.transpose() * z));
  sys.penal_coeff = solve_spd(gram, wu);
  return sys;
}

Vector dagger_values(const SupportSystem& sys, const SparseSignal& signal, double m,
                     double h) {
  return signal.values + sys.proj_coeff - (m * h) * sys.penal_coeff;
}

Vector scatter(const Vector& support_values, const SparseSignal& signal) {
  Vector full = Vector::Zero(signal.n);
  for (std::size_t j = 0; j < signal.support.size(); ++j)
    full[signal.support[j]] = support_values[static_cast<Index>(j)];
  return full;
}

}  // namespace

void ScalingParams::validate() const {
  require(std::isfinite(xi) && xi > 0.0, "scaling: xi must be positive");
  require(std::isfinite(eta) && eta > 0.0, "scaling: eta must be positive");
  require(std::isfinite(epsilon_prime) && epsilon_prime >= 0.0,
          "scaling: epsilon_prime must be non-negative");
  require(std::isfinite(phi_n) && phi_n >= 2.0, "scaling: phi_n must be at least 2");
  require(std::isfinite(c3) && c3 > 0.0, "scaling: c3 must be positive");
}

double xi_of(const WeightVector& w, const IndexSet& support) {
  require(!support.empty(), "xi_of: empty support");
  validate_index_set(support, w.size(), "xi_of");
  double s = 0.0;
  for (Index i : support) s += w[i] * w[i];
  return s / static_cast<double>(support.size());
}

double eta_of(const WeightVector& w, const IndexSet& support) {
  const Index n = w.size();
  require(static_cast<Index>(support.size()) < n, "eta_of: support covers every index");
  const double xi = xi_of(w, support);
  double off_min = std::numeric_limits<double>::infinity();
  std::size_t s = 0;
  for (Index i = 0; i < n; ++i) {
    if (s < support.size() && support[s] == i) {
      ++s;
      continue;
    }
    off_min = std::min(off_min, w[i]);
  }
  return xi / (off_min * off_min);
}

Vector x_dagger(const Matrix& A, const Vector& z, const SparseSignal& signal,
                const WeightVector& w, double h) {
  const SupportSystem sys = support_system(A, z, signal, w, h, "x_dagger");
  return scatter(dagger_values(sys, signal, static_cast<double>(A.rows()), h), signal);
}

Vector x_dagger(const ProblemInstance& inst, const WeightVector& w, double h) {
  return x_dagger(inst.A, inst.z, inst.signal, w, h);
}

RecoveryCertificate check_recovery_events(const Matrix& A, const Vector& z,
                                          const SparseSignal& signal,
                                          const WeightVector& w, double h) {
  const SupportSystem sys = support_system(A, z, signal, w, h, "recovery_events");
  const double m = static_cast<double>(A.rows());

  // v = (I - A_S A_S^+) z + m h A_S (A_S^T A_S)^{-1} W_S u_S
  const Vector v = z - sys.as * sys.proj_coeff + (m * h) * (sys.as * sys.penal_coeff);

  RecoveryCertificate cert;
  const Vector corr = A.transpose() * v / m;
  double margin = std::numeric_limits<double>::infinity();
  std::size_t s = 0;
  for (Index i = 0; i < signal.n; ++i) {
    if (s < signal.support.size() && signal.support[s] == i) {
      ++s;
      continue;
    }
    margin = std::min(margin, h * w[i] - std::abs(corr[i]));
  }
  cert.event1_margin = margin;
  cert.event1_holds = margin > 0.0;

  const Vector dagger = dagger_values(sys, signal, m, h);
  cert.event2_holds = true;
  for (Index j = 0; j < dagger.size(); ++j) {
    const bool positive = signal.values[j] > 0.0;
    if ((positive && dagger[j] <= 0.0) || (!positive && dagger[j] >= 0.0))
      cert.event2_holds = false;
  }
  cert.x_dagger = scatter(dagger, signal);
  return cert;
}

RecoveryCertificate check_recovery_events(const ProblemInstance& inst,
                                          const WeightVector& w, double h) {
  return check_recovery_events(inst.A, inst.z, inst.signal, w, h);
}

double sample_threshold(Index n, Index k, double eta, double h, double sigma_z,
                        double sigma_a, double eps_prime) {
  require_shape(n, k, "sample_threshold");
  require(std::isfinite(eta) && eta > 0.0, "sample_threshold: eta must be positive");
  require(h > 0.0, "sample_threshold: h must be positive");  // +infinity allowed
  require(std::isfinite(sigma_z) && sigma_z >= 0.0,
          "sample_threshold: sigma_z must be non-negative");
  require(std::isfinite(sigma_a) && sigma_a > 0.0, "sample_threshold: sigma_a must be positive");
  require(std::isfinite(eps_prime) && eps_prime >= 0.0,
          "sample_threshold: eps_prime must be non-negative");

  const double kk = static_cast<double>(k);
  const double base = 2.0 * eta * kk * std::log(static_cast<double>(n - k));
  double noise = 0.0;
  if (sigma_z > 0.0 && std::isfinite(h))
    noise = (sigma_z * sigma_z * sigma_a * sigma_a) / (h * h * kk);
  return base * (1.0 + eps_prime) * (1.0 + noise);
}

double select_h(double m, Index n, Index k, double eta, double sigma_z, double sigma_a,
                double phi_n) {
  require_shape(n, k, "select_h");
  require(std::isfinite(m) && m >= 1.0, "select_h: m must be at least 1");
  require(std::isfinite(eta) && eta > 0.0, "select_h: eta must be positive");
  require(std::isfinite(sigma_z) && sigma_z > 0.0,
          "select_h: sigma_z must be positive (pass an explicit h for noiseless data)");
  require(std::isfinite(sigma_a) && sigma_a > 0.0, "select_h: sigma_a must be positive");
  require(std::isfinite(phi_n) && phi_n >= 2.0, "select_h: phi_n must be at least 2");
  return std::sqrt(2.0 * phi_n * eta * sigma_z * sigma_z * sigma_a * sigma_a *
                   std::log(static_cast<double>(n - k)) / m);
}

double gap(double h, const WeightVector& w, const IndexSet& support, double m,
           double sigma_z, double sigma_a, double c3) {
  require(std::isfinite(m) && m >= 1.0, "gap: m must be at least 1");
  require(!support.empty(), "gap: empty support");
  validate_index_set(support, w.size(), "gap");
  require(std::isfinite(h) && h > 0.0, "gap: h must be positive");
  require(std::isfinite(sigma_z) && sigma_z >= 0.0, "gap: sigma_z must be non-negative");
  require(std::isfinite(sigma_a) && sigma_a > 0.0, "gap: sigma_a must be positive");
  require(std::isfinite(c3) && c3 > 0.0, "gap: c3 must be positive");

  double w_max = 0.0;
  for (Index i : support) w_max = std::max(w_max, w[i]);
  const double k = static_cast<double>(support.size());
  const double noise =
      6.0 * std::sqrt(sigma_z * sigma_z * std::log(k) / (m * sigma_a * sigma_a));
  return c3 * h * w_max + noise;
}

double rescaled_theta(double m, Index n, Index k) {
  require_shape(n, k, "rescaled_theta");
  require(std::isfinite(m) && m >= 0.0, "rescaled_theta: m must be non-negative");
  return m / (2.0 * static_cast<double>(k) * std::log(static_cast<double>(n - k)));
}

}  // namespace wl1
