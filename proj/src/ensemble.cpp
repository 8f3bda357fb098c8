#include "wl1/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace wl1 {

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

MagnitudeRule MagnitudeRule::fixed(double magnitude) {
  MagnitudeRule r;
  r.kind = Kind::kFixed;
  r.magnitude = magnitude;
  return r;
}

MagnitudeRule MagnitudeRule::explicit_values(std::vector<double> values) {
  MagnitudeRule r;
  r.kind = Kind::kExplicit;
  r.values = std::move(values);
  return r;
}

void EnsembleConfig::validate() const {
  require(n >= 2, "ensemble: n must be at least 2");
  require(k >= 1 && k < n, "ensemble: k must satisfy 1 <= k < n");
  require(m >= 1, "ensemble: m must be at least 1");
  require(std::isfinite(sigma_a) && sigma_a > 0.0, "ensemble: sigma_a must be positive");
  require(std::isfinite(sigma_z) && sigma_z >= 0.0, "ensemble: sigma_z must be non-negative");
  switch (magnitude.kind) {
    case MagnitudeRule::Kind::kRademacher:
      break;
    case MagnitudeRule::Kind::kFixed:
      require(std::isfinite(magnitude.magnitude) && magnitude.magnitude != 0.0,
              "ensemble: fixed magnitude must be nonzero");
      break;
    case MagnitudeRule::Kind::kExplicit:
      require(static_cast<Index>(magnitude.values.size()) == k,
              "ensemble: explicit values must have length k");
      for (double v : magnitude.values)
        require(std::isfinite(v) && v != 0.0, "ensemble: explicit values must be nonzero");
      break;
  }
}

void SparseSignal::validate() const {
  require(n >= 1, "signal: n must be positive");
  require(support.size() == static_cast<std::size_t>(values.size()),
          "signal: support and values lengths differ");
  validate_index_set(support, n, "signal");
  for (Index j = 0; j < values.size(); ++j)
    require(std::isfinite(values[j]) && values[j] != 0.0,
            "signal: support values must be finite and nonzero");
}

Vector SparseSignal::dense() const {
  Vector x = Vector::Zero(n);
  for (std::size_t j = 0; j < support.size(); ++j) x[support[j]] = values[static_cast<Index>(j)];
  return x;
}

std::vector<int> SparseSignal::sign_pattern() const {
  std::vector<int> s(static_cast<std::size_t>(n), 0);
  for (std::size_t j = 0; j < support.size(); ++j)
    s[static_cast<std::size_t>(support[j])] = sign_of(values[static_cast<Index>(j)]);
  return s;
}

std::vector<int> sign_pattern(const Vector& x) {
  std::vector<int> s(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) s[static_cast<std::size_t>(i)] = sign_of(x[i]);
  return s;
}

void ProblemInstance::validate() const {
  signal.validate();
  require(A.cols() == signal.n, "instance: A column count differs from signal dimension");
  require(A.rows() == z.size() && A.rows() == y.size(),
          "instance: A, z, y row counts differ");
  Vector recon = z;
  for (std::size_t j = 0; j < signal.support.size(); ++j)
    recon += signal.values[static_cast<Index>(j)] * A.col(signal.support[j]);
  const double tol = 1e-12 * std::max(1.0, y.lpNorm<Eigen::Infinity>());
  require((recon - y).lpNorm<Eigen::Infinity>() <= tol,
          "instance: y does not equal A x* + z");
}

Index sparsity_rule(Index n) {
  require(n >= 2, "sparsity_rule: n must be at least 2");
  // smallest k with (5k)^2 >= (2)^2 n, i.e. k >= 0.4 sqrt(n), in exact arithmetic
  Index k = static_cast<Index>(std::floor(0.4 * std::sqrt(static_cast<double>(n)))) - 1;
  if (k < 1) k = 1;
  while (25 * k * k < 4 * n) ++k;
  return k;
}

ProblemInstance sample_instance(const EnsembleConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.seed);

  // support: partial Fisher-Yates over [0, n), then sorted
  std::vector<Index> pool(static_cast<std::size_t>(cfg.n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < cfg.k; ++i) {
    const auto j = i + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(cfg.n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  IndexSet support(pool.begin(), pool.begin() + cfg.k);
  std::sort(support.begin(), support.end());

  Vector values(cfg.k);
  switch (cfg.magnitude.kind) {
    case MagnitudeRule::Kind::kRademacher:
      for (Index j = 0; j < cfg.k; ++j) values[j] = rng.next_uniform() < 0.5 ? -1.0 : 1.0;
      break;
    case MagnitudeRule::Kind::kFixed:
      for (Index j = 0; j < cfg.k; ++j)
        values[j] = (rng.next_uniform() < 0.5 ? -1.0 : 1.0) * cfg.magnitude.magnitude;
      break;
    case MagnitudeRule::Kind::kExplicit:
      for (Index j = 0; j < cfg.k; ++j) values[j] = cfg.magnitude.values[static_cast<std::size_t>(j)];
      break;
  }

  ProblemInstance inst;
  inst.config = cfg;
  inst.signal = SparseSignal{cfg.n, std::move(support), std::move(values)};

  inst.A.resize(cfg.m, cfg.n);
  double* a = inst.A.data();  // column-major draw order
  const Index total = cfg.m * cfg.n;
  for (Index t = 0; t < total; ++t) a[t] = rng.next_normal(cfg.sigma_a);

  inst.z.resize(cfg.m);
  for (Index i = 0; i < cfg.m; ++i) inst.z[i] = rng.next_normal(cfg.sigma_z);

  inst.y = inst.z;
  for (std::size_t j = 0; j < inst.signal.support.size(); ++j)
    inst.y += inst.signal.values[static_cast<Index>(j)] * inst.A.col(inst.signal.support[j]);
  return inst;
}

namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const json& j, Index expect, const char* field) {
  require(j.is_array(), std::string("instance json: ") + field + " must be an array");
  if (expect >= 0)
    require(static_cast<Index>(j.size()) == expect,
            std::string("instance json: ") + field + " has the wrong length");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), std::string("instance json: ") + field + " must hold numbers");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace

std::string instance_to_json(const ProblemInstance& inst) {
  json j;
  j["rng"] = std::string(kRngAlgorithm);
  j["n"] = inst.signal.n;
  j["k"] = static_cast<Index>(inst.signal.support.size());
  j["m"] = inst.A.rows();
  j["sigma_a"] = inst.config.sigma_a;
  j["sigma_z"] = inst.config.sigma_z;
  j["seed"] = inst.config.seed;
  j["support"] = inst.signal.support;
  j["values"] = vector_to_json(inst.signal.values);
  json a = json::array();  // row-major
  for (Index i = 0; i < inst.A.rows(); ++i)
    for (Index c = 0; c < inst.A.cols(); ++c) a.push_back(inst.A(i, c));
  j["A"] = std::move(a);
  j["z"] = vector_to_json(inst.z);
  j["y"] = vector_to_json(inst.y);
  return j.dump(2);
}

ProblemInstance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance json: parse failure: ") + e.what());
  }
  try {
    for (const char* field : {"n", "k", "m", "sigma_a", "sigma_z", "seed", "support",
                              "values", "A", "z", "y"})
      require(j.contains(field), std::string("instance json: missing field '") + field + "'");

    ProblemInstance inst;
    const Index n = j["n"].get<Index>();
    const Index k = j["k"].get<Index>();
    const Index m = j["m"].get<Index>();
    require(n >= 2 && k >= 1 && k < n && m >= 1, "instance json: bad dimensions");

    inst.signal.n = n;
    require(j["support"].is_array() && static_cast<Index>(j["support"].size()) == k,
            "instance json: support must be an array of length k");
    for (const auto& s : j["support"]) inst.signal.support.push_back(s.get<Index>());
    inst.signal.values = vector_from_json(j["values"], k, "values");
    inst.signal.validate();

    const json& a = j["A"];
    require(a.is_array() && static_cast<Index>(a.size()) == m * n,
            "instance json: A must be a row-major array of length m*n");
    inst.A.resize(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index c = 0; c < n; ++c)
        inst.A(i, c) = a[static_cast<std::size_t>(i * n + c)].get<double>();

    inst.z = vector_from_json(j["z"], m, "z");
    inst.y = vector_from_json(j["y"], m, "y");

    inst.config.n = n;
    inst.config.k = k;
    inst.config.m = m;
    inst.config.sigma_a = j["sigma_a"].get<double>();
    inst.config.sigma_z = j["sigma_z"].get<double>();
    inst.config.seed = j["seed"].get<std::uint64_t>();
    std::vector<double> vals(inst.signal.values.data(),
                             inst.signal.values.data() + inst.signal.values.size());
    inst.config.magnitude = MagnitudeRule::explicit_values(std::move(vals));
    inst.config.validate();

    inst.validate();
    return inst;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance json: malformed field: ") + e.what());
  }
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write instance file: " + path);
  out << instance_to_json(inst) << '\n';
}

}  // namespace wl1
