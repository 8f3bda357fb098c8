#include "wl1/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"

namespace wl1 {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

WeightScheme WeightScheme::support_weight(double ws) {
  WeightScheme s;
  s.kind = Kind::kSupportWeight;
  s.support_value = ws;
  return s;
}

WeightScheme WeightScheme::per_index_weights(std::vector<double> values) {
  WeightScheme s;
  s.kind = Kind::kPerIndex;
  s.per_index = std::move(values);
  return s;
}

WeightVector WeightScheme::weights_for(const SparseSignal& signal) const {
  switch (kind) {
    case Kind::kUniform:
      return WeightVector::uniform(signal.n, 1.0);
    case Kind::kSupportWeight:
      return WeightVector::support_weight(signal.n, signal.support, support_value);
    case Kind::kPerIndex: {
      require(static_cast<Index>(per_index.size()) == signal.n,
              "weight_scheme: per-index weights length differs from n");
      Vector v(signal.n);
      for (Index i = 0; i < signal.n; ++i) v[i] = per_index[static_cast<std::size_t>(i)];
      return WeightVector(std::move(v));
    }
  }
  throw ValidationError("weight_scheme: unknown kind");
}

void SweepConfig::validate() const {
  require(!n_list.empty(), "sweep: n_list must be non-empty");
  for (Index n : n_list) {
    require(n >= 3, "sweep: every n must be at least 3");
    const Index kk = k.value_or(sparsity_rule(n));
    require(kk >= 1 && n - kk >= 2, "sweep: need 1 <= k <= n - 2 for every n");
    if (weight_scheme.kind == WeightScheme::Kind::kPerIndex)
      require(static_cast<Index>(weight_scheme.per_index.size()) == n,
              "sweep: per-index weights require a single matching n");
  }
  for (Index m : m_list) require(m >= 1, "sweep: m grid entries must be positive");
  if (m_list.empty()) {
    require(std::isfinite(theta_min) && theta_min > 0.0, "sweep: theta_min must be positive");
    require(std::isfinite(theta_max) && theta_max >= theta_min,
            "sweep: theta_max must be at least theta_min");
    require(theta_steps >= 1, "sweep: theta_steps must be positive");
    require(theta_steps >= 2 || theta_max == theta_min,
            "sweep: a single theta step needs theta_max == theta_min");
  }
  require(trials >= 1, "sweep: trials must be at least 1");
  if (weight_scheme.kind == WeightScheme::Kind::kSupportWeight)
    require(std::isfinite(weight_scheme.support_value) && weight_scheme.support_value > 0.0,
            "sweep: support weight must be positive");
  if (weight_scheme.kind == WeightScheme::Kind::kPerIndex)
    for (double w : weight_scheme.per_index)
      require(std::isfinite(w) && w > 0.0, "sweep: per-index weights must be positive");
  require(std::isfinite(sigma_a) && sigma_a > 0.0, "sweep: sigma_a must be positive");
  require(std::isfinite(sigma_z) && sigma_z >= 0.0, "sweep: sigma_z must be non-negative");
  require(std::isfinite(phi_n) && phi_n >= 2.0, "sweep: phi_n must be at least 2");
  if (h) require(std::isfinite(*h) && *h > 0.0, "sweep: fixed h must be positive");
  if (!h)
    require(sigma_z > 0.0,
            "sweep: sigma_z = 0 makes select_h degenerate; set a fixed h instead");
  require(success_definition == "sign_pattern",
          "sweep: unsupported success_definition (only sign_pattern)");
  require(solver.max_iters >= 1, "sweep: solver.max_iters must be positive");
  require(std::isfinite(solver.tol_kkt) && solver.tol_kkt > 0.0,
          "sweep: solver.tol_kkt must be positive");
  require(std::isfinite(solver.tol_obj) && solver.tol_obj >= 0.0,
          "sweep: solver.tol_obj must be non-negative");
}

TrialOutcome run_trial(const SweepConfig& cfg, Index n, Index k, Index m,
                       int trial_index) {
  TrialOutcome out;
  out.seed = derive_seed(cfg.master_seed,
                         {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m),
                          static_cast<std::uint64_t>(trial_index)});

  EnsembleConfig ec;
  ec.n = n;
  ec.k = k;
  ec.m = m;
  ec.sigma_a = cfg.sigma_a;
  ec.sigma_z = cfg.sigma_z;
  ec.magnitude = MagnitudeRule::rademacher();
  ec.seed = out.seed;
  const ProblemInstance inst = sample_instance(ec);

  const WeightVector w = cfg.weight_scheme.weights_for(inst.signal);
  out.eta = eta_of(w, inst.signal.support);
  if (cfg.h) {
    out.h = *cfg.h;
  } else {
    const double eta_for_h = cfg.h_rule == HRule::kPointEta ? out.eta : 1.0;
    out.h = select_h(static_cast<double>(m), n, k, eta_for_h, cfg.sigma_z, cfg.sigma_a,
                     cfg.phi_n);
  }

  SolverConfig sc = cfg.solver;
  sc.h = out.h;
  const SolveResult res = solve_weighted_l1(inst, w, sc);
  out.converged = res.converged;
  out.kkt_residual = res.kkt_residual;
  out.iterations = res.iterations;
  out.success = res.converged && sign_pattern(res.x_hat) == inst.signal.sign_pattern();

  if (cfg.check_certificates) {
    try {
      const RecoveryCertificate cert = check_recovery_events(inst, w, out.h);
      out.event1_holds = cert.event1_holds;
      out.event2_holds = cert.event2_holds;
      out.certificate_checked = true;
    } catch (const NumericalError&) {
      out.certificate_checked = false;  // rank-deficient support block (m < k)
    }
  }
  return out;
}

namespace {

/// Runs fn(0..count) on `threads` workers; rethrows the first exception.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads) - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<Index> resolve_m_grid(const SweepConfig& cfg, Index n, Index k) {
  if (!cfg.m_list.empty()) {
    std::vector<Index> ms = cfg.m_list;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    return ms;
  }
  const double scale = 2.0 * static_cast<double>(k) * std::log(static_cast<double>(n - k));
  std::vector<Index> ms;
  for (int i = 0; i < cfg.theta_steps; ++i) {
    const double t = cfg.theta_steps == 1
                         ? cfg.theta_min
                         : cfg.theta_min + (cfg.theta_max - cfg.theta_min) *
                                               static_cast<double>(i) /
                                               static_cast<double>(cfg.theta_steps - 1);
    const auto m = static_cast<Index>(std::llround(t * scale));
    ms.push_back(std::max<Index>(1, m));
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  return ms;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, int threads) {
  cfg.validate();

  std::vector<Index> ns = cfg.n_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<SweepRecord> records;
  for (Index n : ns) {
    const Index k = cfg.k.value_or(sparsity_rule(n));
    for (Index m : resolve_m_grid(cfg, n, k)) {
      std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
      parallel_for(cfg.trials, threads, [&](int t) {
        outcomes[static_cast<std::size_t>(t)] = run_trial(cfg, n, k, m, t);
      });

      SweepRecord rec;
      rec.n = n;
      rec.k = k;
      rec.m = m;
      rec.theta = rescaled_theta(static_cast<double>(m), n, k);
      rec.trials = cfg.trials;
      rec.master_seed = cfg.master_seed;
      double eta_sum = 0.0, h_sum = 0.0;
      for (const TrialOutcome& o : outcomes) {
        rec.successes += o.success ? 1 : 0;
        rec.event_both += (o.certificate_checked && o.event1_holds && o.event2_holds) ? 1 : 0;
        eta_sum += o.eta;
        h_sum += o.h;
      }
      rec.prob = static_cast<double>(rec.successes) / static_cast<double>(rec.trials);
      rec.eta = eta_sum / static_cast<double>(rec.trials);
      rec.h = h_sum / static_cast<double>(rec.trials);
      records.push_back(rec);
    }
  }
  return records;
}

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* context) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string(context) + ": parse failure: " + e.what());
  }
}

std::vector<double> weights_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("weight file: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const json j = parse_json(buf.str(), "weight file");
  require(j.is_array(), "weight file: expected a JSON array of weights");
  std::vector<double> values;
  values.reserve(j.size());
  for (const auto& v : j) {
    require(v.is_number(), "weight file: entries must be numbers");
    values.push_back(v.get<double>());
  }
  return values;
}

WeightScheme weight_scheme_from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "sweep config: weight_scheme needs a kind");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "uniform") return WeightScheme::uniform();
  if (kind == "support_weight") {
    require(j.contains("ws"), "sweep config: support_weight scheme needs 'ws'");
    return WeightScheme::support_weight(j["ws"].get<double>());
  }
  if (kind == "per_index") {
    if (j.contains("values")) {
      std::vector<double> values;
      for (const auto& v : j["values"]) values.push_back(v.get<double>());
      return WeightScheme::per_index_weights(std::move(values));
    }
    require(j.contains("path"), "sweep config: per_index scheme needs 'values' or 'path'");
    return WeightScheme::per_index_weights(weights_from_file(j["path"].get<std::string>()));
  }
  throw ValidationError("sweep config: unknown weight_scheme kind '" + kind + "'");
}

}  // namespace

SweepConfig sweep_config_from_json(const std::string& text) {
  const json j = parse_json(text, "sweep config");
  require(j.is_object(), "sweep config: expected a JSON object");

  static const std::set<std::string> known{
      "n_list",     "sparsity",  "m_grid",      "trials",  "weight_scheme",
      "sigma_z",    "sigma_a",   "phi_n",       "h",       "h_rule",
      "master_seed", "success_definition", "check_certificates", "solver"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    require(known.count(key) > 0, "sweep config: unknown field '" + key + "'");
  }

  SweepConfig cfg;
  try {
    require(j.contains("n_list") && j["n_list"].is_array(),
            "sweep config: n_list array is required");
    for (const auto& v : j["n_list"]) cfg.n_list.push_back(v.get<Index>());

    if (j.contains("sparsity")) {
      const json& s = j["sparsity"];
      if (s.is_string()) {
        require(s.get<std::string>() == "rule",
                "sweep config: sparsity must be \"rule\" or {\"k\": value}");
      } else if (s.is_object() && s.contains("k")) {
        cfg.k = s["k"].get<Index>();
      } else if (s.is_number_integer()) {
        cfg.k = s.get<Index>();
      } else {
        throw ValidationError("sweep config: sparsity must be \"rule\", an integer, or {\"k\": value}");
      }
    }

    if (j.contains("m_grid")) {
      const json& g = j["m_grid"];
      if (g.is_array()) {
        for (const auto& v : g) cfg.m_list.push_back(v.get<Index>());
      } else if (g.is_object()) {
        for (const auto& [key, value] : g.items()) {
          (void)value;
          require(key == "theta_min" || key == "theta_max" || key == "steps",
                  "sweep config: m_grid object takes theta_min, theta_max, steps");
        }
        if (g.contains("theta_min")) cfg.theta_min = g["theta_min"].get<double>();
        if (g.contains("theta_max")) cfg.theta_max = g["theta_max"].get<double>();
        if (g.contains("steps")) cfg.theta_steps = g["steps"].get<int>();
      } else {
        throw ValidationError("sweep config: m_grid must be an array of m or a theta grid object");
      }
    }

    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("weight_scheme")) cfg.weight_scheme = weight_scheme_from_json(j["weight_scheme"]);
    if (j.contains("sigma_z")) cfg.sigma_z = j["sigma_z"].get<double>();
    if (j.contains("sigma_a")) cfg.sigma_a = j["sigma_a"].get<double>();
    if (j.contains("phi_n")) cfg.phi_n = j["phi_n"].get<double>();
    if (j.contains("h")) cfg.h = j["h"].get<double>();
    if (j.contains("h_rule")) {
      const std::string rule = j["h_rule"].get<std::string>();
      if (rule == "point_eta")
        cfg.h_rule = HRule::kPointEta;
      else if (rule == "unit_eta")
        cfg.h_rule = HRule::kUnitEta;
      else
        throw ValidationError("sweep config: h_rule must be point_eta or unit_eta");
    }
    if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("success_definition"))
      cfg.success_definition = j["success_definition"].get<std::string>();
    if (j.contains("check_certificates"))
      cfg.check_certificates = j["check_certificates"].get<bool>();

    if (j.contains("solver")) {
      const json& s = j["solver"];
      for (const auto& [key, value] : s.items()) {
        (void)value;
        require(key == "max_iters" || key == "tol_kkt" || key == "tol_obj" || key == "step_rule",
                "sweep config: solver takes max_iters, tol_kkt, tol_obj, step_rule");
      }
      if (s.contains("max_iters")) cfg.solver.max_iters = s["max_iters"].get<int>();
      if (s.contains("tol_kkt")) cfg.solver.tol_kkt = s["tol_kkt"].get<double>();
      if (s.contains("tol_obj")) cfg.solver.tol_obj = s["tol_obj"].get<double>();
      if (s.contains("step_rule")) {
        const std::string rule = s["step_rule"].get<std::string>();
        if (rule == "backtracking")
          cfg.solver.step_rule = StepRule::kBacktracking;
        else if (rule == "fixed")
          cfg.solver.step_rule = StepRule::kFixed;
        else
          throw ValidationError("sweep config: step_rule must be backtracking or fixed");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("sweep config: malformed field: ") + e.what());
  }

  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open sweep config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sweep_config_from_json(buf.str());
}

}  // namespace wl1
