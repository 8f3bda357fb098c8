#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wl1/harness.hpp"
#include "wl1/oracle.hpp"

namespace {

using nlohmann::json;
using namespace wl1;

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write output file: " + path);
  out << text << '\n';
}

/// --weights accepts "uniform:<v>", "support:<ws>", or a JSON-array file path.
WeightVector parse_weights(const std::string& spec, const ProblemInstance& inst) {
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const std::string tail = spec.substr(colon + 1);
    if (head == "uniform" || head == "support") {
      char* end = nullptr;
      const double v = std::strtod(tail.c_str(), &end);
      if (end != tail.c_str() + tail.size() || tail.empty())
        throw ValidationError("weights: bad value '" + tail + "' in '" + spec + "'");
      if (head == "uniform") return WeightVector::uniform(inst.signal.n, v);
      return WeightVector::support_weight(inst.signal.n, inst.signal.support, v);
    }
  }
  std::ifstream in(spec);
  if (!in) throw ValidationError("weights: cannot open file '" + spec + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("weights: parse failure: ") + e.what());
  }
  if (!j.is_array() || static_cast<Index>(j.size()) != inst.signal.n)
    throw ValidationError("weights: file must hold a JSON array of length n");
  Vector v(inst.signal.n);
  for (Index i = 0; i < inst.signal.n; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return WeightVector(std::move(v));
}

/// --h accepts a positive number or "auto" (penalty rule with the instance's
/// noise level and the weights' eta).
double parse_h(const std::string& spec, const ProblemInstance& inst, const WeightVector& w,
               double phi_n) {
  if (spec == "auto") {
    const double eta = eta_of(w, inst.signal.support);
    return select_h(static_cast<double>(inst.A.rows()), inst.signal.n,
                    static_cast<Index>(inst.signal.support.size()), eta,
                    inst.config.sigma_z, inst.config.sigma_a, phi_n);
  }
  char* end = nullptr;
  const double h = std::strtod(spec.c_str(), &end);
  if (end != spec.c_str() + spec.size() || spec.empty())
    throw ValidationError("h: expected a number or 'auto', got '" + spec + "'");
  return h;
}

int run_gen(Index n, Index k, Index m, double sigma_a, double sigma_z,
            const std::string& magnitude, std::uint64_t seed, const std::string& out) {
  EnsembleConfig cfg;
  cfg.n = n;
  cfg.k = k >= 1 ? k : sparsity_rule(n);
  cfg.m = m;
  cfg.sigma_a = sigma_a;
  cfg.sigma_z = sigma_z;
  cfg.seed = seed;
  if (magnitude == "rademacher") {
    cfg.magnitude = MagnitudeRule::rademacher();
  } else if (magnitude.rfind("fixed:", 0) == 0) {
    const std::string tail = magnitude.substr(6);
    char* end = nullptr;
    const double mu = std::strtod(tail.c_str(), &end);
    if (end != tail.c_str() + tail.size() || tail.empty())
      throw ValidationError("magnitude: bad value in '" + magnitude + "'");
    cfg.magnitude = MagnitudeRule::fixed(mu);
  } else {
    throw ValidationError("magnitude: expected 'rademacher' or 'fixed:<mu>'");
  }
  const ProblemInstance inst = sample_instance(cfg);
  write_output(instance_to_json(inst), out);
  std::cerr << "generated n=" << cfg.n << " k=" << cfg.k << " m=" << cfg.m
            << " seed=" << cfg.seed << " rng=" << kRngAlgorithm << '\n';
  return 0;
}

int run_solve(const std::string& problem, const std::string& weights_spec,
              const std::string& h_spec, double phi_n, int max_iters, double tol_kkt,
              const std::string& out) {
  const ProblemInstance inst = load_instance(problem);
  const WeightVector w = parse_weights(weights_spec, inst);
  SolverConfig cfg;
  cfg.h = parse_h(h_spec, inst, w, phi_n);
  cfg.max_iters = max_iters;
  cfg.tol_kkt = tol_kkt;
  const SolveResult res = solve_weighted_l1(inst, w, cfg);

  json j;
  j["x_hat"] = vector_to_json(res.x_hat);
  j["kkt_residual"] = res.kkt_residual;
  j["iterations"] = res.iterations;
  j["objective"] = objective(inst.A, inst.y, res.x_hat, w, cfg.h);
  j["converged"] = res.converged;
  write_output(j.dump(2), out);
  return res.converged ? 0 : 2;
}

int run_check(const std::string& problem, const std::string& weights_spec,
              const std::string& h_spec, double phi_n, const std::string& out) {
  const ProblemInstance inst = load_instance(problem);
  const WeightVector w = parse_weights(weights_spec, inst);
  const double h = parse_h(h_spec, inst, w, phi_n);
  const RecoveryCertificate cert = check_recovery_events(inst, w, h);

  json j;
  j["event1_holds"] = cert.event1_holds;
  j["event1_margin"] = cert.event1_margin;
  j["event2_holds"] = cert.event2_holds;
  j["x_dagger"] = vector_to_json(cert.x_dagger);
  j["h"] = h;
  write_output(j.dump(2), out);
  return 0;
}

int run_predict(Index n, Index k, double eta, double sigma_z, double sigma_a, double phi_n,
                double m, double eps_prime, double c3) {
  ScalingParams params;
  params.eta = eta;
  params.xi = eta;  // support-weight scheme with off-support 1: xi = eta
  params.epsilon_prime = eps_prime;
  params.phi_n = phi_n;
  params.c3 = c3;
  params.validate();

  const double h = select_h(m, n, k, eta, sigma_z, sigma_a, phi_n);
  const double m_star = sample_threshold(n, k, eta, h, sigma_z, sigma_a, eps_prime);
  const double theta_star = rescaled_theta(m_star, n, k);
  const double noise_factor =
      1.0 + (sigma_z * sigma_z * sigma_a * sigma_a) / (h * h * static_cast<double>(k));

  // g(h) for the canonical scheme: support weights sqrt(eta), off-support 1
  IndexSet support(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) support[static_cast<std::size_t>(i)] = i;
  const WeightVector w = WeightVector::support_weight(n, support, std::sqrt(eta));
  const double g = gap(h, w, support, m, sigma_z, sigma_a, c3);

  std::printf("penalty h (rule at m=%.17g)        : %.17g\n", m, h);
  std::printf("sample threshold m* (at this h)    : %.17g\n", m_star);
  std::printf("theta(m*)                          : %.17g\n", theta_star);
  std::printf("factor 1 + eps'                    : %.17g\n", 1.0 + eps_prime);
  std::printf("factor 1 + sz^2 sa^2 / (h^2 k)     : %.17g\n", noise_factor);
  std::printf("theta(m*) / eta (their product)    : %.17g\n", theta_star / eta);
  std::printf("gap g(h), support w = sqrt(eta)    : %.17g\n", g);
  return 0;
}

int run_oracle(const std::string& problem, const std::string& weights_spec,
               const std::string& h_spec, double phi_n, const std::string& out) {
  const ProblemInstance inst = load_instance(problem);
  const WeightVector w = parse_weights(weights_spec, inst);
  const double h = parse_h(h_spec, inst, w, phi_n);
  const OracleResult res = brute_force_minimum(inst.A, inst.y, w, h);

  json j;
  j["x_opt"] = vector_to_json(res.x_opt);
  j["support"] = res.support;
  j["signs"] = res.signs;
  j["objective"] = res.objective;
  j["dual_margin"] = res.dual_margin;
  j["unique"] = res.unique;
  j["certified_count"] = res.certified_count;
  write_output(j.dump(2), out);
  return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out, int threads) {
  const SweepConfig cfg = load_sweep_config(config_path);
  const std::vector<SweepRecord> records = run_sweep(cfg, threads);
  emit_csv(records, out);
  std::cerr << "wrote " << records.size() << " records to " << out << '\n';
  return 0;
}

int run_plot(const std::string& csv_path, const std::string& axis, const std::string& out) {
  if (axis != "theta" && axis != "m")
    throw ValidationError("plot: --x must be 'theta' or 'm'");
  const std::vector<SweepRecord> records = read_csv(csv_path);
  emit_plot(records, out, axis == "theta" ? PlotAxis::kTheta : PlotAxis::kSampleSize);
  std::cerr << "wrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted l1 support recovery toolkit"};
  app.require_subcommand(1);
  // --h is a real option below, so help lives on --help alone
  app.set_help_flag("--help", "print help");

  // gen
  auto* gen = app.add_subcommand("gen", "sample a problem instance to JSON");
  Index g_n = 0, g_k = 0, g_m = 0;
  double g_sa = 1.0, g_sz = 0.5;
  std::string g_mag = "rademacher", g_out;
  std::uint64_t g_seed = 0;
  gen->add_option("--n", g_n, "ambient dimension")->required();
  gen->add_option("--k", g_k, "sparsity (default: ceil(0.4 sqrt(n)))");
  gen->add_option("--m", g_m, "sample count")->required();
  gen->add_option("--sigma-a", g_sa, "sensing matrix entry std dev");
  gen->add_option("--sigma-z", g_sz, "noise std dev");
  gen->add_option("--magnitude", g_mag, "rademacher | fixed:<mu>");
  gen->add_option("--seed", g_seed, "instance seed")->required();
  gen->add_option("--out", g_out, "output path (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve the weighted l1 program");
  std::string s_problem, s_weights = "uniform:1.0", s_h = "auto", s_out;
  double s_phi = 9.0, s_tol = 1e-9;
  int s_iters = 50000;
  solve->add_option("--problem", s_problem, "instance JSON file")->required();
  solve->add_option("--weights", s_weights, "uniform:<v> | support:<ws> | weight file");
  solve->add_option("--h", s_h, "penalty level or 'auto'");
  solve->add_option("--phi-n", s_phi, "phi_n for --h auto");
  solve->add_option("--max-iters", s_iters, "iteration cap");
  solve->add_option("--tol-kkt", s_tol, "KKT residual tolerance");
  solve->add_option("--out", s_out, "result path (default stdout)");

  // check
  auto* check = app.add_subcommand("check", "evaluate the recovery certificate");
  std::string c_problem, c_weights = "uniform:1.0", c_h = "auto", c_out;
  double c_phi = 9.0;
  check->add_option("--problem", c_problem, "instance JSON file")->required();
  check->add_option("--weights", c_weights, "uniform:<v> | support:<ws> | weight file");
  check->add_option("--h", c_h, "penalty level or 'auto'");
  check->add_option("--phi-n", c_phi, "phi_n for --h auto");
  check->add_option("--out", c_out, "output path (default stdout)");

  // predict
  auto* predict = app.add_subcommand("predict", "closed-form scaling predictions");
  Index p_n = 0, p_k = 0;
  double p_eta = 1.0, p_sz = 0.5, p_sa = 1.0, p_phi = 9.0, p_m = 0.0, p_eps = 0.0,
         p_c3 = 1.0;
  predict->add_option("--n", p_n, "ambient dimension")->required();
  predict->add_option("--k", p_k, "sparsity")->required();
  predict->add_option("--eta", p_eta, "weight ratio eta");
  predict->add_option("--sigma-z", p_sz, "noise std dev");
  predict->add_option("--sigma-a", p_sa, "sensing std dev");
  predict->add_option("--phi-n", p_phi, "penalty rule constant");
  predict->add_option("--m", p_m, "sample count for the h rule")->required();
  predict->add_option("--epsilon-prime", p_eps, "slack factor eps'");
  predict->add_option("--c3", p_c3, "gap constant");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive minimizer (n <= 14)");
  std::string o_problem, o_weights = "uniform:1.0", o_h, o_out;
  double o_phi = 9.0;
  oracle->add_option("--problem", o_problem, "instance JSON file")->required();
  oracle->add_option("--weights", o_weights, "uniform:<v> | support:<ws> | weight file");
  oracle->add_option("--h", o_h, "penalty level or 'auto'")->required();
  oracle->add_option("--out", o_out, "output path (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a phase-transition sweep");
  std::string w_config, w_out;
  int w_threads = 0;
  sweep->add_option("--config", w_config, "sweep config JSON")->required();
  sweep->add_option("--out", w_out, "output CSV path")->required();
  sweep->add_option("--threads", w_threads, "worker threads (default: hardware)");

  // plot
  auto* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
  std::string q_csv, q_axis = "theta", q_out;
  plot->add_option("--csv", q_csv, "input CSV path")->required();
  plot->add_option("--x", q_axis, "x axis: theta | m");
  plot->add_option("--out", q_out, "output SVG path")->required();

  for (CLI::App* sub : app.get_subcommands(nullptr))
    sub->set_help_flag("--help", "print help");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return run_gen(g_n, g_k, g_m, g_sa, g_sz, g_mag, g_seed, g_out);
    if (solve->parsed())
      return run_solve(s_problem, s_weights, s_h, s_phi, s_iters, s_tol, s_out);
    if (check->parsed()) return run_check(c_problem, c_weights, c_h, c_phi, c_out);
    if (predict->parsed())
      return run_predict(p_n, p_k, p_eta, p_sz, p_sa, p_phi, p_m, p_eps, p_c3);
    if (oracle->parsed()) return run_oracle(o_problem, o_weights, o_h, o_phi, o_out);
    if (sweep->parsed()) return run_sweep_cmd(w_config, w_out, w_threads);
    if (plot->parsed()) return run_plot(q_csv, q_axis, q_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
