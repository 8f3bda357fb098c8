#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "wl1/ensemble.hpp"
#include "wl1/harness.hpp"
#include "wl1/oracle.hpp"
#include "wl1/rng.hpp"
#include "wl1/solver.hpp"
#include "wl1/theory.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted l1 sparse recovery: solver, certificates, oracle and "
            "phase-transition harness";

  py::register_exception<wl1::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<wl1::NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.attr("ORACLE_MAX_DIMENSION") = wl1::kOracleMaxDimension;
  m.attr("RNG_ALGORITHM") = std::string(wl1::kRngAlgorithm);

  // rng
  py::class_<wl1::SplitMix64>(m, "SplitMix64")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &wl1::SplitMix64::next_u64)
      .def("next_uniform", &wl1::SplitMix64::next_uniform)
      .def("next_below", &wl1::SplitMix64::next_below, py::arg("bound"))
      .def("next_normal", py::overload_cast<>(&wl1::SplitMix64::next_normal))
      .def("next_normal", py::overload_cast<double>(&wl1::SplitMix64::next_normal),
           py::arg("sigma"));

  m.def(
      "derive_seed",
      [](std::uint64_t master, const std::vector<std::uint64_t>& path) {
        return wl1::derive_seed(master, path.data(), path.size());
      },
      py::arg("master"), py::arg("path"));

  // ensemble
  py::class_<wl1::MagnitudeRule>(m, "MagnitudeRule")
      .def_static("rademacher", &wl1::MagnitudeRule::rademacher)
      .def_static("fixed", &wl1::MagnitudeRule::fixed, py::arg("magnitude"))
      .def_static("explicit_values", &wl1::MagnitudeRule::explicit_values,
                  py::arg("values"))
      .def_readonly("magnitude", &wl1::MagnitudeRule::magnitude)
      .def_readonly("values", &wl1::MagnitudeRule::values);

  py::class_<wl1::EnsembleConfig>(m, "EnsembleConfig")
      .def(py::init([](wl1::Index n, wl1::Index k, wl1::Index m, double sigma_a,
                       double sigma_z, const wl1::MagnitudeRule& magnitude,
                       std::uint64_t seed) {
             wl1::EnsembleConfig cfg;
             cfg.n = n;
             cfg.k = k;
             cfg.m = m;
             cfg.sigma_a = sigma_a;
             cfg.sigma_z = sigma_z;
             cfg.magnitude = magnitude;
             cfg.seed = seed;
             return cfg;
           }),
           py::arg("n"), py::arg("k"), py::arg("m"), py::arg("sigma_a") = 1.0,
           py::arg("sigma_z") = 0.0,
           py::arg("magnitude") = wl1::MagnitudeRule::rademacher(),
           py::arg("seed") = 0)
      .def_readwrite("n", &wl1::EnsembleConfig::n)
      .def_readwrite("k", &wl1::EnsembleConfig::k)
      .def_readwrite("m", &wl1::EnsembleConfig::m)
      .def_readwrite("sigma_a", &wl1::EnsembleConfig::sigma_a)
      .def_readwrite("sigma_z", &wl1::EnsembleConfig::sigma_z)
      .def_readwrite("magnitude", &wl1::EnsembleConfig::magnitude)
      .def_readwrite("seed", &wl1::EnsembleConfig::seed)
      .def("validate", &wl1::EnsembleConfig::validate);

  py::class_<wl1::SparseSignal>(m, "SparseSignal")
      .def_readonly("n", &wl1::SparseSignal::n)
      .def_readonly("support", &wl1::SparseSignal::support)
      .def_readonly("values", &wl1::SparseSignal::values)
      .def("dense", &wl1::SparseSignal::dense)
      .def("sign_pattern", &wl1::SparseSignal::sign_pattern);

  py::class_<wl1::ProblemInstance>(m, "ProblemInstance")
      .def_readonly("A", &wl1::ProblemInstance::A)
      .def_readonly("z", &wl1::ProblemInstance::z)
      .def_readonly("y", &wl1::ProblemInstance::y)
      .def_readonly("signal", &wl1::ProblemInstance::signal)
      .def_readonly("config", &wl1::ProblemInstance::config);

  m.def("sparsity_rule", &wl1::sparsity_rule, py::arg("n"));
  m.def("sample_instance", &wl1::sample_instance, py::arg("config"));
  m.def("sign_pattern", py::overload_cast<const wl1::Vector&>(&wl1::sign_pattern),
        py::arg("x"));
  m.def("instance_to_json", &wl1::instance_to_json, py::arg("instance"));
  m.def("instance_from_json", &wl1::instance_from_json, py::arg("text"));
  m.def("load_instance", &wl1::load_instance, py::arg("path"));
  m.def("save_instance", &wl1::save_instance, py::arg("instance"), py::arg("path"));

  // solver
  py::class_<wl1::WeightVector>(m, "WeightVector")
      .def(py::init<wl1::Vector>(), py::arg("values"))
      .def_static("uniform", &wl1::WeightVector::uniform, py::arg("n"),
                  py::arg("value"))
      .def_static("support_weight", &wl1::WeightVector::support_weight, py::arg("n"),
                  py::arg("support"), py::arg("on"), py::arg("off") = 1.0)
      .def_property_readonly("values", &wl1::WeightVector::values)
      .def("__len__", &wl1::WeightVector::size)
      .def("__getitem__",
           [](const wl1::WeightVector& w, wl1::Index i) {
             if (i < 0 || i >= w.size()) throw py::index_error();
             return w[i];
           });

  py::enum_<wl1::StepRule>(m, "StepRule")
      .value("backtracking", wl1::StepRule::kBacktracking)
      .value("fixed", wl1::StepRule::kFixed);

  py::class_<wl1::SolverConfig>(m, "SolverConfig")
      .def(py::init([](double h, int max_iters, double tol_kkt, double tol_obj,
                       wl1::StepRule step_rule) {
             wl1::SolverConfig cfg;
             cfg.h = h;
             cfg.max_iters = max_iters;
             cfg.tol_kkt = tol_kkt;
             cfg.tol_obj = tol_obj;
             cfg.step_rule = step_rule;
             return cfg;
           }),
           py::arg("h"), py::arg("max_iters") = 50000, py::arg("tol_kkt") = 1e-9,
           py::arg("tol_obj") = 0.0,
           py::arg("step_rule") = wl1::StepRule::kBacktracking)
      .def_readwrite("h", &wl1::SolverConfig::h)
      .def_readwrite("max_iters", &wl1::SolverConfig::max_iters)
      .def_readwrite("tol_kkt", &wl1::SolverConfig::tol_kkt)
      .def_readwrite("tol_obj", &wl1::SolverConfig::tol_obj)
      .def_readwrite("step_rule", &wl1::SolverConfig::step_rule)
      .def("validate", &wl1::SolverConfig::validate);

  py::class_<wl1::SolveResult>(m, "SolveResult")
      .def_readonly("x_hat", &wl1::SolveResult::x_hat)
      .def_readonly("iterations", &wl1::SolveResult::iterations)
      .def_readonly("objective_trace", &wl1::SolveResult::objective_trace)
      .def_readonly("kkt_residual", &wl1::SolveResult::kkt_residual)
      .def_readonly("converged", &wl1::SolveResult::converged);

  m.def("objective", &wl1::objective, py::arg("A"), py::arg("y"), py::arg("x"),
        py::arg("w"), py::arg("h"));
  m.def("soft_threshold", &wl1::soft_threshold, py::arg("v"), py::arg("tau"));
  m.def("kkt_residual", &wl1::kkt_residual, py::arg("A"), py::arg("y"), py::arg("x"),
        py::arg("w"), py::arg("h"));
  m.def("solve_weighted_l1",
        py::overload_cast<const wl1::Matrix&, const wl1::Vector&,
                          const wl1::WeightVector&, const wl1::SolverConfig&>(
            &wl1::solve_weighted_l1),
        py::arg("A"), py::arg("y"), py::arg("w"), py::arg("config"));
  m.def("solve_weighted_l1",
        py::overload_cast<const wl1::ProblemInstance&, const wl1::WeightVector&,
                          const wl1::SolverConfig&>(&wl1::solve_weighted_l1),
        py::arg("instance"), py::arg("w"), py::arg("config"));

  py::class_<wl1::DualFeasibilityReport>(m, "DualFeasibilityReport")
      .def_readonly("strict", &wl1::DualFeasibilityReport::strict)
      .def_readonly("margin", &wl1::DualFeasibilityReport::margin)
      .def_readonly("full_rank", &wl1::DualFeasibilityReport::full_rank)
      .def_readonly("support", &wl1::DualFeasibilityReport::support);

  m.def("strict_dual_feasibility", &wl1::strict_dual_feasibility, py::arg("A"),
        py::arg("y"), py::arg("x"), py::arg("w"), py::arg("h"));

  // theory
  m.def("xi_of", &wl1::xi_of, py::arg("w"), py::arg("support"));
  m.def("eta_of", &wl1::eta_of, py::arg("w"), py::arg("support"));
  m.def("x_dagger",
        py::overload_cast<const wl1::Matrix&, const wl1::Vector&,
                          const wl1::SparseSignal&, const wl1::WeightVector&, double>(
            &wl1::x_dagger),
        py::arg("A"), py::arg("z"), py::arg("signal"), py::arg("w"), py::arg("h"));
  m.def("x_dagger",
        py::overload_cast<const wl1::ProblemInstance&, const wl1::WeightVector&,
                          double>(&wl1::x_dagger),
        py::arg("instance"), py::arg("w"), py::arg("h"));

  py::class_<wl1::RecoveryCertificate>(m, "RecoveryCertificate")
      .def_readonly("event1_holds", &wl1::RecoveryCertificate::event1_holds)
      .def_readonly("event1_margin", &wl1::RecoveryCertificate::event1_margin)
      .def_readonly("event2_holds", &wl1::RecoveryCertificate::event2_holds)
      .def_readonly("x_dagger", &wl1::RecoveryCertificate::x_dagger);

  m.def("check_recovery_events",
        py::overload_cast<const wl1::Matrix&, const wl1::Vector&,
                          const wl1::SparseSignal&, const wl1::WeightVector&, double>(
            &wl1::check_recovery_events),
        py::arg("A"), py::arg("z"), py::arg("signal"), py::arg("w"), py::arg("h"));
  m.def("check_recovery_events",
        py::overload_cast<const wl1::ProblemInstance&, const wl1::WeightVector&,
                          double>(&wl1::check_recovery_events),
        py::arg("instance"), py::arg("w"), py::arg("h"));

  m.def("sample_threshold", &wl1::sample_threshold, py::arg("n"), py::arg("k"),
        py::arg("eta"), py::arg("h"), py::arg("sigma_z"), py::arg("sigma_a"),
        py::arg("eps_prime"));
  m.def("select_h", &wl1::select_h, py::arg("m"), py::arg("n"), py::arg("k"),
        py::arg("eta"), py::arg("sigma_z"), py::arg("sigma_a"), py::arg("phi_n"));
  m.def("gap", &wl1::gap, py::arg("h"), py::arg("w"), py::arg("support"), py::arg("m"),
        py::arg("sigma_z"), py::arg("sigma_a"), py::arg("c3") = 1.0);
  m.def("rescaled_theta", &wl1::rescaled_theta, py::arg("m"), py::arg("n"),
        py::arg("k"));

  // oracle
  py::class_<wl1::CertifiedPattern>(m, "CertifiedPattern")
      .def_readonly("support", &wl1::CertifiedPattern::support)
      .def_readonly("signs", &wl1::CertifiedPattern::signs)
      .def_readonly("x", &wl1::CertifiedPattern::x)
      .def_readonly("objective", &wl1::CertifiedPattern::objective)
      .def_readonly("dual_margin", &wl1::CertifiedPattern::dual_margin);

  py::class_<wl1::OracleResult>(m, "OracleResult")
      .def_readonly("x_opt", &wl1::OracleResult::x_opt)
      .def_readonly("support", &wl1::OracleResult::support)
      .def_readonly("signs", &wl1::OracleResult::signs)
      .def_readonly("objective", &wl1::OracleResult::objective)
      .def_readonly("dual_margin", &wl1::OracleResult::dual_margin)
      .def_readonly("unique", &wl1::OracleResult::unique)
      .def_readonly("certified_count", &wl1::OracleResult::certified_count);

  m.def("enumerate_certificates", &wl1::enumerate_certificates, py::arg("A"),
        py::arg("y"), py::arg("w"), py::arg("h"));
  m.def("brute_force_minimum", &wl1::brute_force_minimum, py::arg("A"), py::arg("y"),
        py::arg("w"), py::arg("h"));

  // harness
  py::class_<wl1::WeightScheme>(m, "WeightScheme")
      .def_static("uniform", &wl1::WeightScheme::uniform)
      .def_static("support_weight", &wl1::WeightScheme::support_weight, py::arg("ws"))
      .def_static("per_index_weights", &wl1::WeightScheme::per_index_weights,
                  py::arg("values"))
      .def("weights_for", &wl1::WeightScheme::weights_for, py::arg("signal"));

  py::enum_<wl1::HRule>(m, "HRule")
      .value("point_eta", wl1::HRule::kPointEta)
      .value("unit_eta", wl1::HRule::kUnitEta);

  py::class_<wl1::SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("n_list", &wl1::SweepConfig::n_list)
      .def_readwrite("k", &wl1::SweepConfig::k)
      .def_readwrite("m_list", &wl1::SweepConfig::m_list)
      .def_readwrite("theta_min", &wl1::SweepConfig::theta_min)
      .def_readwrite("theta_max", &wl1::SweepConfig::theta_max)
      .def_readwrite("theta_steps", &wl1::SweepConfig::theta_steps)
      .def_readwrite("trials", &wl1::SweepConfig::trials)
      .def_readwrite("weight_scheme", &wl1::SweepConfig::weight_scheme)
      .def_readwrite("sigma_z", &wl1::SweepConfig::sigma_z)
      .def_readwrite("sigma_a", &wl1::SweepConfig::sigma_a)
      .def_readwrite("phi_n", &wl1::SweepConfig::phi_n)
      .def_readwrite("h", &wl1::SweepConfig::h)
      .def_readwrite("h_rule", &wl1::SweepConfig::h_rule)
      .def_readwrite("master_seed", &wl1::SweepConfig::master_seed)
      .def_readwrite("success_definition", &wl1::SweepConfig::success_definition)
      .def_readwrite("check_certificates", &wl1::SweepConfig::check_certificates)
      .def_readwrite("solver", &wl1::SweepConfig::solver)
      .def("validate", &wl1::SweepConfig::validate);

  m.def("sweep_config_from_json", &wl1::sweep_config_from_json, py::arg("text"));
  m.def("load_sweep_config", &wl1::load_sweep_config, py::arg("path"));

  py::class_<wl1::TrialOutcome>(m, "TrialOutcome")
      .def_readonly("seed", &wl1::TrialOutcome::seed)
      .def_readonly("success", &wl1::TrialOutcome::success)
      .def_readonly("converged", &wl1::TrialOutcome::converged)
      .def_readonly("kkt_residual", &wl1::TrialOutcome::kkt_residual)
      .def_readonly("iterations", &wl1::TrialOutcome::iterations)
      .def_readonly("eta", &wl1::TrialOutcome::eta)
      .def_readonly("h", &wl1::TrialOutcome::h)
      .def_readonly("certificate_checked", &wl1::TrialOutcome::certificate_checked)
      .def_readonly("event1_holds", &wl1::TrialOutcome::event1_holds)
      .def_readonly("event2_holds", &wl1::TrialOutcome::event2_holds);

  py::class_<wl1::SweepRecord>(m, "SweepRecord")
      .def_readonly("n", &wl1::SweepRecord::n)
      .def_readonly("k", &wl1::SweepRecord::k)
      .def_readonly("m", &wl1::SweepRecord::m)
      .def_readonly("theta", &wl1::SweepRecord::theta)
      .def_readonly("eta", &wl1::SweepRecord::eta)
      .def_readonly("h", &wl1::SweepRecord::h)
      .def_readonly("trials", &wl1::SweepRecord::trials)
      .def_readonly("successes", &wl1::SweepRecord::successes)
      .def_readonly("prob", &wl1::SweepRecord::prob)
      .def_readonly("master_seed", &wl1::SweepRecord::master_seed)
      .def_readonly("event_both", &wl1::SweepRecord::event_both);

  m.def("run_trial", &wl1::run_trial, py::arg("config"), py::arg("n"), py::arg("k"),
        py::arg("m"), py::arg("trial_index"));
  m.def("run_sweep", &wl1::run_sweep, py::arg("config"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());

  m.def("records_to_csv", &wl1::records_to_csv, py::arg("records"));
  m.def("records_from_csv", &wl1::records_from_csv, py::arg("text"));
  m.def("emit_csv", &wl1::emit_csv, py::arg("records"), py::arg("path"));
  m.def("read_csv", &wl1::read_csv, py::arg("path"));

  py::enum_<wl1::PlotAxis>(m, "PlotAxis")
      .value("theta", wl1::PlotAxis::kTheta)
      .value("sample_size", wl1::PlotAxis::kSampleSize);

  m.def("render_svg", &wl1::render_svg, py::arg("records"),
        py::arg("axis") = wl1::PlotAxis::kTheta);
  m.def("emit_plot", &wl1::emit_plot, py::arg("records"), py::arg("path"),
        py::arg("axis") = wl1::PlotAxis::kTheta);
  m.def("isotonic_fit", &wl1::isotonic_fit, py::arg("values"));
  m.def("crossing_theta", &wl1::crossing_theta, py::arg("records"), py::arg("level"));
}
