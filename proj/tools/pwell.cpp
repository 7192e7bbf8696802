// pwell: potential-well laboratory for the damped wave equation with a
// dynamic boundary condition on (0,1).
//
// Subcommands:
//   constants  well constants + mesh-ladder convergence CSV
//   classify   initial-data membership and the energy gate
//   simulate   time integration, trajectory CSV (+ optional SVG)
//   analyze    decay fit / theta diagnostics / report card from a CSV
//   sweep      scaling sweep across the stable/unstable transition
//
// Exit codes: 0 decayed/completed, 2 blown up, 3 grew/inconclusive,
// 1 usage or runtime error.

#include "pwell/analysis.hpp"
#include "pwell/config.hpp"
#include "pwell/csv.hpp"
#include "pwell/functionals.hpp"
#include "pwell/profiles.hpp"
#include "pwell/svg.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

namespace {

using namespace pwell;

int exit_code_for(const RunOutcome& outcome) {
  switch (outcome.kind) {
    case RunOutcome::Kind::Decayed: return 0;
    case RunOutcome::Kind::BlownUp: return 2;
    case RunOutcome::Kind::Grew: return 3;
    case RunOutcome::Kind::Inconclusive: return 3;
  }
  return 3;
}

const char* region_name(NehariRegion region) {
  switch (region) {
    case NehariRegion::NPlusInterior: return "N+";
    case NehariRegion::Nehari: return "N";
    case NehariRegion::NMinus: return "N-";
  }
  return "?";
}

unsigned sweep_thread_cap() {
  if (const char* env = std::getenv("PWELL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void print_outcome(const RunOutcome& outcome) {
  std::cout << "verdict=" << to_string(outcome.kind) << "\n";
  switch (outcome.kind) {
    case RunOutcome::Kind::Decayed:
      std::cout << "xi_hat=" << format_double(outcome.xi_hat) << "\n"
                << "c_hat=" << format_double(outcome.c_hat) << "\n"
                << "r2=" << format_double(outcome.r2) << "\n";
      break;
    case RunOutcome::Kind::BlownUp:
      std::cout << "t_star=" << format_double(outcome.t_star) << "\n"
                << "dt_final=" << format_double(outcome.dt_final) << "\n";
      break;
    case RunOutcome::Kind::Grew:
      std::cout << "lp_rate=" << format_double(outcome.lp_rate) << "\n";
      break;
    case RunOutcome::Kind::Inconclusive:
      std::cout << "reason=" << outcome.reason << "\n";
      break;
  }
}

int cmd_constants(const ScenarioConfig& cfg) {
  std::vector<std::size_t> ladder;
  for (std::size_t n = cfg.domain.n_elements; n >= 16 && ladder.size() < 4; n /= 2) {
    ladder.push_back(n);
  }
  std::reverse(ladder.begin(), ladder.end());
  if (ladder.empty()) ladder.push_back(cfg.domain.n_elements);

  std::vector<ConstantsRow> rows;
  WellConstants last{};
  for (std::size_t n : ladder) {
    const Mesh1D mesh = build_mesh(n, cfg.domain.grading);
    last = well_constants(mesh, cfg.params.p, cfg.constants);
    rows.push_back({n, last.c_star, last.d, last.beta, last.d_direct, last.residual});
  }
  write_constants_csv(rows, cfg.output.csv_path);

  std::cout << "c_star=" << format_double(last.c_star) << "\n"
            << "d=" << format_double(last.d) << "\n"
            << "beta=" << format_double(last.beta) << "\n"
            << "d_direct=" << format_double(last.d_direct) << "\n"
            << "residual=" << format_double(last.residual) << "\n"
            << "mesh_size=" << last.mesh_size << "\n"
            << "p=" << format_double(last.p) << "\n"
            << "convergence_csv=" << cfg.output.csv_path << "\n";
  return 0;
}

int cmd_classify(const ScenarioConfig& cfg) {
  const ScenarioSetup setup = prepare_scenario(cfg, /*need_constants=*/true);
  const EnergySnapshot snap = energy_snapshot(setup.initial, setup.ops, cfg.params);
  const WellConstants& consts = *setup.constants;
  const SetMembership membership = classify_state(setup.initial, consts.d, setup.ops, cfg.params);
  const bool gate = initial_energy_gate(std::max(snap.E, 0.0), consts);

  std::cout << "lambda=" << format_double(setup.lambda_applied) << "\n"
            << "I0=" << format_double(snap.I) << "\n"
            << "J0=" << format_double(snap.J) << "\n"
            << "E0=" << format_double(snap.E) << "\n"
            << "region=" << region_name(membership.region) << "\n"
            << "in_stable_W=" << (membership.in_stable_W ? "true" : "false") << "\n"
            << "in_unstable_U=" << (membership.in_unstable_U ? "true" : "false") << "\n"
            << "E_below_d=" << (membership.E_below_d ? "true" : "false") << "\n"
            << "gate=" << (gate ? "true" : "false") << "\n"
            << "d=" << format_double(consts.d) << "\n"
            << "beta=" << format_double(consts.beta) << "\n"
            << "c_star=" << format_double(consts.c_star) << "\n";
  return 0;
}

int cmd_simulate(const ScenarioConfig& cfg) {
  const bool need_constants = cfg.initial.target_set != TargetSetConfig::None;
  const ScenarioSetup setup = prepare_scenario(cfg, need_constants);

  const RunResult result = run(setup.initial, setup.ops, cfg.params, cfg.sim_config());
  const RunOutcome verdict =
      classify_run(result.trajectory, result.outcome, cfg.params, cfg.analysis.window_fraction);

  write_trajectory_csv(result.trajectory, cfg.output.csv_path);
  if (!cfg.output.svg_path.empty()) {
    write_trajectory_svg(result.trajectory, cfg.output.svg_path);
  }

  std::cout << "snapshots=" << result.trajectory.rows.size() << "\n"
            << "t_final=" << format_double(result.trajectory.rows.back().snap.t) << "\n"
            << "csv=" << cfg.output.csv_path << "\n";
  if (setup.lambda_applied != 1.0) {
    std::cout << "lambda=" << format_double(setup.lambda_applied) << "\n";
  }
  if (verdict.kind == RunOutcome::Kind::Decayed) {
    if (const auto eps = find_decreasing_lyapunov_eps(result.trajectory, cfg.params)) {
      std::cout << "lyapunov_eps=" << format_double(*eps) << "\n";
    }
  }
  print_outcome(verdict);
  return exit_code_for(verdict);
}

int cmd_analyze(const ScenarioConfig& cfg) {
  const Trajectory traj = read_trajectory_csv(cfg.output.csv_path, cfg.time.t_end);
  if (traj.rows.empty()) throw std::runtime_error("analyze: trajectory CSV holds no rows");

  // Reconstruct the integrator evidence from the stored columns: a run
  // that stopped early with dt at dt_min and a large norm was a blow-up.
  RunOutcome evidence;
  evidence.kind = RunOutcome::Kind::Inconclusive;
  if (reached_horizon(traj)) {
    evidence.reason = "reached t_end";
  } else {
    const auto& last = traj.rows.back().snap;
    const double norm = std::sqrt(std::max(last.grad_sq, 0.0)) +
                        std::sqrt(std::max(2.0 * last.kinetic, 0.0));
    if (last.dt_used <= cfg.time.dt_min * 1.01 && norm > cfg.time.theta_threshold) {
      evidence.kind = RunOutcome::Kind::BlownUp;
      evidence.t_star = last.t;
      evidence.dt_final = last.dt_used;
    } else {
      evidence.reason = "run ended before t_end (reconstructed from CSV)";
    }
  }

  const RunOutcome verdict = classify_run(traj, evidence, cfg.params, cfg.analysis.window_fraction);

  const Mesh1D mesh = build_mesh(cfg.domain.n_elements, cfg.domain.grading);
  SolverOptions opts = cfg.constants;
  opts.restarts = 0;
  const WellConstants consts = well_constants(mesh, cfg.params.p, opts);

  const double E0 = traj.rows.front().snap.E;
  const ReportCard card = verify_stable_run(traj, consts, E0, cfg.time.newton_tol);

  std::vector<std::pair<std::string, std::string>> report;
  report.emplace_back("verdict", to_string(verdict.kind));
  std::cout << "verdict=" << to_string(verdict.kind) << "\n";

  try {
    const DecayFit fit = fit_decay(traj, cfg.analysis.window_fraction);
    report.emplace_back("xi_hat", format_double(fit.xi_hat));
    report.emplace_back("c_hat", format_double(fit.c_hat));
    report.emplace_back("r2", format_double(fit.r2));
    report.emplace_back("fit_window_lo", format_double(fit.window_lo));
    report.emplace_back("fit_window_hi", format_double(fit.window_hi));
    std::cout << "xi_hat=" << format_double(fit.xi_hat) << " c_hat=" << format_double(fit.c_hat)
              << " r2=" << format_double(fit.r2) << "\n";
  } catch (const std::invalid_argument& err) {
    report.emplace_back("decay_fit_error", err.what());
    std::cout << "decay_fit_error=" << err.what() << "\n";
  }

  if (traj.rows.size() >= 5) {
    const ThetaDiagnostics diag =
        theta_diagnostics(traj, cfg.params, cfg.analysis.t0_fraction, consts.d);
    report.emplace_back("gamma", format_double(diag.gamma));
    report.emplace_back("concavity_defect", format_double(diag.concavity_defect));
    report.emplace_back("concavity_scale", format_double(diag.concavity_scale));
    report.emplace_back("eta_min", format_double(diag.eta_min));
    report.emplace_back("eta_scale", format_double(diag.eta_scale));
    report.emplace_back("eta_nonneg_ok", diag.eta_nonneg_ok ? "true" : "false");
    report.emplace_back("beta_sq", format_double(diag.beta_sq));
    report.emplace_back("beta_crossing_ok", diag.beta_crossing_ok ? "true" : "false");
    report.emplace_back("zeta_lower_min", format_double(diag.zeta_lower_min));
    report.emplace_back("theta_horizon", format_double(diag.horizon_T));
    if (!diag.warning.empty()) report.emplace_back("theta_warning", diag.warning);
    std::cout << "concavity_defect=" << format_double(diag.concavity_defect)
              << " (scale " << format_double(diag.concavity_scale) << ")\n"
              << "eta_min=" << format_double(diag.eta_min)
              << " eta_nonneg_ok=" << (diag.eta_nonneg_ok ? "true" : "false") << "\n";
  } else {
    report.emplace_back("theta_diagnostics_error", "fewer than 5 snapshots");
  }

  for (const CheckResult& check : card.checks) {
    report.emplace_back("check_" + check.name, check.passed ? "pass" : "fail");
    std::cout << "check " << check.name << ": " << (check.passed ? "pass" : "FAIL") << " ("
              << check.detail << ")\n";
  }

  // Opportunistic converse scan on blow-up runs: the first snapshot
  // sitting in the unstable set with E <= d. Absence on the discrete
  // grid is not a refutation.
  if (verdict.kind == RunOutcome::Kind::BlownUp) {
    bool found = false;
    for (const TrajectoryRow& row : traj.rows) {
      if (row.snap.I < 0.0 && row.snap.E <= consts.d) {
        report.emplace_back("blowup_condition_first_time", format_double(row.snap.t));
        std::cout << "blowup_condition_first_time=" << format_double(row.snap.t) << "\n";
        found = true;
        break;
      }
    }
    if (!found) {
      report.emplace_back("blowup_condition_first_time", "not observed on the snapshot grid");
    }
  }

  const std::string report_path = cfg.output.csv_path + ".analysis.csv";
  write_report_csv(report, report_path);
  std::cout << "report_csv=" << report_path << "\n";
  print_outcome(verdict);
  return exit_code_for(verdict);
}

int cmd_sweep(const ScenarioConfig& cfg) {
  ScenarioConfig base_cfg = cfg;
  base_cfg.initial.target_set = TargetSetConfig::None; // sweep scales by hand
  const ScenarioSetup setup = prepare_scenario(base_cfg, /*need_constants=*/false);

  ProblemParams std_params = cfg.params;
  std_params.source_sign = 1;
  const double lstar = lambda_star(setup.initial.u, setup.ops, std_params);

  const int points = cfg.sweep.points;
  std::vector<double> lambdas(points);
  for (int i = 0; i < points; ++i) {
    const double f = cfg.sweep.lambda_lo_factor +
                     (cfg.sweep.lambda_hi_factor - cfg.sweep.lambda_lo_factor) * i / (points - 1);
    lambdas[i] = f * lstar;
  }

  std::vector<SweepRow> rows(points);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= points) return;
      try {
        State init = setup.initial;
        for (double& x : init.u) x *= lambdas[i];
        const EnergySnapshot snap = energy_snapshot(init, setup.ops, cfg.params);
        const RunResult result = run(init, setup.ops, cfg.params, cfg.sim_config());
        SweepRow row;
        row.lambda = lambdas[i];
        row.I0 = snap.I;
        row.J0 = snap.J;
        row.outcome =
            classify_run(result.trajectory, result.outcome, cfg.params, cfg.analysis.window_fraction);
        rows[i] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const unsigned n_threads = std::min<unsigned>(sweep_thread_cap(), points);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  write_sweep_csv(rows, cfg.output.csv_path);

  int transitions = 0;
  for (int i = 0; i + 1 < points; ++i) {
    if (rows[i].outcome.kind == RunOutcome::Kind::Decayed &&
        rows[i + 1].outcome.kind == RunOutcome::Kind::BlownUp) {
      ++transitions;
      std::cout << "transition lambda in (" << format_double(rows[i].lambda) << ", "
                << format_double(rows[i + 1].lambda) << ")\n";
    }
  }
  std::cout << "lambda_star=" << format_double(lstar) << "\n"
            << "points=" << points << "\n"
            << "decayed_to_blownup_transitions=" << transitions << "\n"
            << "csv=" << cfg.output.csv_path << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"pwell: potential-well laboratory for a damped wave equation\n"
               "with a dynamic boundary condition"};
  app.require_subcommand(1);
  app.footer(pwell::config_schema_help());

  std::string config_path;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON scenario config")->required();
    cmd->add_option("--override", overrides,
                    "dotted.path=value applied to the config before parsing");
  };

  CLI::App* constants = app.add_subcommand("constants", "well constants + convergence ladder");
  CLI::App* classify = app.add_subcommand("classify", "initial-data set membership and gate");
  CLI::App* simulate = app.add_subcommand("simulate", "run and write the trajectory CSV");
  CLI::App* analyze = app.add_subcommand("analyze", "post-hoc analysis of a trajectory CSV");
  CLI::App* sweep = app.add_subcommand("sweep", "scaling sweep across the transition");
  for (CLI::App* cmd : {constants, classify, simulate, analyze, sweep}) add_common(cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    const pwell::ScenarioConfig cfg = pwell::load_config(config_path, overrides);
    if (app.got_subcommand(constants)) return cmd_constants(cfg);
    if (app.got_subcommand(classify)) return cmd_classify(cfg);
    if (app.got_subcommand(simulate)) return cmd_simulate(cfg);
    if (app.got_subcommand(analyze)) return cmd_analyze(cfg);
    if (app.got_subcommand(sweep)) return cmd_sweep(cfg);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
