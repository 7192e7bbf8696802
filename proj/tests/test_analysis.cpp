#include <doctest.h>

#include "pwell/analysis.hpp"
#include "pwell/profiles.hpp"

#include <cmath>
#include <stdexcept>

using namespace pwell;

namespace {

Trajectory synthetic_energy_series(const std::vector<double>& ts,
                                   const std::vector<double>& es, double horizon) {
  Trajectory traj;
  traj.horizon_T = horizon;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    TrajectoryRow row;
    row.snap.t = ts[i];
    row.snap.E = es[i];
    traj.rows.push_back(row);
  }
  return traj;
}

struct DampedRun {
  ScenarioConfig cfg;
  ScenarioSetup setup;
  RunResult result;

  explicit DampedRun(TargetSetConfig target, double margin, double t_end,
                     int source_sign = 1, std::size_t n = 48) {
    cfg.domain.n_elements = n;
    cfg.params.p = 4.0;
    cfg.params.m = 2.0;
    cfg.params.alpha = 1.0;
    cfg.params.r = 1.0;
    cfg.params.source_sign = source_sign;
    cfg.initial.profile.kind = ProfileKind::SobolevMinimizer;
    cfg.initial.target_set = target;
    cfg.initial.margin = margin;
    cfg.time.t_end = t_end;
    cfg.time.dt_min = 1e-13;
    cfg.output.snapshot_stride = 5;
    cfg.constants.restarts = 0;
    setup = prepare_scenario(cfg, true);
    result = run(setup.initial, setup.ops, cfg.params, cfg.sim_config());
  }
};

} // namespace

TEST_CASE("fit_decay recovers an exact exponential") {
  std::vector<double> ts, es;
  for (int i = 0; i < 100; ++i) {
    const double t = 0.1 * i;
    ts.push_back(t);
    es.push_back(3.0 * std::exp(-2.0 * t));
  }
  const Trajectory traj = synthetic_energy_series(ts, es, ts.back());
  const DecayFit fit = fit_decay(traj, 1.0);
  CHECK(fit.xi_hat == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.c_hat == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fit_decay tolerates a small oscillation") {
  std::vector<double> ts, es;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.05 * i;
    ts.push_back(t);
    es.push_back(3.0 * std::exp(-2.0 * t) * (1.0 + 0.01 * std::sin(20.0 * t)));
  }
  const Trajectory traj = synthetic_energy_series(ts, es, ts.back());
  const DecayFit fit = fit_decay(traj, 1.0);
  CHECK(std::abs(fit.xi_hat - 2.0) / 2.0 < 0.02);
}

TEST_CASE("fit_decay edge cases") {
  // Constant series: xi = 0, never a Decayed verdict.
  std::vector<double> ts, es;
  for (int i = 0; i < 50; ++i) {
    ts.push_back(0.1 * i);
    es.push_back(1.0);
  }
  Trajectory traj = synthetic_energy_series(ts, es, ts.back());
  const DecayFit fit = fit_decay(traj, 0.5);
  CHECK(fit.xi_hat == doctest::Approx(0.0));
  ProblemParams params;
  RunOutcome evidence;
  evidence.reason = "reached t_end";
  const RunOutcome verdict = classify_run(traj, evidence, params);
  CHECK(verdict.kind != RunOutcome::Kind::Decayed);

  // Non-positive energy in the window.
  traj.rows[40].snap.E = 0.0;
  CHECK_THROWS_AS(fit_decay(traj, 0.5), std::invalid_argument);

  // Too few points.
  const Trajectory tiny = synthetic_energy_series({0.0, 1.0}, {1.0, 0.5}, 1.0);
  CHECK_THROWS_AS(fit_decay(tiny, 1.0), std::invalid_argument);
}

TEST_CASE("theta of the zero trajectory vanishes") {
  ProblemParams params;
  const Mesh1D mesh = build_mesh(16, 1.0);
  const DiscreteOperators ops = assemble(mesh, params);
  SimConfig cfg;
  cfg.t_end = 1.0;
  cfg.snapshot_stride = 5;
  const RunResult rr = run(zero_state(ops.n()), ops, params, cfg);
  const ThetaDiagnostics diag = theta_diagnostics(rr.trajectory, params, 0.25);
  for (double th : diag.theta) CHECK(th == 0.0);
  CHECK(diag.concavity_defect == doctest::Approx(0.0));
  CHECK(diag.gamma == doctest::Approx(0.5));
  CHECK(diag.eta_nonneg_ok);
}

TEST_CASE("stable run passes the report card; eta stays nonnegative") {
  DampedRun stable(TargetSetConfig::StableW, 0.5, 6.0);
  REQUIRE(reached_horizon(stable.result.trajectory));

  const double E0 = stable.result.trajectory.rows.front().snap.E;
  const ReportCard card = verify_stable_run(stable.result.trajectory, *stable.setup.constants,
                                            E0, stable.cfg.time.newton_tol);
  for (const auto& check : card.checks) {
    INFO(check.name, ": ", check.detail);
    CHECK(check.passed);
  }

  const ThetaDiagnostics diag =
      theta_diagnostics(stable.result.trajectory, stable.cfg.params, 0.25);
  CHECK(diag.eta_exact_route);
  CHECK(diag.eta_nonneg_ok);

  // A decreasing Lyapunov eps exists for the damped stable run.
  const auto eps = find_decreasing_lyapunov_eps(stable.result.trajectory, stable.cfg.params);
  CHECK(eps.has_value());
}

TEST_CASE("unstable run: blow-up verdict, concavity, beta crossing, zeta bound") {
  DampedRun unstable(TargetSetConfig::UnstableU, 0.2, 40.0);
  REQUIRE(unstable.result.outcome.kind == RunOutcome::Kind::BlownUp);

  const RunOutcome verdict = classify_run(unstable.result.trajectory, unstable.result.outcome,
                                          unstable.cfg.params);
  CHECK(verdict.kind == RunOutcome::Kind::BlownUp);

  const double d = unstable.setup.constants->d;
  const ThetaDiagnostics diag =
      theta_diagnostics(unstable.result.trajectory, unstable.cfg.params, 0.25, d);

  CHECK(diag.eta_nonneg_ok);
  CHECK(diag.concavity_defect >= -1e-6 * diag.concavity_scale);
  CHECK(diag.beta_crossing_checked);
  CHECK(diag.beta_crossing_ok);
  // zeta >= (p-2) * dissipation along the whole unstable trajectory.
  CHECK(diag.zeta_lower_min >= -1e-6 * std::abs(diag.zeta.back()));

  // Check (i) of the stable card must fail at t = 0 on unstable data.
  const double E0 = unstable.result.trajectory.rows.front().snap.E;
  const ReportCard card = verify_stable_run(unstable.result.trajectory,
                                            *unstable.setup.constants, E0, 1e-10);
  REQUIRE_FALSE(card.checks.empty());
  CHECK(card.checks.front().name == "nehari_positive");
  CHECK_FALSE(card.checks.front().passed);
  CHECK(card.checks.front().first_violation_time == doctest::Approx(0.0));
}

TEST_CASE("source off keeps the same unstable data global") {
  DampedRun no_source(TargetSetConfig::UnstableU, 0.2, 6.0, /*source_sign=*/0);
  CHECK(reached_horizon(no_source.result.trajectory));
  const RunOutcome verdict = classify_run(no_source.result.trajectory,
                                          no_source.result.outcome, no_source.cfg.params);
  CHECK(verdict.kind != RunOutcome::Kind::BlownUp);
}

TEST_CASE("classify_run detects synthetic Lp growth") {
  ProblemParams params;
  params.p = 4.0;
  Trajectory traj;
  traj.horizon_T = 10.0;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    TrajectoryRow row;
    row.snap.t = t;
    row.snap.E = 1.0; // flat energy defeats the decay fit
    row.snap.lp_term = std::pow(0.5 * std::exp(0.8 * t), params.p);
    traj.rows.push_back(row);
  }
  RunOutcome evidence;
  evidence.reason = "reached t_end";
  const RunOutcome verdict = classify_run(traj, evidence, params);
  CHECK(verdict.kind == RunOutcome::Kind::Grew);
  CHECK(verdict.lp_rate == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("definitive early-stop evidence passes through classify_run") {
  Trajectory traj = synthetic_energy_series({0.0, 0.1, 0.2}, {1.0, 1.0, 1.0}, 10.0);
  RunOutcome evidence;
  evidence.kind = RunOutcome::Kind::Inconclusive;
  evidence.reason = "time step collapsed to dt_min without threshold crossing: stiff";
  ProblemParams params;
  const RunOutcome verdict = classify_run(traj, evidence, params);
  CHECK(verdict.kind == RunOutcome::Kind::Inconclusive);
  CHECK(verdict.reason == evidence.reason);
}

TEST_CASE("zero-data run passes the report card as a boundary case") {
  ProblemParams params;
  const Mesh1D mesh = build_mesh(16, 1.0);
  const DiscreteOperators ops = assemble(mesh, params);
  SimConfig cfg;
  cfg.t_end = 1.0;
  const RunResult rr = run(zero_state(ops.n()), ops, params, cfg);

  WellConstants consts;
  consts.p = 4.0;
  consts.d = 0.25;
  consts.c_star = 1.0;
  const ReportCard card = verify_stable_run(rr.trajectory, consts, 0.0, cfg.newton_tol);
  CHECK(card.all_passed());
}

TEST_CASE("theta diagnostics warn when the boundary damping is not linear") {
  DampedRun stable(TargetSetConfig::StableW, 0.5, 2.0);
  ProblemParams nonlinear = stable.cfg.params;
  nonlinear.m = 3.0;
  const ThetaDiagnostics diag = theta_diagnostics(stable.result.trajectory, nonlinear, 0.25);
  CHECK_FALSE(diag.warning.empty());
}

TEST_CASE("theta_diagnostics needs five snapshots") {
  Trajectory tiny = synthetic_energy_series({0.0, 0.1, 0.2}, {1.0, 1.0, 1.0}, 0.2);
  ProblemParams params;
  CHECK_THROWS_AS(theta_diagnostics(tiny, params, 0.25), std::invalid_argument);
}
