#pragma once

#include "pwell/functionals.hpp"
#include "pwell/operators.hpp"
#include "pwell/state.hpp"

#include <string>
#include <vector>

namespace pwell {

struct SimConfig {
  double dt0 = 1e-3;
  double dt_min = 1e-12;
  double dt_max = 1e-2;
  double t_end = 10.0;
  double newton_tol = 1e-12;
  int newton_max = 25;
  double blowup_threshold = 1e8; ///< on ||grad u||_2 + ||u_t||_2
  double growth_cap = 10.0;      ///< max per-step ratio of that norm
  int snapshot_stride = 10;      ///< accepted steps between snapshots
  long max_steps = 10000000;     ///< safety cap on accepted steps
};

/// One recorded time: the state functionals plus the running time
/// integrals evaluated at that snapshot.
struct TrajectoryRow {
  EnergySnapshot snap;
  double diss_interior = 0.0;  ///< alpha * int ||grad u_t||^2 ds
  double diss_boundary = 0.0;  ///< r * int ||u_t||^m_{m,G1} ds
  double int_grad_sq = 0.0;    ///< int ||grad u||^2 ds
  double int_trace_sq = 0.0;   ///< int ||u||^2_{2,G1} ds
  double cross_interior = 0.0; ///< alpha * int (grad u, grad u_t) ds
  double cross_boundary = 0.0; ///< r * int u u_t / a ds on Gamma1
  double theta = 0.0;          ///< concavity functional with T = horizon
};

/// All running integrals use the midpoint of every accepted step, which
/// matches the scheme exactly: the cross integrals telescope and the
/// discrete Cauchy-Schwarz combination stays nonnegative.
struct Trajectory {
  std::vector<TrajectoryRow> rows;
  double horizon_T = 0.0;        ///< the T baked into theta (= configured t_end)
  bool exact_cross_terms = true; ///< false when rebuilt from a CSV
};

/// True when the last snapshot reached the configured horizon.
bool reached_horizon(const Trajectory& trajectory);

struct RunOutcome {
  enum class Kind { Decayed, BlownUp, Grew, Inconclusive };
  Kind kind = Kind::Inconclusive;
  // Decayed
  double xi_hat = 0.0;
  double c_hat = 0.0;
  double r2 = 0.0;
  // BlownUp
  double t_star = 0.0;
  double dt_final = 0.0;
  // Grew
  double lp_rate = 0.0;
  std::string reason; ///< Inconclusive reason / free-form note
};

const char* to_string(RunOutcome::Kind kind);

struct StepResult {
  bool ok = false;
  State next;
  int newton_iterations = 0;
  std::string failure; ///< empty on success
};

/// One implicit-midpoint step solved by Newton with the analytic
/// Jacobian. Fails (for the driver to halve dt) when Newton stalls, the
/// linear solve degenerates, or the per-step growth exceeds growth_cap.
StepResult step(const State& state, double dt, const DiscreteOperators& ops,
                const ProblemParams& params, const SimConfig& cfg);

struct RunResult {
  Trajectory trajectory;
  RunOutcome outcome;
};

/// Drives step() with dt adaptation (halve on failure, grow 1.2x after 10
/// consecutive acceptances, clamp to [dt_min, dt_max]). Declares BlownUp
/// only when the norm threshold is crossed AND dt has collapsed to dt_min
/// under repeated failures; a collapse without the crossing yields
/// Inconclusive. A run that reaches t_end returns Inconclusive with
/// reason "reached t_end" — final classification is the analysis step.
RunResult run(const State& initial, const DiscreteOperators& ops, const ProblemParams& params,
              const SimConfig& cfg);

/// max over snapshots of |E(t) + dissipated(t) - E(0)| / max(E(0), 1e-30).
/// Requires at least two snapshots.
double dissipation_residual(const Trajectory& trajectory);

} // namespace pwell
