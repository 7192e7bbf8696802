#include "pwell/integrator.hpp"

#include "pwell/norms.hpp"
#include "pwell/source.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwell {

namespace {

constexpr double kDampingRegularization = 1e-12;

// Boundary damping nonlinearity |s|^{m-2} s and its derivative. For
// 2 <= m < 3 the modulus is regularized as (s^2 + sigma^2)^{(m-2)/2} s,
// which keeps the Jacobian finite at s = 0 (and is exact for m = 2).
double damping_value(double s, double m) {
  if (m < 3.0) {
    const double sq = s * s + kDampingRegularization * kDampingRegularization;
    return std::pow(sq, 0.5 * (m - 2.0)) * s;
  }
  if (s == 0.0) return 0.0;
  return std::pow(std::abs(s), m - 2.0) * s;
}

double damping_derivative(double s, double m) {
  if (m < 3.0) {
    const double sig2 = kDampingRegularization * kDampingRegularization;
    const double sq = s * s + sig2;
    return std::pow(sq, 0.5 * (m - 4.0)) * ((m - 1.0) * s * s + sig2);
  }
  if (s == 0.0) return 0.0;
  return (m - 1.0) * std::pow(std::abs(s), m - 2.0);
}

double state_norm(const State& state, const DiscreteOperators& ops) {
  return std::sqrt(ops.K.quad_form(state.u)) + std::sqrt(ops.M.quad_form(state.v));
}

bool all_finite(const std::vector<double>& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

} // namespace

bool reached_horizon(const Trajectory& trajectory) {
  if (trajectory.rows.empty()) return false;
  const double t_last = trajectory.rows.back().snap.t;
  return t_last >= trajectory.horizon_T * (1.0 - 1e-12) - 1e-300;
}

const char* to_string(RunOutcome::Kind kind) {
  switch (kind) {
    case RunOutcome::Kind::Decayed: return "Decayed";
    case RunOutcome::Kind::BlownUp: return "BlownUp";
    case RunOutcome::Kind::Grew: return "Grew";
    case RunOutcome::Kind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

StepResult step(const State& state, double dt, const DiscreteOperators& ops,
                const ProblemParams& params, const SimConfig& cfg) {
  if (dt <= 0.0 || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be > 0");
  const std::size_t n = ops.n();
  if (state.u.size() != n || state.v.size() != n) {
    throw std::invalid_argument("step: state/operator dimension mismatch");
  }
  const std::size_t g1 = ops.gamma1_index;
  const double inv_a = ops.boundary_mass;
  const double half_dt = 0.5 * dt;

  StepResult result;

  // Unknown is the midpoint velocity w: u+ = u + dt*w, v+ = 2w - v, and
  //   (M+B) w + (dt/2)(dt/2 + alpha) K w + (dt/2) r b_m(w)
  //     - (dt/2) f_p(u + (dt/2) w)  =  (M+B) v - (dt/2) K u  =: rhs.
  std::vector<double> rhs = ops.M.apply(state.v);
  rhs[g1] += inv_a * state.v[g1];
  {
    const std::vector<double> ku = ops.K.apply(state.u);
    for (std::size_t i = 0; i < n; ++i) rhs[i] -= half_dt * ku[i];
  }
  if (!all_finite(rhs)) {
    result.failure = "non-finite right-hand side";
    return result;
  }
  double rhs_inf = 0.0;
  for (double v : rhs) rhs_inf = std::max(rhs_inf, std::abs(v));
  const double res_tol = cfg.newton_tol * (1.0 + rhs_inf);

  std::vector<double> w = state.v;
  std::vector<double> u_mid(n), residual(n);
  const double stiff_coef = half_dt * (half_dt + params.alpha);

  auto eval_residual = [&](const std::vector<double>& w_cur) {
    for (std::size_t i = 0; i < n; ++i) u_mid[i] = state.u[i] + half_dt * w_cur[i];
    ops.M.apply(w_cur, residual);
    residual[g1] += inv_a * w_cur[g1];
    const std::vector<double> kw = ops.K.apply(w_cur);
    const std::vector<double> f = source_load(ops, u_mid, params.p, params.source_sign);
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] += stiff_coef * kw[i] - half_dt * f[i] - rhs[i];
    }
    residual[g1] += half_dt * params.r * inv_a * damping_value(w_cur[g1], params.m);
  };

  bool converged = false;
  for (int it = 0; it < cfg.newton_max; ++it) {
    eval_residual(w);
    if (!all_finite(residual)) {
      result.failure = "non-finite Newton residual";
      return result;
    }

    SymTridiag jac = ops.M;
    jac.diag[g1] += inv_a;
    jac.add_scaled(ops.K, stiff_coef);
    jac.diag[g1] += half_dt * params.r * inv_a * damping_derivative(w[g1], params.m);
    if (params.source_sign != 0) {
      const SymTridiag src = source_jacobian(ops, u_mid, params.p, params.source_sign);
      jac.add_scaled(src, -half_dt * half_dt);
    }

    std::vector<double> neg_res(n);
    for (std::size_t i = 0; i < n; ++i) neg_res[i] = -residual[i];
    auto delta = solve_tridiag(jac, neg_res);
    if (!delta) {
      result.failure = "singular Newton system";
      return result;
    }
    for (std::size_t i = 0; i < n; ++i) w[i] += (*delta)[i];
    result.newton_iterations = it + 1;

    eval_residual(w);
    if (!all_finite(residual) || !all_finite(w)) {
      result.failure = "non-finite Newton iterate";
      return result;
    }
    double res_inf = 0.0;
    for (double v : residual) res_inf = std::max(res_inf, std::abs(v));
    if (res_inf < res_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    result.failure = "Newton did not converge";
    return result;
  }

  State next;
  next.t = state.t + dt;
  next.u.resize(n);
  next.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.u[i] = state.u[i] + dt * w[i];
    next.v[i] = 2.0 * w[i] - state.v[i];
  }

  const double norm_before = state_norm(state, ops);
  const double norm_after = state_norm(next, ops);
  if (!std::isfinite(norm_after)) {
    result.failure = "non-finite state";
    return result;
  }
  if (norm_after > cfg.growth_cap * norm_before && norm_after > 0.0) {
    result.failure = "per-step growth cap exceeded";
    return result;
  }

  result.ok = true;
  result.next = std::move(next);
  return result;
}

namespace {

void validate_config(const SimConfig& cfg) {
  if (!(cfg.dt_min > 0.0 && cfg.dt_min <= cfg.dt0 && cfg.dt0 <= cfg.dt_max)) {
    throw std::invalid_argument("run: need 0 < dt_min <= dt0 <= dt_max");
  }
  if (!(cfg.t_end > 0.0)) throw std::invalid_argument("run: t_end must be > 0");
  if (!(cfg.blowup_threshold > 0.0)) throw std::invalid_argument("run: threshold must be > 0");
  if (!(cfg.growth_cap > 1.0)) throw std::invalid_argument("run: growth_cap must be > 1");
  if (cfg.snapshot_stride < 1) throw std::invalid_argument("run: snapshot_stride must be >= 1");
  if (!(cfg.newton_tol > 0.0) || cfg.newton_max < 1) {
    throw std::invalid_argument("run: Newton settings out of range");
  }
}

} // namespace

RunResult run(const State& initial, const DiscreteOperators& ops, const ProblemParams& params,
              const SimConfig& cfg) {
  validate_config(cfg);
  {
    const ValidationReport report = validate_params(params, ValidationPurpose::Simulate);
    if (!report.ok()) {
      throw std::invalid_argument("run: invalid parameters: " + report.violations.front());
    }
  }

  RunResult result;
  Trajectory& traj = result.trajectory;
  traj.horizon_T = cfg.t_end;

  State state = initial;
  state.t = 0.0;

  const std::size_t g1 = ops.gamma1_index;
  const double inv_a = ops.boundary_mass;

  // Leading theta coefficient alpha*||grad u0||^2 + r*||u0||^2_{2,G1}.
  const double grad0 = ops.K.quad_form(state.u);
  const double trace0_sq = inv_a * state.u[g1] * state.u[g1];
  const double theta_lead = params.alpha * grad0 + params.r * trace0_sq;

  TrajectoryRow row;
  auto record = [&](double dt_used) {
    row.snap = energy_snapshot(state, ops, params);
    row.snap.dt_used = dt_used;
    row.theta = row.snap.u_l2_sq + inv_a * row.snap.trace_u * row.snap.trace_u +
                params.alpha * row.int_grad_sq + params.r * row.int_trace_sq +
                (cfg.t_end - state.t) * theta_lead;
    traj.rows.push_back(row);
  };
  record(0.0);

  double dt = cfg.dt0;
  int consecutive_accepts = 0;
  int steps_since_snapshot = 0;
  long accepted = 0;
  const double t_tiny = 1e-12 * cfg.t_end;

  std::vector<double> u_mid(ops.n()), v_mid(ops.n());

  while (state.t < cfg.t_end - t_tiny) {
    const double dt_eff = std::min(dt, cfg.t_end - state.t);
    StepResult sr = step(state, dt_eff, ops, params, cfg);

    if (!sr.ok) {
      if (dt <= cfg.dt_min * (1.0 + 1e-12)) {
        const double nrm = state_norm(state, ops);
        if (nrm > cfg.blowup_threshold) {
          result.outcome.kind = RunOutcome::Kind::BlownUp;
          result.outcome.t_star = state.t;
          result.outcome.dt_final = dt;
          result.outcome.reason = sr.failure;
        } else {
          result.outcome.kind = RunOutcome::Kind::Inconclusive;
          result.outcome.reason =
              "time step collapsed to dt_min without threshold crossing: " + sr.failure;
        }
        if (steps_since_snapshot > 0) record(dt_eff);
        return result;
      }
      dt = std::max(0.5 * dt, cfg.dt_min);
      consecutive_accepts = 0;
      continue;
    }

    for (std::size_t i = 0; i < ops.n(); ++i) {
      u_mid[i] = 0.5 * (state.u[i] + sr.next.u[i]);
      v_mid[i] = 0.5 * (state.v[i] + sr.next.v[i]);
    }
    row.diss_interior += dt_eff * params.alpha * ops.K.quad_form(v_mid);
    row.diss_boundary +=
        dt_eff * params.r * inv_a * damping_value(v_mid[g1], params.m) * v_mid[g1];
    row.int_grad_sq += dt_eff * ops.K.quad_form(u_mid);
    row.int_trace_sq += dt_eff * inv_a * u_mid[g1] * u_mid[g1];
    row.cross_interior += dt_eff * params.alpha * ops.K.bilinear(u_mid, v_mid);
    row.cross_boundary += dt_eff * params.r * inv_a * u_mid[g1] * v_mid[g1];

    state = std::move(sr.next);
    ++accepted;
    ++steps_since_snapshot;
    if (++consecutive_accepts >= 10) {
      dt = std::min(dt * 1.2, cfg.dt_max);
      consecutive_accepts = 0;
    }

    const bool done = state.t >= cfg.t_end - t_tiny;
    if (steps_since_snapshot >= cfg.snapshot_stride || done) {
      record(dt_eff);
      steps_since_snapshot = 0;
    }
    if (accepted >= cfg.max_steps) {
      if (steps_since_snapshot > 0) record(dt_eff);
      result.outcome.kind = RunOutcome::Kind::Inconclusive;
      result.outcome.reason = "step budget exhausted";
      return result;
    }
  }

  result.outcome.kind = RunOutcome::Kind::Inconclusive;
  result.outcome.reason = "reached t_end";
  return result;
}

double dissipation_residual(const Trajectory& trajectory) {
  if (trajectory.rows.size() < 2) {
    throw std::invalid_argument("dissipation_residual: needs at least two snapshots");
  }
  const double E0 = trajectory.rows.front().snap.E;
  double worst = 0.0;
  for (const TrajectoryRow& row : trajectory.rows) {
    const double balance = row.snap.E + row.diss_interior + row.diss_boundary - E0;
    worst = std::max(worst, std::abs(balance));
  }
  return worst / std::max(E0, 1e-30);
}

} // namespace pwell
