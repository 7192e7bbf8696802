#include "pwell/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pwell {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit fit;
  fit.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  if (syy > 0.0) {
    fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  } else {
    fit.r2 = (ss_res <= 1e-30) ? 1.0 : 0.0;
  }
  return fit;
}

} // namespace

DecayFit fit_decay(const Trajectory& trajectory, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw std::invalid_argument("fit_decay: window_fraction must lie in (0,1]");
  }
  const auto& rows = trajectory.rows;
  if (rows.empty()) throw std::invalid_argument("fit_decay: empty trajectory");
  const double t_lo_all = rows.front().snap.t;
  const double t_hi = rows.back().snap.t;
  const double start = t_hi - window_fraction * (t_hi - t_lo_all);

  std::vector<double> ts, logs;
  for (const auto& row : rows) {
    if (row.snap.t + 1e-300 < start) continue;
    if (!(row.snap.E > 0.0)) {
      std::ostringstream msg;
      msg << "fit_decay: non-positive energy E = " << row.snap.E << " at t = " << row.snap.t;
      throw std::invalid_argument(msg.str());
    }
    ts.push_back(row.snap.t);
    logs.push_back(std::log(row.snap.E));
  }
  if (ts.size() < 10) {
    throw std::invalid_argument("fit_decay: fewer than 10 points in the window");
  }

  const LineFit line = least_squares_line(ts, logs);
  DecayFit fit;
  fit.xi_hat = -line.slope;
  fit.c_hat = std::exp(line.intercept);
  fit.r2 = line.r2;
  fit.window_lo = start;
  fit.window_hi = t_hi;
  fit.points = ts.size();
  return fit;
}

bool ReportCard::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ReportCard verify_stable_run(const Trajectory& trajectory, const WellConstants& constants,
                             double E0, double newton_tol) {
  ReportCard card;
  const auto& rows = trajectory.rows;
  const double p = constants.p;

  auto add = [&card](std::string name, bool passed, double t_viol, std::string detail) {
    card.checks.push_back({std::move(name), passed, passed ? kNaN : t_viol, std::move(detail)});
  };

  // (i) I stays above -tol_I.
  {
    bool ok = true;
    double t_bad = kNaN;
    std::string detail;
    for (const auto& row : rows) {
      const double tol_I = 1e-10 * std::max(row.snap.grad_sq, row.snap.lp_term);
      if (!(row.snap.I > -tol_I) && !(row.snap.grad_sq == 0.0 && row.snap.lp_term == 0.0)) {
        ok = false;
        t_bad = row.snap.t;
        std::ostringstream msg;
        msg << "I = " << row.snap.I << " at t = " << row.snap.t;
        detail = msg.str();
        break;
      }
    }
    add("nehari_positive", ok, t_bad, ok ? "I(t) > -tol_I at every snapshot" : detail);
  }

  // (ii) E non-increasing up to solver slack. The slack also covers the
  // unsigned O(dt^3) midpoint error of the non-quadratic energy part.
  {
    const double slack = 1000.0 * newton_tol * std::max(1.0, E0);
    bool ok = true;
    double t_bad = kNaN;
    std::string detail;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].snap.E > rows[i - 1].snap.E + slack) {
        ok = false;
        t_bad = rows[i].snap.t;
        std::ostringstream msg;
        msg << "E rose by " << rows[i].snap.E - rows[i - 1].snap.E << " at t = " << rows[i].snap.t;
        detail = msg.str();
        break;
      }
    }
    add("energy_nonincreasing", ok, t_bad, ok ? "E non-increasing up to solver slack" : detail);
  }

  // (iii) ||grad u||^2 <= (2p/(p-2)) E0 (1 + 1e-8).
  {
    const double bound = (2.0 * p / (p - 2.0)) * E0 * (1.0 + 1e-8);
    bool ok = true;
    double t_bad = kNaN;
    std::string detail;
    for (const auto& row : rows) {
      if (row.snap.grad_sq > bound) {
        ok = false;
        t_bad = row.snap.t;
        std::ostringstream msg;
        msg << "grad_sq = " << row.snap.grad_sq << " > bound " << bound << " at t = " << row.snap.t;
        detail = msg.str();
        break;
      }
    }
    add("gradient_bound", ok, t_bad, ok ? "grad_sq within (2p/(p-2)) E0" : detail);
  }

  // (iv) 0 < E(t); an identically zero trajectory is a boundary case.
  {
    const bool all_zero = std::all_of(rows.begin(), rows.end(), [](const TrajectoryRow& r) {
      return r.snap.E == 0.0 && r.snap.grad_sq == 0.0 && r.snap.kinetic == 0.0;
    });
    if (all_zero) {
      add("energy_positive", true, kNaN, "identically zero trajectory (boundary case)");
    } else {
      bool ok = true;
      double t_bad = kNaN;
      std::string detail;
      for (const auto& row : rows) {
        if (!(row.snap.E > 0.0)) {
          ok = false;
          t_bad = row.snap.t;
          std::ostringstream msg;
          msg << "E = " << row.snap.E << " at t = " << row.snap.t;
          detail = msg.str();
          break;
        }
      }
      add("energy_positive", ok, t_bad, ok ? "E(t) > 0 at every snapshot" : detail);
    }
  }
  return card;
}

ThetaDiagnostics theta_diagnostics(const Trajectory& trajectory, const ProblemParams& params,
                                   double t0_fraction, std::optional<double> d) {
  const auto& rows = trajectory.rows;
  const std::size_t n = rows.size();
  if (n < 5) {
    throw std::invalid_argument("theta_diagnostics: needs at least 5 snapshots");
  }
  if (!(t0_fraction >= 0.0 && t0_fraction < 1.0)) {
    throw std::invalid_argument("theta_diagnostics: t0_fraction must lie in [0,1)");
  }
  const double p = params.p;

  ThetaDiagnostics diag;
  diag.gamma = 0.25 * (p - 2.0);
  diag.horizon_T = trajectory.horizon_T;
  if (params.m != 2.0) {
    diag.warning = "boundary damping exponent m != 2: zeta/eta assume the linear case";
  }

  diag.t.resize(n);
  diag.theta.resize(n);
  diag.theta_d1.assign(n, kNaN);
  diag.theta_d2.assign(n, kNaN);
  diag.zeta.resize(n);
  diag.eta.assign(n, kNaN);
  for (std::size_t i = 0; i < n; ++i) {
    diag.t[i] = rows[i].snap.t;
    diag.theta[i] = rows[i].theta;
    diag.zeta[i] = -2.0 * p * rows[i].snap.E + (p - 2.0) * rows[i].snap.grad_sq -
                   (p + 2.0) * (rows[i].diss_interior + rows[i].diss_boundary);
  }

  // Non-uniform 3-point divided differences at interior snapshots.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double t0 = diag.t[i - 1], t1 = diag.t[i], t2 = diag.t[i + 1];
    const double f0 = diag.theta[i - 1], f1 = diag.theta[i], f2 = diag.theta[i + 1];
    const double d01 = (f1 - f0) / (t1 - t0);
    const double d12 = (f2 - f1) / (t2 - t1);
    const double dd = (d12 - d01) / (t2 - t0);
    diag.theta_d1[i] = d01 + (t1 - t0) * dd;
    diag.theta_d2[i] = 2.0 * dd;
  }

  // Trailing-row trim: a run that stopped early loses its last 3
  // snapshots, plus any further rows whose stencil spacing no longer
  // resolves the remaining distance to the event. During the step-size
  // collapse the snapshot gaps exceed (t_event - t) and every 3-point
  // estimate there carries O(1) relative error; the trim uses only the
  // time geometry, never the estimates themselves.
  const double t_last = diag.t.back();
  const double t_start = t0_fraction * t_last;
  std::size_t i_hi = n - 2;
  if (!reached_horizon(trajectory)) {
    std::size_t cut = n - 5;
    while (cut >= 1) {
      const double stencil = std::max(diag.t[cut + 1] - diag.t[cut],
                                      diag.t[cut] - diag.t[cut - 1]);
      if (stencil <= 0.25 * (t_last - diag.t[cut])) break;
      --cut;
    }
    i_hi = cut;
  }

  // eta: the Cauchy-Schwarz combination. With the integrator's own cross
  // accumulators the pairing is discretely exact at every snapshot; a
  // CSV-rebuilt trajectory falls back to theta'/2 for the pointwise
  // part, which is a derivative estimate: it gets the resolved rows
  // only and a correspondingly coarse tolerance.
  diag.eta_exact_route = trajectory.exact_cross_terms;
  const double theta_lead = params.alpha * rows[0].snap.grad_sq +
                            params.r * rows[0].snap.trace_u * rows[0].snap.trace_u / params.a;
  double eta_min = std::numeric_limits<double>::infinity();
  double eta_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    const double bracket2 = 2.0 * row.snap.kinetic + 2.0 * row.snap.boundary_kinetic +
                            row.diss_interior + row.diss_boundary;
    double bracket1, bracket3;
    if (trajectory.exact_cross_terms) {
      bracket1 = row.snap.u_l2_sq + row.snap.trace_u * row.snap.trace_u / params.a +
                 params.alpha * row.int_grad_sq + params.r * row.int_trace_sq;
      bracket3 = row.snap.uv_product + row.cross_interior + row.cross_boundary;
    } else {
      if (i < 1 || i > i_hi || std::isnan(diag.theta_d1[i])) continue;
      bracket1 = row.theta - (trajectory.horizon_T - row.snap.t) * theta_lead;
      bracket3 = 0.5 * diag.theta_d1[i];
    }
    const double value = bracket1 * bracket2 - bracket3 * bracket3;
    diag.eta[i] = value;
    eta_min = std::min(eta_min, value);
    eta_scale = std::max(eta_scale, std::abs(bracket1 * bracket2));
  }
  diag.eta_min = std::isfinite(eta_min) ? eta_min : 0.0;
  diag.eta_scale = std::max(eta_scale, 1e-300);
  diag.eta_tol = (diag.eta_exact_route ? 1e-10 : 1e-2) * diag.eta_scale;
  diag.eta_nonneg_ok = diag.eta_min >= -diag.eta_tol;
  double defect = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  double neg_gamma_d2_max = -std::numeric_limits<double>::infinity();
  bool window_nonempty = false;
  bool theta_positive = true;
  diag.window_lo = t_start;
  diag.window_hi = diag.t[std::min(i_hi, n - 1)];
  for (std::size_t i = 1; i <= i_hi && i + 1 < n; ++i) {
    if (diag.t[i] + 1e-300 < t_start) continue;
    window_nonempty = true;
    const double th = diag.theta[i];
    const double combo = th * diag.theta_d2[i] - 0.25 * (p + 2.0) * diag.theta_d1[i] * diag.theta_d1[i];
    defect = std::min(defect, combo);
    scale = std::max(scale, std::abs(th * diag.theta_d2[i]) +
                                0.25 * (p + 2.0) * diag.theta_d1[i] * diag.theta_d1[i]);
    if (th > 0.0 && diag.theta[i - 1] > 0.0 && diag.theta[i + 1] > 0.0) {
      const double g = diag.gamma;
      const double f0 = std::pow(diag.theta[i - 1], -g);
      const double f1 = std::pow(th, -g);
      const double f2 = std::pow(diag.theta[i + 1], -g);
      const double d01 = (f1 - f0) / (diag.t[i] - diag.t[i - 1]);
      const double d12 = (f2 - f1) / (diag.t[i + 1] - diag.t[i]);
      neg_gamma_d2_max = std::max(neg_gamma_d2_max, 2.0 * (d12 - d01) / (diag.t[i + 1] - diag.t[i - 1]));
    } else {
      theta_positive = false;
    }
  }
  diag.concavity_defect = window_nonempty ? defect : kNaN;
  diag.concavity_scale = std::max(scale, 1e-300);
  diag.neg_gamma_d2_max = (window_nonempty && theta_positive) ? neg_gamma_d2_max : kNaN;

  // zeta lower bound of the blow-up chain.
  double zeta_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    zeta_margin = std::min(zeta_margin, diag.zeta[i] - (p - 2.0) * (rows[i].diss_interior +
                                                                    rows[i].diss_boundary));
  }
  diag.zeta_lower_min = zeta_margin;

  if (d.has_value()) {
    diag.beta_crossing_checked = true;
    diag.beta_sq = 2.0 * (*d) * p / (p - 2.0);
    diag.beta_crossing_ok = true;
    diag.beta_first_violation_time = kNaN;
    for (const auto& row : rows) {
      if (!(row.snap.grad_sq > diag.beta_sq)) {
        diag.beta_crossing_ok = false;
        diag.beta_first_violation_time = row.snap.t;
        break;
      }
    }
  }
  return diag;
}

RunOutcome classify_run(const Trajectory& trajectory, const RunOutcome& evidence,
                        const ProblemParams& params, double window_fraction) {
  if (evidence.kind == RunOutcome::Kind::BlownUp) return evidence;
  if (evidence.kind == RunOutcome::Kind::Inconclusive && !reached_horizon(trajectory) &&
      evidence.reason != "reached t_end") {
    return evidence;
  }

  std::string decay_note;
  try {
    const DecayFit fit = fit_decay(trajectory, window_fraction);
    if (fit.xi_hat > 0.0 && fit.r2 >= 0.99) {
      RunOutcome out;
      out.kind = RunOutcome::Kind::Decayed;
      out.xi_hat = fit.xi_hat;
      out.c_hat = fit.c_hat;
      out.r2 = fit.r2;
      return out;
    }
    std::ostringstream msg;
    msg << "decay fit rejected (xi = " << fit.xi_hat << ", r2 = " << fit.r2 << ")";
    decay_note = msg.str();
  } catch (const std::invalid_argument& err) {
    decay_note = err.what();
  }

  // Growth: ||u||_p rose >= 10x with a clean positive log-linear slope.
  const auto& rows = trajectory.rows;
  const double lp_first = rows.front().snap.lp_term;
  const double lp_last = rows.back().snap.lp_term;
  std::string growth_note = "Lp norm did not grow 10x";
  if (lp_first > 0.0 && lp_last / lp_first >= std::pow(10.0, params.p)) {
    std::vector<double> ts, logs;
    for (const auto& row : rows) {
      if (row.snap.lp_term > 0.0) {
        ts.push_back(row.snap.t);
        logs.push_back(std::log(row.snap.lp_term) / params.p);
      }
    }
    if (ts.size() >= 10) {
      const LineFit line = least_squares_line(ts, logs);
      if (line.slope > 0.0 && line.r2 >= 0.95) {
        RunOutcome out;
        out.kind = RunOutcome::Kind::Grew;
        out.lp_rate = line.slope;
        return out;
      }
      std::ostringstream msg;
      msg << "Lp growth fit rejected (slope = " << line.slope << ", r2 = " << line.r2 << ")";
      growth_note = msg.str();
    } else {
      growth_note = "too few positive Lp points for a growth fit";
    }
  }

  RunOutcome out;
  out.kind = RunOutcome::Kind::Inconclusive;
  out.reason = decay_note + "; " + growth_note;
  return out;
}

std::vector<double> lyapunov_series(const Trajectory& trajectory, const ProblemParams& params,
                                    double eps) {
  if (!trajectory.exact_cross_terms) {
    throw std::invalid_argument("lyapunov_series: trajectory lacks exact cross terms");
  }
  std::vector<double> series;
  series.reserve(trajectory.rows.size());
  for (const auto& row : trajectory.rows) {
    series.push_back(row.snap.E + eps * row.snap.uv_product +
                     0.5 * eps * params.alpha * row.snap.grad_sq);
  }
  return series;
}

std::optional<double> find_decreasing_lyapunov_eps(const Trajectory& trajectory,
                                                   const ProblemParams& params) {
  if (!trajectory.exact_cross_terms || trajectory.rows.size() < 2) return std::nullopt;
  const double E0 = trajectory.rows.front().snap.E;
  const double slack = 1e-12 * std::max(1.0, std::abs(E0));
  double eps = 1.0;
  for (int halving = 0; halving < 60; ++halving) {
    const std::vector<double> L = lyapunov_series(trajectory, params, eps);
    bool monotone = true;
    for (std::size_t i = 1; i < L.size(); ++i) {
      if (L[i] > L[i - 1] + slack) {
        monotone = false;
        break;
      }
    }
    if (monotone) return eps;
    eps *= 0.5;
  }
  return std::nullopt;
}

} // namespace pwell
