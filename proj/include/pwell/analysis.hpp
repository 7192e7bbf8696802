#pragma once

#include "pwell/constants.hpp"
#include "pwell/integrator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pwell {

/// Exponential fit E(t) ~ c_hat * exp(-xi_hat * t) over a trailing window.
struct DecayFit {
  double xi_hat = 0.0;
  double c_hat = 0.0;
  double r2 = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (t, log E) over the trailing window_fraction
/// of the time range. Throws std::invalid_argument when the window holds
/// fewer than 10 points or any E in it is not strictly positive.
DecayFit fit_decay(const Trajectory& trajectory, double window_fraction);

struct CheckResult {
  std::string name;
  bool passed = false;
  double first_violation_time = 0.0; ///< NaN when passed
  std::string detail;
};

struct ReportCard {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Per-snapshot desk checks of the stable-regime statements:
///   (i)   I(t) > -tol_I            (invariance of the I > 0 region)
///   (ii)  E non-increasing up to solver slack
///   (iii) ||grad u||^2 <= (2p/(p-2)) E0 (1 + 1e-8)
///   (iv)  0 < E(t)   (an identically zero trajectory passes as a
///                     boundary case)
/// Failures are report entries, never exceptions.
ReportCard verify_stable_run(const Trajectory& trajectory, const WellConstants& constants,
                             double E0, double newton_tol = 1e-10);

/// Concavity diagnostics of theta(t) together with the zeta / eta series
/// of the blow-up argument. Derivatives use non-uniform 3-point divided
/// differences; when the run ended before the horizon the last 3
/// snapshots are excluded from the concavity window.
struct ThetaDiagnostics {
  std::vector<double> t;
  std::vector<double> theta;
  std::vector<double> theta_d1; ///< NaN at the two endpoints
  std::vector<double> theta_d2;
  std::vector<double> zeta;
  std::vector<double> eta;

  double gamma = 0.0;             ///< (p-2)/4
  double horizon_T = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;

  double concavity_defect = 0.0;  ///< min over window of theta*theta'' - ((p+2)/4) theta'^2
  double concavity_scale = 1.0;   ///< magnitude the defect is compared against
  double neg_gamma_d2_max = 0.0;  ///< max second difference of theta^{-gamma} (NaN if theta <= 0)

  bool eta_exact_route = true;    ///< false when rebuilt from CSV (finite differences)
  double eta_min = 0.0;
  double eta_scale = 1.0;         ///< scale of eta's positive part
  double eta_tol = 0.0;           ///< tolerance used for eta_nonneg_ok
  bool eta_nonneg_ok = true;

  bool beta_crossing_checked = false;
  bool beta_crossing_ok = false;
  double beta_sq = 0.0;           ///< 2dp/(p-2)
  double beta_first_violation_time = 0.0; ///< NaN when none

  double zeta_lower_min = 0.0;    ///< min of zeta - (p-2)(diss_i + diss_b)

  std::string warning;            ///< e.g. boundary damping is not linear
};

/// Requires at least 5 snapshots. d, when provided, enables the
/// beta-crossing check ||grad u||^2 > 2dp/(p-2) (meaningful on unstable
/// runs). Warns when m != 2: the zeta/eta bookkeeping assumes linear
/// boundary damping.
ThetaDiagnostics theta_diagnostics(const Trajectory& trajectory, const ProblemParams& params,
                                   double t0_fraction = 0.25,
                                   std::optional<double> d = std::nullopt);

/// Final verdict. Definitive integrator evidence (BlownUp, or an early
/// stop without threshold crossing) passes through; a run that reached
/// t_end is fitted: Decayed when the decay fit has xi > 0 and r2 >= 0.99,
/// else Grew when ||u||_p rose 10x with a positive log-linear slope at
/// r2 >= 0.95, else Inconclusive with the dominant reason.
RunOutcome classify_run(const Trajectory& trajectory, const RunOutcome& evidence,
                        const ProblemParams& params, double window_fraction = 0.5);

/// Perturbed-energy series L(t) = E + eps*(v,u) + (eps*alpha/2)||grad u||^2
/// from stored snapshot scalars. Requires exact cross terms (live run).
std::vector<double> lyapunov_series(const Trajectory& trajectory, const ProblemParams& params,
                                    double eps);

/// Halves eps from 1 until the L series is non-increasing across
/// snapshots (within slack); nullopt when 60 halvings do not suffice or
/// the trajectory lacks exact cross terms.
std::optional<double> find_decreasing_lyapunov_eps(const Trajectory& trajectory,
                                                   const ProblemParams& params);

} // namespace pwell
