#pragma once

#include "pwell/operators.hpp"
#include "pwell/state.hpp"

#include <vector>

namespace pwell {

/// Scalar functionals of one state. With velocity v and the 1/a-weighted
/// trace measure:
///   I = ||grad u||_2^2 - s*||u||_p^p
///   J = ||grad u||_2^2 / 2 - s*||u||_p^p / p
///   E = J + ||v||_2^2 / 2 + ||v||_{2,G1}^2 / 2
/// where s is params.source_sign (the bookkeeping follows the potential
/// actually driving the run; s = +1 is the standard problem).
struct EnergySnapshot {
  double t = 0.0;
  double I = 0.0;
  double J = 0.0;
  double E = 0.0;
  double kinetic = 0.0;          ///< ||v||_2^2 / 2
  double boundary_kinetic = 0.0; ///< ||v||_{2,G1}^2 / 2 = v(1)^2 / (2a)
  double grad_sq = 0.0;          ///< ||grad u||_2^2
  double lp_term = 0.0;          ///< ||u||_p^p
  double trace_u = 0.0;          ///< u(1)
  double dt_used = 0.0;          ///< last accepted step (filled by the driver)
  // State-local quantities the theta/eta diagnostics need.
  double u_l2_sq = 0.0;          ///< ||u||_2^2
  double trace_v = 0.0;          ///< v(1)
  double uv_product = 0.0;       ///< v^T M u + u(1) v(1)/a
};

enum class NehariRegion { NPlusInterior, Nehari, NMinus };

/// Membership in the potential-well sets. The region tolerance is
/// relative: tol_I = 1e-10 * max(grad_sq, lp_term); the zero state lands
/// in NPlusInterior. W and U additionally require J <= d; the strict
/// energy gate E < d is recorded separately and never conflated with
/// the J <= d condition.
struct SetMembership {
  NehariRegion region = NehariRegion::NPlusInterior;
  bool in_stable_W = false;
  bool in_unstable_U = false;
  bool E_below_d = false;
};

enum class TargetSet { StableW, UnstableU };

EnergySnapshot energy_snapshot(const State& state, const DiscreteOperators& ops,
                               const ProblemParams& params);

/// Unique maximizer of lambda -> J(lambda*u) along the ray:
/// lambda* = (||grad u||^2 / ||u||_p^p)^{1/(p-2)}. Requires u != 0, p > 2.
double lambda_star(const std::vector<double>& u, const DiscreteOperators& ops,
                   const ProblemParams& params);

/// max over the ray of J: ((p-2)/(2p)) * (||grad u|| / ||u||_p)^{2p/(p-2)}.
/// Scale free; bounded below by the well depth d.
double ray_max_J(const std::vector<double>& u, const DiscreteOperators& ops,
                 const ProblemParams& params);

/// Membership from the standard-sign functionals of a state.
SetMembership classify_state(const State& state, double d, const DiscreteOperators& ops,
                             const ProblemParams& params);

/// Same classification from already-computed scalars (used to compare a
/// live state against a trajectory row).
SetMembership classify_from_scalars(double grad_sq, double lp_term, double J_std,
                                    double E_std, double d);

/// Scaling lambda that places lambda*u in the requested set, with the given
/// safety margin in (0,1). UnstableU solves J(lambda*u) = d past the ray
/// maximizer and inflates by (1+margin); StableW starts at (1-margin) of
/// the maximizer and halves until J < d. Requires u != 0, p > 2, d > 0.
double scale_to_set(const std::vector<double>& u, TargetSet target, double margin, double d,
                    const DiscreteOperators& ops, const ProblemParams& params);

/// Perturbed energy L = E + eps*(v^T M u + u(1)v(1)/a) + (eps*alpha/2)*||grad u||^2.
/// Diagnostic only; eps = 0 returns E bitwise.
double lyapunov_L(const State& state, double eps, const DiscreteOperators& ops,
                  const ProblemParams& params);

} // namespace pwell
