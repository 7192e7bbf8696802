#include "pwell/functionals.hpp"

#include "pwell/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace pwell {

namespace {

struct RayTerms {
  double grad_sq; ///< A = ||grad u||^2
  double lp_pow;  ///< P = ||u||_p^p
};

RayTerms ray_terms(const std::vector<double>& u, const DiscreteOperators& ops,
                   const ProblemParams& params) {
  RayTerms t;
  t.grad_sq = ops.K.quad_form(u);
  t.lp_pow = lp_power(ops.mesh, u, params.p, ops.source_rule);
  return t;
}

void require_ray_preconditions(const RayTerms& t, const ProblemParams& params, const char* who) {
  if (!(params.p > 2.0)) throw std::invalid_argument(std::string(who) + ": requires p > 2");
  if (t.grad_sq <= 0.0) throw std::invalid_argument(std::string(who) + ": u must be nonzero");
  if (t.lp_pow <= 0.0) throw std::invalid_argument(std::string(who) + ": ||u||_p vanishes");
}

// J along the ray in units of the ray maximum: J(mu * lambda* * u) =
// ray_max * h(mu) with h(mu) = (p mu^2 - 2 mu^p) / (p-2), h(1) = 1,
// strictly decreasing for mu > 1 and unbounded below.
double ray_profile(double mu, double p) {
  return (p * mu * mu - 2.0 * std::pow(mu, p)) / (p - 2.0);
}

} // namespace

EnergySnapshot energy_snapshot(const State& state, const DiscreteOperators& ops,
                               const ProblemParams& params) {
  if (state.u.size() != ops.n() || state.v.size() != ops.n()) {
    throw std::invalid_argument("energy_snapshot: state/operator dimension mismatch");
  }
  const std::size_t g1 = ops.gamma1_index;
  const int s = params.source_sign;

  EnergySnapshot snap;
  snap.t = state.t;
  snap.grad_sq = ops.K.quad_form(state.u);
  snap.lp_term = lp_power(ops.mesh, state.u, params.p, ops.source_rule);
  snap.I = snap.grad_sq - s * snap.lp_term;
  snap.J = 0.5 * snap.grad_sq - s * snap.lp_term / params.p;
  snap.kinetic = 0.5 * ops.M.quad_form(state.v);
  snap.boundary_kinetic = 0.5 * ops.boundary_mass * state.v[g1] * state.v[g1];
  snap.E = snap.J + snap.kinetic + snap.boundary_kinetic;
  snap.trace_u = state.u[g1];
  snap.u_l2_sq = ops.M.quad_form(state.u);
  snap.trace_v = state.v[g1];
  snap.uv_product = ops.M.bilinear(state.v, state.u) + ops.boundary_mass * state.u[g1] * state.v[g1];
  return snap;
}

double lambda_star(const std::vector<double>& u, const DiscreteOperators& ops,
                   const ProblemParams& params) {
  const RayTerms t = ray_terms(u, ops, params);
  require_ray_preconditions(t, params, "lambda_star");
  return std::pow(t.grad_sq / t.lp_pow, 1.0 / (params.p - 2.0));
}

double ray_max_J(const std::vector<double>& u, const DiscreteOperators& ops,
                 const ProblemParams& params) {
  const RayTerms t = ray_terms(u, ops, params);
  require_ray_preconditions(t, params, "ray_max_J");
  const double p = params.p;
  // ((p-2)/(2p)) * A^{p/(p-2)} * P^{-2/(p-2)}, evaluated in logs.
  const double log_val = (p / (p - 2.0)) * std::log(t.grad_sq) - (2.0 / (p - 2.0)) * std::log(t.lp_pow);
  return ((p - 2.0) / (2.0 * p)) * std::exp(log_val);
}

SetMembership classify_from_scalars(double grad_sq, double lp_term, double J_std,
                                    double E_std, double d) {
  SetMembership result;
  const double I_std = grad_sq - lp_term;
  const bool zero_state = (grad_sq == 0.0 && lp_term == 0.0);
  const double tol_I = 1e-10 * std::max(grad_sq, lp_term);

  if (zero_state || I_std > tol_I) {
    result.region = NehariRegion::NPlusInterior;
  } else if (I_std < -tol_I) {
    result.region = NehariRegion::NMinus;
  } else {
    result.region = NehariRegion::Nehari;
  }
  result.in_stable_W = (result.region == NehariRegion::NPlusInterior) && (J_std <= d);
  result.in_unstable_U = (result.region == NehariRegion::NMinus) && (J_std <= d);
  result.E_below_d = (E_std < d);
  return result;
}

SetMembership classify_state(const State& state, double d, const DiscreteOperators& ops,
                             const ProblemParams& params) {
  if (!(d > 0.0)) throw std::invalid_argument("classify_state: requires d > 0");
  // Membership is a standard-problem notion: evaluate with source sign +1
  // regardless of the configured run mode.
  ProblemParams std_params = params;
  std_params.source_sign = 1;
  const EnergySnapshot snap = energy_snapshot(state, ops, std_params);
  return classify_from_scalars(snap.grad_sq, snap.lp_term, snap.J, snap.E, d);
}

double scale_to_set(const std::vector<double>& u, TargetSet target, double margin, double d,
                    const DiscreteOperators& ops, const ProblemParams& params) {
  if (!(margin > 0.0 && margin < 1.0)) {
    throw std::invalid_argument("scale_to_set: margin must lie in (0,1)");
  }
  if (!(d > 0.0)) throw std::invalid_argument("scale_to_set: requires d > 0");
  const RayTerms t = ray_terms(u, ops, params);
  require_ray_preconditions(t, params, "scale_to_set");
  const double p = params.p;
  const double lstar = std::pow(t.grad_sq / t.lp_pow, 1.0 / (p - 2.0));
  const double jmax = ray_max_J(u, ops, params);

  if (target == TargetSet::UnstableU) {
    // Root of J(mu * lstar * u) = d on mu >= 1, where the profile is
    // strictly decreasing. A ray whose maximum already sits at or below
    // d degenerates to the double root mu = 1.
    double mu_d = 1.0;
    const double level = d / jmax;
    if (level < 1.0) {
      double lo = 1.0, hi = 2.0;
      while (ray_profile(hi, p) > level) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("scale_to_set: unstable bracketing failed");
      }
      for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ray_profile(mid, p) > level ? lo : hi) = mid;
      }
      mu_d = 0.5 * (lo + hi);
    }
    return lstar * mu_d * (1.0 + margin);
  }

  // StableW: J is increasing on (0, lstar), so (1-margin)*lstar keeps
  // I > 0; halve until J drops below d.
  double lambda = (1.0 - margin) * lstar;
  for (int halvings = 0; halvings < 60; ++halvings) {
    const double j_val = 0.5 * lambda * lambda * t.grad_sq -
                         std::pow(lambda, p) * t.lp_pow / p;
    if (j_val < d) return lambda;
    lambda *= 0.5;
  }
  throw std::runtime_error("scale_to_set: no admissible stable scaling after 60 halvings");
}

double lyapunov_L(const State& state, double eps, const DiscreteOperators& ops,
                  const ProblemParams& params) {
  if (!(eps >= 0.0)) throw std::invalid_argument("lyapunov_L: eps must be >= 0");
  const EnergySnapshot snap = energy_snapshot(state, ops, params);
  return snap.E + eps * snap.uv_product + 0.5 * eps * params.alpha * snap.grad_sq;
}

} // namespace pwell
