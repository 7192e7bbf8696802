#pragma once

#include <string>
#include <vector>

namespace pwell {

/// What a parameter set is being validated for. Each purpose layers
/// extra rules on top of plain simulation.
enum class ValidationPurpose { Simulate, WellDepth, BlowupRegime };

/// Coefficients of the damped wave problem
///   u_tt - u_xx - alpha * u_txx = source(u)          on (0,1),
///   u(0,t) = 0,
///   u_tt(1,t) = -a * [u_x + alpha*u_tx](1,t) - r*|u_t|^{m-2}u_t(1,t),
/// with source(u) = sign * |u|^{p-2} u.
struct ProblemParams {
  double p = 4.0;      ///< source exponent (>= 2; well depth needs > 2)
  double m = 2.0;      ///< boundary damping exponent (>= 2)
  double alpha = 1.0;  ///< Kelvin-Voigt damping coefficient (>= 0)
  double r = 1.0;      ///< boundary damping coefficient (>= 0)
  double a = 1.0;      ///< boundary mass coefficient (> 0)
  int source_sign = 1; ///< +1 standard source, 0 disabled, -1 negated
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Simulate requires p >= 2, m >= 2, alpha >= 0, r >= 0, a > 0.
/// WellDepth additionally requires p > 2 (the well-depth exponent
/// 2p/(p-2) degenerates at p = 2). BlowupRegime additionally
/// requires m = 2 (the linear-boundary-damping regime where finite-time
/// blow-up is certified).
ValidationReport validate_params(const ProblemParams& params, ValidationPurpose purpose);

} // namespace pwell
