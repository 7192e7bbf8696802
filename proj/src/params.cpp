#include "pwell/params.hpp"

#include <cmath>

namespace pwell {

ValidationReport validate_params(const ProblemParams& params, ValidationPurpose purpose) {
  ValidationReport report;
  auto require = [&report](bool cond, const char* msg) {
    if (!cond) report.violations.emplace_back(msg);
  };

  require(std::isfinite(params.p) && params.p >= 2.0, "p must be >= 2");
  require(std::isfinite(params.m) && params.m >= 2.0, "m must be >= 2");
  require(std::isfinite(params.alpha) && params.alpha >= 0.0, "alpha must be >= 0");
  require(std::isfinite(params.r) && params.r >= 0.0, "r must be >= 0");
  require(std::isfinite(params.a) && params.a > 0.0, "a must be > 0");

  // In 1-D the trace exponent bound is +infinity, so no upper bounds on p, m.
  if (purpose == ValidationPurpose::WellDepth || purpose == ValidationPurpose::BlowupRegime) {
    require(params.p > 2.0, "p must exceed 2");
  }
  if (purpose == ValidationPurpose::BlowupRegime) {
    require(params.m == 2.0, "m must equal 2");
  }
  return report;
}

} // namespace pwell
