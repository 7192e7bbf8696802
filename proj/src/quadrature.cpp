#include "pwell/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace pwell {

GaussRule gauss_legendre(int n_points) {
  if (n_points < 1 || n_points > 64) {
    throw std::invalid_argument("gauss_legendre: point count must be in [1,64]");
  }
  const int n = n_points;
  GaussRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);

  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess on [-1,1], then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map from [-1,1] to [0,1]; store ascending.
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

GaussRule lp_rule(double p) {
  // Exact for |u|^p of a linear u when p is an even integer; otherwise
  // comfortably resolves the smooth integrand.
  const int cp = static_cast<int>(std::ceil(p));
  const int n = std::max(3, (cp + 3) / 2 + 1);
  return gauss_legendre(n);
}

} // namespace pwell
