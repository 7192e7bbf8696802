#pragma once

#include <vector>

namespace pwell {

/// Gauss-Legendre rule on the reference interval [0,1].
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
  int n() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
/// Nodes are computed by Newton iteration on the Legendre polynomial.
GaussRule gauss_legendre(int n_points);

/// Rule used for all |u|^p integrals (the Lp norm, the source load and
/// its Jacobian share it so the discrete chain rule is exact).
GaussRule lp_rule(double p);

} // namespace pwell
