#include "pwell/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace pwell {

double lp_power(const Mesh1D& mesh, const std::vector<double>& u, double p, const GaussRule& rule) {
  if (u.size() != mesh.n_free()) throw std::invalid_argument("lp_power: dimension mismatch");
  double total = 0.0;
  const int nq = rule.n();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.element_sizes[e];
    const double u_left = (e == 0) ? 0.0 : u[e - 1];
    const double u_right = u[e];
    double acc = 0.0;
    for (int q = 0; q < nq; ++q) {
      const double xi = rule.points[q];
      const double val = u_left + (u_right - u_left) * xi;
      acc += rule.weights[q] * std::pow(std::abs(val), p);
    }
    total += h * acc;
  }
  return total;
}

double norm(const DiscreteOperators& ops, const std::vector<double>& u, NormKind kind) {
  if (u.size() != ops.n()) throw std::invalid_argument("norm: dimension mismatch");
  switch (kind.tag) {
    case NormKind::Tag::L2:
      return std::sqrt(ops.M.quad_form(u));
    case NormKind::Tag::H1Semi:
      return std::sqrt(ops.K.quad_form(u));
    case NormKind::Tag::Lp: {
      const GaussRule rule = lp_rule(kind.exponent);
      return std::pow(lp_power(ops.mesh, u, kind.exponent, rule), 1.0 / kind.exponent);
    }
    case NormKind::Tag::TraceL2:
      return std::abs(u[ops.gamma1_index]) / std::sqrt(ops.a);
    case NormKind::Tag::TraceAbsPow:
      return std::pow(std::abs(u[ops.gamma1_index]), kind.exponent) / ops.a;
  }
  return 0.0;
}

} // namespace pwell
