#include "pwell/source.hpp"

#include <cmath>
#include <stdexcept>

namespace pwell {

namespace {

// |s|^{p-2} s, with the convention 0 for s = 0 (p >= 2 keeps it finite).
inline double odd_power(double s, double p) {
  if (s == 0.0) return 0.0;
  return std::pow(std::abs(s), p - 2.0) * s;
}

inline double even_power(double s, double p) {
  if (s == 0.0) return (p == 2.0) ? 1.0 : 0.0;
  return std::pow(std::abs(s), p - 2.0);
}

} // namespace

std::vector<double> source_load(const DiscreteOperators& ops, const std::vector<double>& u,
                                double p, int sign) {
  const Mesh1D& mesh = ops.mesh;
  if (u.size() != mesh.n_free()) throw std::invalid_argument("source_load: dimension mismatch");
  std::vector<double> f(u.size(), 0.0);
  if (sign == 0) return f;

  const GaussRule& rule = ops.source_rule;
  const int nq = rule.n();
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.element_sizes[e];
    const double u_left = (e == 0) ? 0.0 : u[e - 1];
    const double u_right = u[e];
    double f_left = 0.0, f_right = 0.0;
    for (int q = 0; q < nq; ++q) {
      const double xi = rule.points[q];
      const double val = odd_power(u_left + (u_right - u_left) * xi, p);
      f_left += rule.weights[q] * val * (1.0 - xi);
      f_right += rule.weights[q] * val * xi;
    }
    if (e > 0) f[e - 1] += sign * h * f_left;
    f[e] += sign * h * f_right;
  }
  return f;
}

SymTridiag source_jacobian(const DiscreteOperators& ops, const std::vector<double>& u,
                           double p, int sign) {
  const Mesh1D& mesh = ops.mesh;
  if (u.size() != mesh.n_free()) throw std::invalid_argument("source_jacobian: dimension mismatch");
  SymTridiag J = SymTridiag::zeros(u.size());
  if (sign == 0) return J;

  const GaussRule& rule = ops.source_rule;
  const int nq = rule.n();
  const double w_coef = (p - 1.0) * sign;
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const double h = mesh.element_sizes[e];
    const double u_left = (e == 0) ? 0.0 : u[e - 1];
    const double u_right = u[e];
    double j_ll = 0.0, j_lr = 0.0, j_rr = 0.0;
    for (int q = 0; q < nq; ++q) {
      const double xi = rule.points[q];
      const double w = even_power(u_left + (u_right - u_left) * xi, p) * rule.weights[q];
      j_ll += w * (1.0 - xi) * (1.0 - xi);
      j_lr += w * (1.0 - xi) * xi;
      j_rr += w * xi * xi;
    }
    if (e > 0) {
      J.diag[e - 1] += w_coef * h * j_ll;
      J.off[e - 1] += w_coef * h * j_lr;
    }
    J.diag[e] += w_coef * h * j_rr;
  }
  return J;
}

} // namespace pwell
