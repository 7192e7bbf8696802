#pragma once

#include "pwell/operators.hpp"

#include <vector>

namespace pwell {

/// Norm selector for norm(). Lp and TraceAbsPow carry an exponent.
struct NormKind {
  enum class Tag { L2, H1Semi, Lp, TraceL2, TraceAbsPow };
  Tag tag = Tag::L2;
  double exponent = 2.0;

  static NormKind l2() { return {Tag::L2, 2.0}; }
  static NormKind h1_semi() { return {Tag::H1Semi, 2.0}; }
  static NormKind lp(double p) { return {Tag::Lp, p}; }
  static NormKind trace_l2() { return {Tag::TraceL2, 2.0}; }
  static NormKind trace_abs_pow(double m) { return {Tag::TraceAbsPow, m}; }
};

/// Norms of a free-node field u (the Dirichlet zero at x = 0 is implied):
///   L2          sqrt(u^T M u)
///   H1Semi      sqrt(u^T K u)
///   Lp          per-element Gauss quadrature of the linear interpolant
///   TraceL2     |u(1)| / sqrt(a)
///   TraceAbsPow |u(1)|^m / a   (the m-th power, not its root)
/// Throws std::invalid_argument on a dimension mismatch.
double norm(const DiscreteOperators& ops, const std::vector<double>& u, NormKind kind);

/// ||u||_p^p of the piecewise-linear interpolant by Gauss quadrature.
double lp_power(const Mesh1D& mesh, const std::vector<double>& u, double p, const GaussRule& rule);

} // namespace pwell
