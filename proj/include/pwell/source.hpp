#pragma once

#include "pwell/operators.hpp"

#include <vector>

namespace pwell {

/// Consistent load vector of the source |u|^{p-2}u against the linear
/// basis: f_i = sign * \int |u_h|^{p-2} u_h phi_i dx under ops.source_rule.
/// Equals the gradient of sign * ||u||_p^p / p under the same rule.
std::vector<double> source_load(const DiscreteOperators& ops, const std::vector<double>& u,
                                double p, int sign);

/// Jacobian of source_load: the tridiagonal weighted mass matrix
/// sign * \int (p-1)|u_h|^{p-2} phi_i phi_j dx under ops.source_rule.
SymTridiag source_jacobian(const DiscreteOperators& ops, const std::vector<double>& u,
                           double p, int sign);

} // namespace pwell
