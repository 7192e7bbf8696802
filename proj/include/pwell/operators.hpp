#pragma once

#include "pwell/mesh.hpp"
#include "pwell/params.hpp"
#include "pwell/quadrature.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace pwell {

/// Symmetric tridiagonal matrix: main diagonal plus one off diagonal.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off; ///< size diag.size() - 1

  static SymTridiag zeros(std::size_t n) {
    SymTridiag t;
    t.diag.assign(n, 0.0);
    t.off.assign(n > 0 ? n - 1 : 0, 0.0);
    return t;
  }

  std::size_t size() const { return diag.size(); }

  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> apply(const std::vector<double>& x) const;

  /// x^T A x
  double quad_form(const std::vector<double>& x) const;
  /// x^T A y
  double bilinear(const std::vector<double>& x, const std::vector<double>& y) const;

  SymTridiag& add_scaled(const SymTridiag& other, double c);
};

/// Thomas solve of A x = b. Returns nullopt when a pivot degenerates.
std::optional<std::vector<double>> solve_tridiag(const SymTridiag& A, const std::vector<double>& b);

/// Operators on the free nodes (the Dirichlet node x = 0 is eliminated).
/// Free node i corresponds to mesh node i+1; the dynamic boundary node
/// x = 1 is the last free node.
struct DiscreteOperators {
  Mesh1D mesh;
  SymTridiag M;               ///< consistent interior mass
  SymTridiag K;               ///< stiffness
  double boundary_mass = 1.0; ///< single entry of B: 1/a at gamma1_index
  std::size_t gamma1_index = 0;
  double a = 1.0;             ///< boundary mass coefficient the weights derive from
  GaussRule source_rule;      ///< shared rule for every |u|^p integral

  std::size_t n() const { return M.size(); }
};

/// Piecewise-linear assembly: exact consistent mass, exact stiffness,
/// lumped (pointwise) boundary mass 1/a at x = 1.
DiscreteOperators assemble(const Mesh1D& mesh, const ProblemParams& params);

} // namespace pwell
