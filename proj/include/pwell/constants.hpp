#pragma once

#include "pwell/mesh.hpp"
#include "pwell/operators.hpp"

#include <cstdint>
#include <vector>

namespace pwell {

struct SolverOptions {
  double tol = 1e-11;      ///< relative-decrease stagnation threshold
  long max_iters = 50000;
  int restarts = 20;       ///< random restarts for the direct well-depth check
  std::uint64_t seed = 12345;
};

/// Result of the constrained minimization of ||grad u||_2 over ||u||_p = 1
/// with u(0) = 0. c_star is the reciprocal of the minimum; minimizer is the
/// final (projected) iterate; residual is the H1 norm of the Euler-Lagrange
/// defect direction at it.
struct SobolevResult {
  double c_star = 0.0;
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<double> minimizer;
};

/// p = 2: inverse power iteration on the stiffness/mass pencil.
/// p > 2: descent on ||grad u||^2 with renormalization to ||u||_p = 1 each
/// step and Armijo backtracking, from the initial guess u(x) = x. The
/// descent direction is the stiffness-preconditioned gradient; a full step
/// coincides with inverse iteration on the Euler-Lagrange equation.
/// Declared converged once the relative objective decrease stays below
/// opts.tol for 25 consecutive iterations. Non-convergence within
/// opts.max_iters is reported in the result, which still carries the best
/// iterate.
SobolevResult best_sobolev_constant(const Mesh1D& mesh, double p, const SolverOptions& opts);

/// The potential-well constants on one mesh.
struct WellConstants {
  double c_star = 0.0;
  double d = 0.0;        ///< ((p-2)/(2p)) * c_star^{-2p/(p-2)}
  double beta = 0.0;     ///< sqrt(2 d p / (p-2))
  double p = 0.0;
  std::size_t mesh_size = 0; ///< number of elements
  double residual = 0.0;
  double d_direct = 0.0; ///< min of ray_max_J over restarted minimizations
};

/// Computes c_star, then d and beta from it, plus the direct cross-check
/// d_direct: the minimum of ray_max_J over opts.restarts optimizer runs
/// started from smoothed random fields, together with the u(x)=x run
/// itself. Requires p > 2; throws on optimizer failure.
WellConstants well_constants(const Mesh1D& mesh, double p, const SolverOptions& opts);

/// The initial-energy smallness condition
///   c_star^p * ((2p/(p-2)) * E0)^{(p-2)/2} < 1,
/// algebraically equivalent to E0 < d. Requires finite E0 >= 0.
bool initial_energy_gate(double E0, const WellConstants& constants);

} // namespace pwell
