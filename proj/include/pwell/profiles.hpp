#pragma once

#include "pwell/config.hpp"
#include "pwell/operators.hpp"
#include "pwell/state.hpp"

#include <optional>

namespace pwell {

/// Mesh, operators and the scaled initial state of one scenario.
struct ScenarioSetup {
  Mesh1D mesh;
  DiscreteOperators ops;
  State initial;
  double lambda_applied = 1.0;            ///< scaling from target_set (1 when none)
  std::optional<WellConstants> constants; ///< present when computed for gating
};

/// Nodal values of one profile on the free nodes.
std::vector<double> build_profile(const ProfileSpec& spec, const Mesh1D& mesh,
                                  double p, const SolverOptions& opts);

/// Builds the full scenario: mesh, operators, initial data (with the
/// target-set scaling applied) and, when needed for gating or requested,
/// the well constants (formula route, no restarts).
ScenarioSetup prepare_scenario(const ScenarioConfig& config, bool need_constants);

} // namespace pwell
