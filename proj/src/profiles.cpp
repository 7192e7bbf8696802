#include "pwell/profiles.hpp"

#include "pwell/functionals.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace pwell {

std::vector<double> build_profile(const ProfileSpec& spec, const Mesh1D& mesh,
                                  double p, const SolverOptions& opts) {
  const std::size_t n = mesh.n_free();
  std::vector<double> u(n, 0.0);
  switch (spec.kind) {
    case ProfileKind::Sine:
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = std::sin(0.5 * M_PI * mesh.nodes[i + 1]);
      }
      return u;
    case ProfileKind::Bubble: {
      const double c = spec.center, w = spec.width;
      const double at_zero = std::exp(-0.5 * c * c / (w * w));
      for (std::size_t i = 0; i < n; ++i) {
        const double x = mesh.nodes[i + 1];
        u[i] = std::exp(-0.5 * (x - c) * (x - c) / (w * w)) - at_zero;
      }
      return u;
    }
    case ProfileKind::NodalFile: {
      std::ifstream in(spec.path);
      if (!in) throw std::runtime_error("cannot open nodal file '" + spec.path + "'");
      std::vector<double> values;
      double v = 0.0;
      while (in >> v) values.push_back(v);
      if (values.size() != mesh.nodes.size()) {
        throw std::runtime_error("nodal file '" + spec.path + "' holds " +
                                 std::to_string(values.size()) + " values, mesh has " +
                                 std::to_string(mesh.nodes.size()) + " nodes");
      }
      if (values.front() != 0.0) {
        throw std::runtime_error("nodal file '" + spec.path + "' must vanish at x = 0");
      }
      return std::vector<double>(values.begin() + 1, values.end());
    }
    case ProfileKind::SobolevMinimizer: {
      SobolevResult result = best_sobolev_constant(mesh, p, opts);
      if (!result.converged) {
        throw std::runtime_error("Sobolev minimizer profile: optimizer did not converge");
      }
      return std::move(result.minimizer);
    }
  }
  return u;
}

ScenarioSetup prepare_scenario(const ScenarioConfig& config, bool need_constants) {
  ScenarioSetup setup;
  setup.mesh = build_mesh(config.domain.n_elements, config.domain.grading);
  setup.ops = assemble(setup.mesh, config.params);

  setup.initial = zero_state(setup.mesh.n_free());
  setup.initial.u = build_profile(config.initial.profile, setup.mesh, config.params.p,
                                  config.constants);
  if (!config.initial.velocity_zero) {
    setup.initial.v = build_profile(config.initial.velocity, setup.mesh, config.params.p,
                                    config.constants);
  }

  const bool gating = config.initial.target_set != TargetSetConfig::None;
  if (gating || need_constants) {
    // Formula route only: c_star from one minimization, d and beta from it.
    SolverOptions opts = config.constants;
    opts.restarts = 0;
    setup.constants = well_constants(setup.mesh, config.params.p, opts);
  }

  if (gating) {
    const TargetSet target = (config.initial.target_set == TargetSetConfig::StableW)
                                 ? TargetSet::StableW
                                 : TargetSet::UnstableU;
    // The target-set scaling is a standard-problem construction; it is
    // applied before any source on/off switch takes effect.
    ProblemParams std_params = config.params;
    std_params.source_sign = 1;
    setup.lambda_applied = scale_to_set(setup.initial.u, target, config.initial.margin,
                                        setup.constants->d, setup.ops, std_params);
    for (double& x : setup.initial.u) x *= setup.lambda_applied;
  }
  return setup;
}

} // namespace pwell
