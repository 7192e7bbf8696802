#include <doctest.h>

#include "pwell/constants.hpp"
#include "pwell/functionals.hpp"
#include "pwell/norms.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace pwell;

namespace {

SolverOptions fast_opts(int restarts = 0) {
  SolverOptions opts;
  opts.tol = 1e-12;
  opts.max_iters = 50000;
  opts.restarts = restarts;
  opts.seed = 2024;
  return opts;
}

// Dense generalized eigensolve of the assembled pencil (K, M): the
// independent oracle for the p = 2 route.
double dense_c_star(const Mesh1D& mesh) {
  ProblemParams params;
  params.p = 2.0;
  const DiscreteOperators ops = assemble(mesh, params);
  const auto n = static_cast<Eigen::Index>(ops.n());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = ops.K.diag[i];
    M(i, i) = ops.M.diag[i];
    if (i + 1 < n) {
      K(i, i + 1) = K(i + 1, i) = ops.K.off[i];
      M(i, i + 1) = M(i + 1, i) = ops.M.off[i];
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, M);
  return 1.0 / std::sqrt(solver.eigenvalues()(0));
}

} // namespace

TEST_CASE("p=2 constant matches the dense eigensolve and 2/pi") {
  const Mesh1D mesh = build_mesh(512, 1.0);
  const SobolevResult res = best_sobolev_constant(mesh, 2.0, fast_opts());
  REQUIRE(res.converged);

  const double oracle = dense_c_star(mesh);
  CHECK(std::abs(res.c_star - oracle) < 1e-8);
  CHECK(std::abs(res.c_star - 2.0 / M_PI) < 1e-4);
}

TEST_CASE("p=2 minimizer matches sin(pi x / 2) at second order") {
  auto max_node_error = [](std::size_t n) {
    const Mesh1D mesh = build_mesh(n, 1.0);
    SobolevResult res = best_sobolev_constant(mesh, 2.0, fast_opts());
    REQUIRE(res.converged);
    // L2-normalize the exact mode the same way and fix the sign.
    std::vector<double> exact(mesh.n_free());
    for (std::size_t i = 0; i < exact.size(); ++i) {
      exact[i] = std::sin(0.5 * M_PI * mesh.nodes[i + 1]);
    }
    ProblemParams params;
    params.p = 2.0;
    const DiscreteOperators ops = assemble(mesh, params);
    const double norm_exact = std::sqrt(ops.M.quad_form(exact));
    const double sign = res.minimizer.back() > 0.0 ? 1.0 : -1.0;
    double err = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      err = std::max(err, std::abs(sign * res.minimizer[i] - exact[i] / norm_exact));
    }
    return err;
  };
  // "Within O(n^-2)" is an upper bound. On uniform meshes the discrete
  // eigenvectors are the exact nodal interpolants of the sine modes, so
  // the nodal error sits at rounding level, far inside the bound.
  CHECK(max_node_error(32) <= 1.0 / (32.0 * 32.0));
  CHECK(max_node_error(64) <= 1.0 / (64.0 * 64.0));
}

TEST_CASE("p=4 constant converges at second order in the mesh") {
  std::vector<double> values;
  for (std::size_t n : {32u, 64u, 128u}) {
    const SobolevResult res = best_sobolev_constant(build_mesh(n, 1.0), 4.0, fast_opts());
    REQUIRE(res.converged);
    values.push_back(res.c_star);
  }
  const double d1 = values[0] - values[1];
  const double d2 = values[1] - values[2];
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.5));
}

TEST_CASE("refinement monotonicity: min ||grad u|| shrinks over nested spaces") {
  // Uniform bisection nests the discrete spaces, so the constrained
  // minimum of ||grad u|| cannot rise; equivalently c_star = 1/min is
  // non-decreasing toward the continuum value.
  double prev_min = 1e300;
  for (std::size_t n : {32u, 64u, 128u, 256u}) {
    const SobolevResult res = best_sobolev_constant(build_mesh(n, 1.0), 4.0, fast_opts());
    REQUIRE(res.converged);
    const double grad_min = 1.0 / res.c_star;
    CHECK(grad_min <= prev_min + 1e-9);
    prev_min = grad_min;
  }
}

TEST_CASE("minimizer is Lp-normalized") {
  const Mesh1D mesh = build_mesh(128, 1.0);
  for (double p : {2.0, 3.0, 4.0}) {
    const SobolevResult res = best_sobolev_constant(mesh, p, fast_opts());
    REQUIRE(res.converged);
    ProblemParams params;
    params.p = p;
    const DiscreteOperators ops = assemble(mesh, params);
    const double np = std::pow(lp_power(mesh, res.minimizer, p, ops.source_rule), 1.0 / p);
    if (p > 2.0) {
      CHECK(np == doctest::Approx(1.0).epsilon(1e-12));
    } else {
      CHECK(std::abs(std::sqrt(ops.M.quad_form(res.minimizer)) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("well constants formulas and direct cross-check") {
  const Mesh1D mesh = build_mesh(256, 1.0);
  const WellConstants c = well_constants(mesh, 4.0, fast_opts(8));

  // Symbolic plug-in: d and beta are tied to c_star bitwise.
  const double p = c.p;
  CHECK(c.d == ((p - 2.0) / (2.0 * p)) * std::pow(c.c_star, -2.0 * p / (p - 2.0)));
  CHECK(c.beta == std::sqrt(2.0 * c.d * p / (p - 2.0)));
  CHECK(c.beta * c.beta == doctest::Approx(2.0 * c.d * p / (p - 2.0)).epsilon(1e-15));
  CHECK(c.d > 0.0);
  CHECK(c.beta > 0.0);

  CHECK(std::abs(c.d_direct - c.d) / c.d <= 0.01);

  CHECK_THROWS_AS(well_constants(mesh, 2.0, fast_opts()), std::invalid_argument);
}

TEST_CASE("ray maxima dominate the well depth") {
  const Mesh1D mesh = build_mesh(128, 1.0);
  const WellConstants c = well_constants(mesh, 4.0, fast_opts());
  ProblemParams params;
  params.p = 4.0;
  const DiscreteOperators ops = assemble(mesh, params);

  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> u(ops.n());
    for (double& x : u) x = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
    CHECK(ray_max_J(u, ops, params) >= c.d * (1.0 - 1e-9));
  }

  // Equality is attained (within optimizer tolerance) at the minimizer.
  const SobolevResult res = best_sobolev_constant(mesh, 4.0, fast_opts());
  REQUIRE(res.converged);
  CHECK(ray_max_J(res.minimizer, ops, params) == doctest::Approx(c.d).epsilon(1e-8));
}

TEST_CASE("symbolic check: c_star = 1, p = 4 gives d = 1/4, beta = 1") {
  // Direct arithmetic on the formulas, no optimizer involved.
  const double p = 4.0, c_star = 1.0;
  const double d = ((p - 2.0) / (2.0 * p)) * std::pow(c_star, -2.0 * p / (p - 2.0));
  CHECK(d == doctest::Approx(0.25));
  CHECK(std::sqrt(2.0 * d * p / (p - 2.0)) == doctest::Approx(1.0));
}

TEST_CASE("initial energy gate is equivalent to E0 < d") {
  const Mesh1D mesh = build_mesh(128, 1.0);
  const WellConstants c = well_constants(mesh, 4.0, fast_opts());

  std::mt19937_64 rng(555);
  for (int i = 0; i < 1000; ++i) {
    const double E0 = 2.0 * c.d * ((rng() >> 11) * 0x1.0p-53);
    CHECK(initial_energy_gate(E0, c) == (E0 < c.d));
  }
  CHECK(initial_energy_gate(0.0, c));
  CHECK(initial_energy_gate(c.d * (1.0 - 1e-9), c));
  CHECK_FALSE(initial_energy_gate(c.d * (1.0 + 1e-9), c));
  CHECK_THROWS_AS(initial_energy_gate(-1.0, c), std::invalid_argument);

  // Strictness at E0 = d exactly, on constants where the gate expression
  // evaluates without rounding: c_star = 1, p = 4, d = 1/4 gives lhs = 1.
  WellConstants unit;
  unit.p = 4.0;
  unit.c_star = 1.0;
  unit.d = 0.25;
  CHECK_FALSE(initial_energy_gate(unit.d, unit));
  CHECK(initial_energy_gate(std::nextafter(unit.d, 0.0), unit));
}
