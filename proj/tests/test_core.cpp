#include <doctest.h>

#include "pwell/mesh.hpp"
#include "pwell/norms.hpp"
#include "pwell/operators.hpp"
#include "pwell/params.hpp"
#include "pwell/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <random>

using namespace pwell;

namespace {

std::vector<double> random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> u(n);
  for (double& x : u) x = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
  return u;
}

std::vector<double> interpolate(const Mesh1D& mesh, double (*f)(double)) {
  std::vector<double> u(mesh.n_free());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(mesh.nodes[i + 1]);
  return u;
}

ProblemParams default_params() { return ProblemParams{}; }

} // namespace

TEST_CASE("validate_params purposes") {
  ProblemParams p;
  p.p = 4.0;
  p.m = 2.0;
  CHECK(validate_params(p, ValidationPurpose::BlowupRegime).ok());

  p.p = 2.0;
  const auto well = validate_params(p, ValidationPurpose::WellDepth);
  CHECK_FALSE(well.ok());
  CHECK(well.violations.front() == "p must exceed 2");
  CHECK(validate_params(p, ValidationPurpose::Simulate).ok());

  p.p = 3.0;
  p.m = 3.0;
  const auto blowup = validate_params(p, ValidationPurpose::BlowupRegime);
  CHECK_FALSE(blowup.ok());
  bool found = false;
  for (const auto& v : blowup.violations) found |= (v == "m must equal 2");
  CHECK(found);

  p.m = 1.5;
  CHECK_FALSE(validate_params(p, ValidationPurpose::Simulate).ok());
  p.m = 2.0;
  p.alpha = -1.0;
  CHECK_FALSE(validate_params(p, ValidationPurpose::Simulate).ok());
}

TEST_CASE("build_mesh uniform and graded") {
  const Mesh1D uniform = build_mesh(4, 1.0);
  REQUIRE(uniform.nodes.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(uniform.nodes[i] == doctest::Approx(0.25 * i).epsilon(1e-15));
  }

  // Ratio 2 between adjacent sizes, shrinking toward x = 1.
  const Mesh1D graded = build_mesh(2, 2.0);
  CHECK(graded.element_sizes[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(graded.element_sizes[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(graded.nodes[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(graded.nodes[2] == 1.0);

  CHECK_THROWS_AS(build_mesh(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh(4, 0.5), std::invalid_argument);
}

TEST_CASE("assembly matches hand values on the 2-element uniform mesh") {
  const Mesh1D mesh = build_mesh(2, 1.0);
  ProblemParams params = default_params();
  const DiscreteOperators ops = assemble(mesh, params);

  REQUIRE(ops.n() == 2);
  CHECK(ops.K.diag[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(ops.K.diag[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ops.K.off[0] == doctest::Approx(-2.0).epsilon(1e-15));

  CHECK(ops.M.diag[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(ops.M.diag[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(ops.M.off[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));

  CHECK(ops.gamma1_index == 1);
  CHECK(ops.boundary_mass == doctest::Approx(1.0));

  params.a = 2.0;
  const DiscreteOperators ops2 = assemble(mesh, params);
  CHECK(ops2.boundary_mass == doctest::Approx(0.5));
}

TEST_CASE("operators are SPD on random vectors") {
  const Mesh1D mesh = build_mesh(17, 1.3);
  const DiscreteOperators ops = assemble(mesh, default_params());
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto x = random_field(ops.n(), seed);
    CHECK(ops.M.quad_form(x) > 0.0);
    CHECK(ops.K.quad_form(x) > 0.0);
  }
}

TEST_CASE("affine interpolants have exact H1 seminorm") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 6; ++rep) {
    const double slope = 4.0 * ((rng() >> 11) * 0x1.0p-53) - 2.0;
    const Mesh1D mesh = build_mesh(9 + rep, 1.0 + 0.1 * rep);
    const DiscreteOperators ops = assemble(mesh, default_params());
    std::vector<double> u(ops.n());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = slope * mesh.nodes[i + 1];
    CHECK(norm(ops, u, NormKind::h1_semi()) ==
          doctest::Approx(std::abs(slope)).epsilon(1e-12));
  }
}

TEST_CASE("norms of the interpolant of x") {
  const Mesh1D mesh = build_mesh(16, 1.0);
  const DiscreteOperators ops = assemble(mesh, default_params());
  const auto u = interpolate(mesh, [](double x) { return x; });

  CHECK(norm(ops, u, NormKind::h1_semi()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm(ops, u, NormKind::l2()) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  // The interpolant of x is x itself, so the quadrature is exact already.
  CHECK(norm(ops, u, NormKind::lp(4.0)) ==
        doctest::Approx(std::pow(0.2, 0.25)).epsilon(1e-14));
  CHECK(norm(ops, u, NormKind::trace_l2()) == doctest::Approx(1.0));
  CHECK(norm(ops, u, NormKind::trace_abs_pow(3.0)) == doctest::Approx(1.0));
}

TEST_CASE("Lp error of a curved field drops 4x under mesh bisection") {
  // Oracle: |sin(pi x / 2)|^4 integrates to 3/8 on (0,1).
  const double exact = 3.0 / 8.0;
  auto lp4_of_sine = [&](std::size_t n) {
    const Mesh1D mesh = build_mesh(n, 1.0);
    const DiscreteOperators ops = assemble(mesh, default_params());
    const auto u = interpolate(mesh, [](double x) { return std::sin(0.5 * M_PI * x); });
    return lp_power(mesh, u, 4.0, ops.source_rule);
  };
  const double err_n = std::abs(lp4_of_sine(32) - exact);
  const double err_2n = std::abs(lp4_of_sine(64) - exact);
  CHECK(err_n / err_2n == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("trace norms follow the 1/a weight") {
  const Mesh1D mesh = build_mesh(8, 1.0);
  ProblemParams params = default_params();
  params.a = 2.0;
  const DiscreteOperators ops = assemble(mesh, params);
  auto u = interpolate(mesh, [](double x) { return x; });
  u[ops.gamma1_index] = -3.0;
  CHECK(norm(ops, u, NormKind::trace_l2()) == doctest::Approx(3.0 / std::sqrt(2.0)));
  CHECK(norm(ops, u, NormKind::trace_abs_pow(2.0)) == doctest::Approx(9.0 / 2.0));
  CHECK(norm(ops, u, NormKind::trace_abs_pow(3.0)) == doctest::Approx(27.0 / 2.0));
}

TEST_CASE("norm rejects dimension mismatches") {
  const Mesh1D mesh = build_mesh(8, 1.0);
  const DiscreteOperators ops = assemble(mesh, default_params());
  std::vector<double> wrong(ops.n() + 1, 1.0);
  CHECK_THROWS_AS(norm(ops, wrong, NormKind::l2()), std::invalid_argument);
}

TEST_CASE("Gauss rules integrate monomials exactly") {
  for (int k = 1; k <= 8; ++k) {
    const GaussRule rule = gauss_legendre(k);
    for (int deg = 0; deg <= 2 * k - 1; ++deg) {
      double acc = 0.0;
      for (int q = 0; q < rule.n(); ++q) {
        acc += rule.weights[q] * std::pow(rule.points[q], deg);
      }
      CHECK(acc == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("tridiagonal solve matches apply") {
  const Mesh1D mesh = build_mesh(33, 1.1);
  const DiscreteOperators ops = assemble(mesh, default_params());
  const auto x = random_field(ops.n(), 99);
  const auto b = ops.K.apply(x);
  const auto solved = solve_tridiag(ops.K, b);
  REQUIRE(solved.has_value());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK((*solved)[i] == doctest::Approx(x[i]).epsilon(1e-9));
  }
}
