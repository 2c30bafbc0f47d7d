#include <cfloat>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "relent/functionals.hpp"
#include "testing.hpp"

using namespace relent;
using relent::testing::Gen;

namespace {

// v = 2 on (0, 1/2), 0 elsewhere; u = 1.
std::pair<DiscreteField, DiscreteField> analytic_pair(std::size_t n = 64) {
  const auto g = build_uniform_grid(0, 1, n);
  const auto v = DiscreteField::from_cells(g, [n](std::size_t i) { return i < n / 2 ? 2.0 : 0.0; });
  return {v, DiscreteField::constant(g, 1.0)};
}

}  // namespace

TEST_CASE("make_verdict ratio conventions") {
  const auto a = make_verdict("x", 0, 0);
  CHECK(a.holds);
  CHECK(a.ratio == 1.0);
  const auto b = make_verdict("x", 0, 2);
  CHECK(b.ratio == INFINITY);
  const auto c = make_verdict("x", 2, 1);
  CHECK_FALSE(c.holds);
  CHECK(c.ratio == 0.5);
  CHECK(c.slack == -1.0);
  // Within the relative tolerance.
  CHECK(make_verdict("x", 1 + 1e-11, 1).holds);
}

TEST_CASE("rel_entropy_functional examples") {
  const auto g = build_uniform_grid(0, 1, 10000);
  const auto x = DiscreteField::affine(g, 0, 1);
  const auto zero = DiscreteField::constant(g, 0.0);
  CHECK(std::fabs(rel_entropy_functional(EntropySpec::quadratic(), x, zero) - 1.0 / 3) < 1e-8);
  // Closed form of the midpoint sum: 1/3 - dx^2/12.
  const double dx = g.dx();
  CHECK(rel_entropy_functional(EntropySpec::quadratic(), x, zero) ==
        doctest::Approx(1.0 / 3 - dx * dx / 12).epsilon(1e-14));
  CHECK(rel_entropy_functional(EntropySpec::power(3), x, x) == 0.0);

  for (double p : {1.5, 2.0, 3.0}) {
    for (std::size_t n : {4, 16, 64, 256, 1024}) {
      const auto gs = build_uniform_grid(0, 1, 1 << 15);
      const std::size_t w = gs.cells / n;
      const double height = std::pow(static_cast<double>(n), 1 / p);
      const auto spike = DiscreteField::from_cells(gs, [&](std::size_t i) {
        return i >= gs.cells / 2 && i < gs.cells / 2 + w ? height : 0.0;
      });
      const double got = rel_entropy_functional(EntropySpec::power(p), spike,
                                                DiscreteField::constant(gs, 0.0));
      CHECK(std::fabs(got - 1.0) <= 4 * DBL_EPSILON);
    }
  }
}

TEST_CASE("rel_entropy_functional reports the failing cell") {
  const auto g = build_uniform_grid(0, 1, 4);
  const DiscreteField v(g, 1, {1, 1, -1, 1});
  const auto u = DiscreteField::constant(g, 1.0);
  try {
    rel_entropy_functional(EntropySpec::xlogx(), v, u);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.cell() == 2u);
  }
  CHECK_THROWS_AS(rel_entropy_functional(EntropySpec::quadratic(), v,
                                         DiscreteField::constant(build_uniform_grid(0, 1, 5), 1.0)),
                  GridMismatch);
}

TEST_CASE("kl_divergence examples") {
  auto [v, u] = analytic_pair();
  CHECK(kl_divergence(v, v) == 0.0);
  CHECK(kl_divergence(v, u) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(kl_divergence(u, v) == INFINITY);
  CHECK_THROWS_AS(kl_divergence(-1.0 * v, u), DomainError);
}

TEST_CASE("ckp_check examples") {
  auto [v, u] = analytic_pair();
  const auto id = ckp_check(u, u);
  CHECK(id.lhs == 0.0);
  CHECK(id.rhs == 0.0);
  CHECK(id.holds);
  const auto r = ckp_check(v, u);
  CHECK(std::fabs(r.lhs - 1.0) <= 1e-8);
  CHECK(std::fabs(r.rhs - 2 * std::log(2.0)) <= 1e-8);
  CHECK(r.holds);

  const auto heavy = 2.0 * u;
  CHECK_THROWS_AS(ckp_check(heavy, u), ValidationError);
  const auto ok = ckp_check(heavy, u, {1e-8, true});
  CHECK(ok.lhs == 0.0);
}

TEST_CASE("generalized_ckp_check examples") {
  auto [v, u] = analytic_pair();
  const auto f = EntropySpec::normalized_xlogx();
  const auto r = generalized_ckp_check(f, v, u, 1.0, 1.0);
  CHECK(r.lhs == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r.rhs == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(r.holds);
  const auto id = generalized_ckp_check(f, u, u, 1.0, 1.0);
  CHECK(id.lhs == 0.0);
  CHECK(id.rhs == 0.0);
  CHECK(id.holds);
  CHECK_THROWS_AS(generalized_ckp_check(EntropySpec::xlogx(), v, u, 1, 1), ValidationError);
  CHECK_THROWS_AS(generalized_ckp_check(f, v, u, 1, 0), ValidationError);
  CHECK_THROWS_AS(generalized_ckp_check(f, v, u, 3, 1), std::invalid_argument);
  // A vanishing norm makes the p < 2 prefactor undefined.
  const auto zero = DiscreteField::constant(u.grid(), 0.0);
  const auto d = generalized_ckp_check(f, zero, u, 1.5, 0.5);
  CHECK(d.degenerate);
  CHECK(d.holds);
}

TEST_CASE("uniform convexity bound") {
  Gen g(5);
  const auto grid = build_uniform_grid(0, 1, 50);
  const auto v = g.field(grid, -3, 3), u = g.field(grid, -3, 3);
  const auto one = uniform_convexity_bound_check(EntropySpec::quadratic(), 1.0, v, u);
  CHECK(one.holds);
  CHECK(one.ratio == doctest::Approx(1.0).epsilon(1e-14));
  const auto bad = uniform_convexity_bound_check(EntropySpec::quadratic(), 2.5, v, u);
  CHECK_FALSE(bad.holds);
  CHECK(bad.ratio == doctest::Approx(0.4).epsilon(1e-14));
  const auto id = uniform_convexity_bound_check(EntropySpec::quadratic(), 2.5, v, v);
  CHECK(id.holds);
  CHECK(id.lhs == 0.0);
}

TEST_CASE("power identity examples") {
  Gen g(6);
  const auto grid = build_uniform_grid(0, 1, 100);
  const auto v = g.field(grid, -3, 3), u = g.field(grid, -3, 3);
  const auto two = power_identity(2, v, u);
  CHECK(std::fabs(two.lhs - two.rhs) <= 1e-12 * std::fabs(two.lhs));
  CHECK(two.lhs == doctest::Approx(lp_norm_pow(v, 2) - lp_norm_pow(u, 2)).epsilon(1e-14));
  const auto id = power_identity(3, v, v);
  CHECK(id.lhs == 0.0);
  CHECK(id.rhs == 0.0);
}

TEST_CASE("verdict csv") {
  auto [v, u] = analytic_pair();
  const std::vector<InequalityVerdict> rows{ckp_check(v, u), ckp_check(u, u)};
  std::ostringstream out;
  write_verdict_csv(out, rows);
  const std::string s = out.str();
  CHECK(s.rfind("check,lhs,rhs,slack,holds\n", 0) == 0);
  CHECK(s.find("\nckp,0,0,0,1\n") != std::string::npos);
}

// Properties

TEST_CASE("property: relative entropy functional is nonnegative, zero on the diagonal") {
  relent::testing::for_all(31, 300, [](Gen& g, std::size_t) {
    const auto grid = build_uniform_grid(0, 1, g.index(1, 200));
    const auto u = g.positive_field(grid, 1e-2, 10), v = g.positive_field(grid, 1e-2, 10);
    for (const auto& h : {EntropySpec::power(1.5), EntropySpec::power(3), EntropySpec::quadratic(),
                          EntropySpec::xlogx(), EntropySpec::normalized_xlogx()}) {
      CHECK(rel_entropy_functional(h, v, u) > 0.0);
      CHECK(rel_entropy_functional(h, u, u) == 0.0);
    }
  });
}

TEST_CASE("property: ckp holds on random densities") {
  relent::testing::for_all(32, 300, [](Gen& g, std::size_t) {
    const auto grid = build_uniform_grid(0, 1, g.index(2, 400));
    const auto v = g.density(grid), u = g.density(grid);
    const auto r = ckp_check(v, u);
    CHECK(r.holds);
    CHECK(r.rhs == doctest::Approx(2 * static_cast<double>(relent::testing::kl_oracle(v, u)))
                       .epsilon(1e-10));
  });
}

TEST_CASE("property: generalized ckp with probed A") {
  const auto f = EntropySpec::normalized_xlogx();
  relent::testing::for_all(33, 300, [&](Gen& g, std::size_t) {
    const auto grid = build_uniform_grid(0, 1, g.index(2, 300));
    const auto v = g.positive_field(grid, 1e-2, 10), u = g.positive_field(grid, 1e-2, 10);
    for (double p : {1.0, 1.5, 2.0}) {
      const double lo = std::min(min_component(v), min_component(u));
      const double hi = std::max(max_magnitude(v), max_magnitude(u));
      const double A = compute_A(f, p, lo, hi * (1 + 1e-12)).value;
      CHECK(generalized_ckp_check(f, v, u, p, A).holds);
    }
  });
}

TEST_CASE("property: kl equals the normalized entropy functional at equal mass") {
  relent::testing::for_all(34, 300, [](Gen& g, std::size_t) {
    const auto grid = build_uniform_grid(0, 1, g.index(2, 300));
    const auto v = g.density(grid), u = g.density(grid);
    const double kl = kl_divergence(v, u);
    const double f = rel_entropy_functional(EntropySpec::normalized_xlogx(), v, u);
    CHECK(std::fabs(kl - f) <= 1e-10 * std::max(kl, 1e-3));
  });
}

TEST_CASE("property: power identity holds to 1e-10") {
  relent::testing::for_all(35, 500, [](Gen& g, std::size_t) {
    const auto grid = build_uniform_grid(0, 1, g.index(1, 300));
    const double p = g.uniform(1.1, 4);
    const auto v = g.field(grid, -5, 5), u = g.field(grid, -5, 5);
    const auto id = power_identity(p, v, u);
    const double scale = lp_norm_pow(v, p) + lp_norm_pow(u, p);
    CHECK(std::fabs(id.lhs - id.rhs) <= 1e-10 * scale);
  });
}

TEST_CASE("property: power entropy functional scales like t^p") {
  relent::testing::for_all(36, 300, [](Gen& g, std::size_t) {
    const auto grid = build_uniform_grid(0, 1, g.index(1, 200));
    const double p = g.uniform(1.2, 4), t = g.log_uniform(0.1, 10);
    const auto h = EntropySpec::power(p);
    const auto v = g.field(grid, -5, 5), u = g.field(grid, -5, 5);
    const double base = rel_entropy_functional(h, v, u);
    CHECK(rel_entropy_functional(h, t * v, t * u) ==
          doctest::Approx(std::pow(t, p) * base).epsilon(1e-10));
  });
}

TEST_CASE("property: quadratic functional equals the squared L2 distance") {
  relent::testing::for_all(37, 300, [](Gen& g, std::size_t) {
    const auto grid = build_uniform_grid(0, 1, g.index(1, 200));
    const auto v = g.field(grid, -5, 5), u = g.field(grid, -5, 5);
    const double f = rel_entropy_functional(EntropySpec::quadratic(), v, u);
    CHECK(f == doctest::Approx(static_cast<double>(relent::testing::lp_pow_oracle(v, u, 2)))
                   .epsilon(1e-14));
  });
}
