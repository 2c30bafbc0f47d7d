#include <cmath>

#include "doctest.h"
#include "relent/young_measure.hpp"
#include "testing.hpp"

using namespace relent;

namespace {

// Counting oracle: fraction of cells with value exactly `x` in window w.
double fraction_equal(const DiscreteField& f, std::size_t w, std::size_t cpw, double x) {
  std::size_t count = 0;
  for (std::size_t i = w * cpw; i < (w + 1) * cpw; ++i) count += f.scalar(i) == x;
  return static_cast<double>(count) / static_cast<double>(cpw);
}

}  // namespace

TEST_CASE("constant field gives Dirac windows") {
  const auto g = build_uniform_grid(0, 1, 256);
  const auto ym = estimate_young_measure(DiscreteField::constant(g, 3.5));
  CHECK(ym.windows.size() == 16);
  CHECK(ym.cells_per_window == 16);
  for (const auto& w : ym.windows) {
    REQUIRE(w.atoms().size() == 1);
    CHECK(w.atoms()[0].location[0] == 3.5);
    CHECK(w.atoms()[0].weight == 1.0);
  }
}

TEST_CASE("oscillation recovery matches exact counts") {
  const auto g = build_uniform_grid(0, 1, 1 << 14);
  const auto u = materialize(Oscillation{0, 1, 0.5}, 256, g);
  const auto ym = estimate_young_measure(u);
  for (std::size_t w = 0; w < ym.windows.size(); ++w) {
    const auto& m = ym.windows[w];
    const double r = ym.bin_width;
    CHECK(m.mass_near(0, r) == fraction_equal(u, w, ym.cells_per_window, 0));
    CHECK(m.mass_near(1, r) == fraction_equal(u, w, ym.cells_per_window, 1));
    CHECK(std::fabs(m.mass_near(0, r) - 0.5) <= 0.02);
    CHECK(std::fabs(m.mass_near(1, r) - 0.5) <= 0.02);
  }
}

TEST_CASE("strong perturbation windows sit near the limit") {
  const auto g = build_uniform_grid(0, 1, 4096);
  const auto base = DiscreteField::affine(g, 0, 1);
  const auto w = DiscreteField::constant(g, 1.0);
  const std::size_t n = 64;
  const auto un = materialize(StrongPerturbation{base, w, 1.0}, n, g);
  const auto ym = estimate_young_measure(un);
  for (std::size_t k = 0; k < ym.windows.size(); ++k) {
    std::vector<Atom> atoms;
    for (std::size_t i = k * ym.cells_per_window; i < (k + 1) * ym.cells_per_window; ++i) {
      atoms.push_back({{base.scalar(i)}, 1.0 / static_cast<double>(ym.cells_per_window)});
    }
    const double d = wasserstein1(ym.windows[k], DiscreteMeasure(atoms));
    CHECK(d <= 1.0 / n + ym.bin_width);
  }
}

TEST_CASE("window alignment") {
  const auto g = build_uniform_grid(0, 1, 100);
  const auto u = DiscreteField::constant(g, 1.0);
  CHECK_THROWS_AS(estimate_young_measure(u, {1.0 / 16}), AlignmentError);
  CHECK_THROWS_AS(estimate_young_measure(u, {0.3}), AlignmentError);
  CHECK_NOTHROW(estimate_young_measure(u, {0.25}));
  const auto v = DiscreteField::constant(g, std::vector<double>{1.0, 2.0});
  CHECK_THROWS_AS(estimate_young_measure(v, {0.25}), DomainError);
  YoungOptions tiny;
  tiny.window_width = 0.25;
  tiny.bin_width = 1e-12;
  const auto wide = DiscreteField::affine(g, 0, 1);
  CHECK_THROWS_AS(estimate_young_measure(wide, tiny), std::invalid_argument);
}

TEST_CASE("pooled estimate uses every term") {
  const auto g = build_uniform_grid(0, 1, 64);
  const auto s = sample_of({DiscreteField::constant(g, 0.0), DiscreteField::constant(g, 1.0)});
  YoungOptions pooled;
  pooled.pool_terms = true;
  const auto ym = estimate_young_measure(s, pooled);
  CHECK(ym.windows[0].mass_near(0, 0) == 0.5);
  CHECK(ym.windows[0].mass_near(1, 0) == 0.5);
  const auto last = estimate_young_measure(s);
  CHECK(last.windows[0].mass_near(1, 0) == 1.0);
  const auto j = young_to_json(ym);
  CHECK(j["windows"].size() == 16);
  CHECK(j["windows"][0]["x_lo"] == 0.0);
}

TEST_CASE("weak limit pairing errors") {
  const auto g = build_uniform_grid(0, 1, 1 << 14);
  const std::vector<std::size_t> sched{64, 128, 256};
  const auto s = sample(Oscillation{0, 1, 0.5}, sched, g);
  const auto ym = estimate_young_measure(s);
  const auto phis = default_test_functions(g);
  const auto id = test_weak_limit(s, [](double x) { return x; }, ym, phis);
  CHECK(id.rows.size() == phis.size() * sched.size());
  for (const auto& row : id.rows) {
    if (row.test_function == 0) CHECK(row.error <= 1e-15);
  }
  const auto absd = test_weak_limit(s, [](double x) { return std::fabs(x - 0.5); }, ym, phis);
  for (double e : absd.final_errors) CHECK(e < 0.02);

  // Strong perturbation: error bounded by n^-alpha ||w||_1 max|phi|.
  const auto base = DiscreteField::affine(g, 0, 1);
  const auto w = DiscreteField::from_cells(g, [&](std::size_t i) { return std::sin(7 * g.midpoint(i)); });
  const std::vector<std::size_t> sched2{16, 32, 64};
  const auto s2 = sample(StrongPerturbation{base, w, 1.0}, sched2, g);
  const auto ym2 = estimate_young_measure(sample_of({base}));
  const auto t2 = test_weak_limit(s2, [](double x) { return x; }, ym2, phis);
  for (const auto& row : t2.rows) {
    // Histogram resolution of the limit adds a bin-width term.
    CHECK(row.error <= lp_norm(w, 1) / static_cast<double>(row.n) + ym2.bin_width);
  }
}

TEST_CASE("concentration estimates") {
  const auto g = build_uniform_grid(0, 1, 10000);
  const std::size_t n = 100;
  const auto spike = sample(ConcentrationSpike{2, 0.5, 0, 0}, std::span<const std::size_t>(&n, 1), g);
  const auto ym = estimate_young_measure(spike, {1.0 / 16});
  const auto c = estimate_concentration(spike, EntropySpec::power(2), ym);
  CHECK(std::fabs(c.total - 1.0) <= 0.05);
  CHECK(ym.window_grid.left(c.peak_window) <= 0.5);
  CHECK(ym.window_grid.right(c.peak_window) > 0.5);
  CHECK_FALSE(c.estimator_failure);

  const auto go = build_uniform_grid(0, 1, 1 << 14);
  const std::size_t no = 256;
  const auto osc = sample(Oscillation{0, 1, 0.5}, std::span<const std::size_t>(&no, 1), go);
  const auto ymo = estimate_young_measure(osc);
  const auto co = estimate_concentration(osc, EntropySpec::power(2), ymo);
  CHECK(std::fabs(co.total) <= 0.02);
}

// Properties

TEST_CASE("property: window measures are probability measures") {
  relent::testing::for_all(61, 100, [](relent::testing::Gen& gen, std::size_t) {
    const std::size_t windows = std::size_t{1} << gen.index(0, 5);
    const auto g = build_uniform_grid(0, 1, windows * gen.index(1, 40));
    const auto u = gen.field(g, -gen.uniform(0, 5), gen.uniform(0.1, 5));
    YoungOptions o;
    o.window_width = 1.0 / static_cast<double>(windows);
    o.atom_threshold = gen.uniform(0.05, 0.9);
    const auto ym = estimate_young_measure(u, o);
    for (const auto& m : ym.windows) {
      CHECK(std::fabs(m.total_mass() - 1.0) <= 1e-10);
      for (const auto& a : m.atoms()) CHECK(a.weight >= 0.0);
      if (m.bins()) {
        for (double x : m.bins()->weights) CHECK(x >= 0.0);
      }
    }
  });
}

TEST_CASE("property: spike concentration mass stays near one") {
  for (std::size_t n : {100, 125, 200, 400}) {
    const auto g = build_uniform_grid(0, 1, 16000);
    for (double p : {1.5, 2.0, 3.0}) {
      const auto s = sample(ConcentrationSpike{p, 0.5, 0, 0}, std::span<const std::size_t>(&n, 1), g);
      const auto ym = estimate_young_measure(s, {1.0 / 16});
      const auto c = estimate_concentration(s, EntropySpec::power(p), ym);
      CHECK(c.total >= 0.9);
      CHECK(c.total <= 1.1);
      for (double e : c.window_excess) CHECK(e >= -3e-8);
    }
  }
}
