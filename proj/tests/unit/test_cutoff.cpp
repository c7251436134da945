#include <doctest.h>

#include <cmath>

#include "ltdiag/cutoff.hpp"

using namespace ltdiag;

TEST_SUITE("cutoff") {
  TEST_CASE("pointwise values") {
    const CutoffSpec plain{CutoffVariant::plain, 0.1, 1, 3};
    const double coincident[] = {0.3, 0.3, 0.9};
    CHECK(cutoff_evaluate(plain, coincident) == 0.0);
    const double apart[] = {0.0, 0.2, 0.45};
    CHECK(cutoff_evaluate(plain, apart) == doctest::Approx(1.0));
    const CutoffSpec crit{CutoffVariant::critical, 0.25, 1, 2};
    const double far[] = {0.0, std::exp(-4.0)};
    CHECK(cutoff_evaluate(crit, far) == doctest::Approx(1.0));
    const double near[] = {0.0, std::exp(-8.0)};
    CHECK(cutoff_evaluate(crit, near) == doctest::Approx(0.0));
    CHECK(parse_cutoff_variant("critical") == CutoffVariant::critical);
    CHECK_THROWS_AS(parse_cutoff_variant("soft"), Error);
  }

  TEST_CASE("exchange symmetry and scale consistency") {
    const CutoffSpec a{CutoffVariant::plain, 0.125, 2, 3};
    const CutoffSpec b{CutoffVariant::plain, 0.25, 2, 3};
    const double x[] = {0.1, 0.2, 0.27, 0.31, 0.5, 0.05};
    const double swapped[] = {0.27, 0.31, 0.1, 0.2, 0.5, 0.05};
    double x2[6];
    for (int i = 0; i < 6; ++i) x2[i] = 2.0 * x[i];
    CHECK(cutoff_evaluate(a, x) == cutoff_evaluate(a, swapped));
    CHECK(cutoff_evaluate(a, x) == cutoff_evaluate(b, x2));
    CHECK(cutoff_evaluate(a, x) > 0.0);
    CHECK(cutoff_evaluate(a, x) < 1.0);
  }

  TEST_CASE("graded pair seminorm matches the grid for a resolved cutoff") {
    const double eps = 0.25;
    const FractionalOrder s(0.5);
    GradedOptions o;
    o.r_min = 1e-8;
    const double graded = pair_seminorm_graded(
        [&](double, double t, int) { return pair_factor(CutoffVariant::plain, eps, std::abs(t)); }, CubeDomain::unit(1), 0.5, o, 8);
    const auto grid = cutoff_grid({CutoffVariant::plain, eps, 1, 2}, 257, CubeDomain::unit(1));
    const double direct = seminorm_HsN(grid, s, CubeDomain::unit(1)).value;
    CHECK(graded == doctest::Approx(direct).epsilon(0.03));
  }

  TEST_CASE("decay for a diagonal-vanishing state and non-decay for a constant") {
    const std::vector<double> eps{0.25, 0.125, 1.0 / 16, 1.0 / 32};
    const auto psi = GridFunction::sample(2, 257, CubeDomain::unit(1), GridKind::closed, [](std::span<const double> x) {
      return (x[0] - x[1]) * std::exp(-(x[0] * x[0] + x[1] * x[1]));
    });
    const auto e = approximation_decay(psi, CutoffVariant::plain, eps, FractionalOrder(1.0));
    for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] < e[i - 1]);
    const auto c = GridFunction::sample(2, 257, CubeDomain::unit(1), GridKind::closed, [](std::span<const double>) { return 1.0; });
    const auto ec = approximation_decay(c, CutoffVariant::plain, eps, FractionalOrder(1.0));
    CHECK(ec.back() > 0.1 * std::sqrt(c.norm_squared()));
  }

  TEST_CASE("fit needs three usable points and emits csv") {
    CHECK_THROWS_AS(cutoff_scaling_fit(CutoffVariant::plain, {0.25, 0.125}, FractionalOrder(0.9), 1, CubeDomain::unit(1), 65), Error);
    const auto f = cutoff_scaling_fit(CutoffVariant::plain, {0.25, 0.125, 1.0 / 16}, FractionalOrder(0.9), 1, CubeDomain::unit(1), 129);
    CHECK(f.expected == doctest::Approx(-0.4));
    CHECK(f.to_csv().rfind("epsilon,seminorm,residual\n", 0) == 0);
  }
}
