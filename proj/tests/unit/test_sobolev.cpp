#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ltdiag/sobolev.hpp"
#include "ltdiag/special_functions.hpp"

using namespace ltdiag;
constexpr double kPi = std::numbers::pi;

TEST_SUITE("sobolev") {
  TEST_CASE("special functions") {
    // zeta(2) = pi^2/6, Hurwitz at a = 1/2: (2^s - 1) zeta(s)
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-13));
    CHECK(hurwitz_zeta(2.0, 0.5) == doctest::Approx(3.0 * kPi * kPi / 6.0).epsilon(1e-13));
    CHECK(gagliardo_constant(1, 0.5) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
    CHECK(epstein_zeta(1, 2.0) == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-13));
    CHECK(epstein_zeta(2, 0.0) == doctest::Approx(-1.0));
    // square lattice: Z_2(4) = 4 zeta(2) beta(2) with Catalan's constant beta(2)
    CHECK(epstein_zeta(2, 4.0) == doctest::Approx(4.0 * kPi * kPi / 6.0 * 0.915965594177219015).epsilon(1e-10));
    const auto g = gauss_legendre(5);
    double x8 = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) x8 += g.weights[i] * std::pow(g.nodes[i], 8);
    CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  }

  TEST_CASE("multi-index weights are multinomials") {
    long long total = 0;
    for (const auto& t : multi_indices(3, 2)) total += t.weight;
    CHECK(total == 9);  // sum m!/alpha! = d^m
  }

  TEST_CASE("constants have zero seminorm") {
    const auto c = GridFunction::sample(1, 65, CubeDomain::unit(1), GridKind::closed, [](std::span<const double>) { return 3.0; });
    for (double s : {0.25, 0.5, 1.0, 1.5, 2.0}) CHECK(std::abs(seminorm_HsN(c, FractionalOrder(s), CubeDomain::unit(1)).value) <= 1e-12);
  }

  TEST_CASE("integer orders against hand integrals") {
    const CubeDomain unit = CubeDomain::unit(1);
    const auto x = GridFunction::sample(1, 129, unit, GridKind::closed, [](std::span<const double> p) { return p[0]; });
    CHECK(seminorm_HsN(x, FractionalOrder(1.0), unit).value == doctest::Approx(1.0).epsilon(1e-4));
    const auto x2 = GridFunction::sample(1, 129, unit, GridKind::closed, [](std::span<const double> p) { return p[0] * p[0]; });
    CHECK(seminorm_HsN(x2, FractionalOrder(2.0), unit).value == doctest::Approx(4.0).epsilon(1e-4));
    // |grad(xy)|^2 = y^2 + x^2 integrates to 2/3 over the square
    const auto xy = GridFunction::sample(1, 65, CubeDomain::unit(2), GridKind::closed,
                                         [](std::span<const double> p) { return p[0] * p[1]; });
    CHECK(seminorm_HsN(xy, FractionalOrder(1.0), CubeDomain::unit(2)).value == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
  }

  TEST_CASE("localization: x on halves of [0,1]") {
    const CubeDomain unit = CubeDomain::unit(1);
    const auto x = GridFunction::sample(1, 129, unit, GridKind::closed, [](std::span<const double> p) { return p[0]; });
    const double left = seminorm_HsN(x, FractionalOrder(1.0), CubeDomain::with_corner(1, 0.0, 0.5)).value;
    CHECK(left == doctest::Approx(0.5).epsilon(1e-4));
    CHECK_THROWS_AS(seminorm_HsN(x, FractionalOrder(1.0), CubeDomain::with_corner(1, 0.5, 1.0)), Error);
  }

  TEST_CASE("periodic Gagliardo form against the analytic multiplier") {
    // |cos(2 pi k x)|^2_{H^sigma(T)} = (2 pi k)^{2 sigma} / 2
    for (double sigma : {0.5, 0.75}) {
      for (int k : {1, 2}) {
        const auto u = GridFunction::sample(1, 256, CubeDomain::unit(1), GridKind::periodic,
                                            [&](std::span<const double> p) { return std::cos(2.0 * kPi * k * p[0]); });
        const double exact = 0.5 * std::pow(2.0 * kPi * k, 2.0 * sigma);
        CHECK(seminorm_HsN(u, FractionalOrder(sigma), CubeDomain::unit(1)).value == doctest::Approx(exact).epsilon(0.02));
        CHECK(global_seminorm_fourier(u, FractionalOrder(sigma)) == doctest::Approx(exact).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("diagonal correction is needed") {
    const auto u = GridFunction::sample(1, 256, CubeDomain::unit(1), GridKind::periodic,
                                        [](std::span<const double> p) { return std::sin(2.0 * kPi * p[0]); });
    const double exact = 0.5 * std::pow(2.0 * kPi, 1.5);
    const double plain = seminorm_HsN(u, FractionalOrder(0.75), CubeDomain::unit(1), {false}).value;
    const double corrected = seminorm_HsN(u, FractionalOrder(0.75), CubeDomain::unit(1)).value;
    CHECK(std::abs(corrected - exact) < std::abs(plain - exact));
  }

  TEST_CASE("norm equivalence on random band-limited states") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    for (double s : {0.5, 1.0, 2.0}) {
      for (int t = 0; t < 5; ++t) {
        std::vector<double> c(9);
        for (double& v : c) v = n01(rng);
        const auto psi = GridFunction::sample(2, 16, CubeDomain::unit(1), GridKind::periodic, [&](std::span<const double> x) {
          double v = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              v += c[static_cast<std::size_t>(3 * a + b)] * std::cos(2.0 * kPi * (a * x[0] + b * x[1]) + a - b);
          return v;
        });
        const auto eq = norm_equivalence_check(psi, FractionalOrder(s));
        CHECK(eq.ok);
        REQUIRE(eq.ratio.has_value());
        if (s == 1.0) CHECK(*eq.ratio == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("one-body form: kernel and linear function") {
    const int g = 33;
    const auto a = one_body_form(1, FractionalOrder(1.0), g, 1.0);
    std::vector<double> ones(g, 1.0), x(g);
    for (int i = 0; i < g; ++i) x[static_cast<std::size_t>(i)] = i / double(g - 1);
    double q1 = 0.0, qx = 0.0;
    for (int i = 0; i < g; ++i) {
      q1 += ones[static_cast<std::size_t>(i)] * a.apply_row(i, ones);
      qx += x[static_cast<std::size_t>(i)] * a.apply_row(i, x);
    }
    CHECK(std::abs(q1) < 1e-10);
    CHECK(qx == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("graded Gagliardo form of a jump") {
    // 1_{t>0} on [-1,1]: 2 c int_{-1}^0 int_0^1 (t'-t)^{-1-2s} = 2c (2 - 2^{1-2s}) / (2s (1-2s))
    const double sigma = 0.25;
    const double exact = 2.0 * gagliardo_constant(1, sigma) * (2.0 - std::pow(2.0, 1.0 - 2.0 * sigma)) /
                         (2.0 * sigma * (1.0 - 2.0 * sigma));
    const double bp[] = {0.0};
    const double v = graded_gagliardo_1d([](double t) { return t > 0.0 ? 1.0 : 0.0; }, -1.0, 1.0, sigma, bp);
    CHECK(v == doctest::Approx(exact).epsilon(1e-6));
    const double area = graded_integral_1d([](double t) { return t * t; }, -1.0, 1.0, bp);
    CHECK(area == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
}
