#include <doctest.h>

#include <cmath>

#include "ltdiag/extension.hpp"

using namespace ltdiag;

TEST_SUITE("extension") {
  TEST_CASE("reflection coefficients") {
    CHECK(reflection_coefficients(0).lambdas == std::vector<Rational>{1});
    CHECK(reflection_coefficients(1).lambdas == std::vector<Rational>{-3, 4});
    CHECK(reflection_coefficients(2).lambdas == std::vector<Rational>{6, -32, 27});
    for (int n = 0; n <= 8; ++n) {
      const auto r = reflection_coefficients(n);
      // independent check: sum_j lambda_j (-1/j)^i = 1 for i = 0..n
      for (int i = 0; i <= n; ++i) {
        Rational acc = 0;
        for (int j = 1; j <= n + 1; ++j) {
          Rational p = 1;
          for (int e = 0; e < i; ++e) p *= Rational(-1, j);
          acc += r.lambdas[static_cast<std::size_t>(j - 1)] * p;
        }
        CHECK(acc == 1);
      }
      for (const auto& res : r.residuals()) CHECK(res == 0);
    }
  }

  TEST_CASE("smooth step and profile") {
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(smooth_step(0.3) + smooth_step(0.7) == doctest::Approx(1.0));
    CHECK(extension_profile(-0.5) == 0.0);
    CHECK(extension_profile(-0.25) == 1.0);
  }

  TEST_CASE("extension is exact on [0,1] and vanishes beyond delta") {
    const int g = 257;
    std::vector<double> v(g);
    for (int i = 0; i < g; ++i) v[static_cast<std::size_t>(i)] = std::exp(i / double(g - 1));
    const auto e = extend_1d(v, 2);
    for (int i = 0; i < g; ++i) CHECK(e.at_index(i) == v[static_cast<std::size_t>(i)]);
    for (int i = -(g - 1); i < 0; ++i) {
      if (e.x[static_cast<std::size_t>(i + g - 1)] <= -0.5) CHECK(e.at_index(i) == 0.0);
    }
    // constant with n = 0: phi(x) * c on the left
    std::vector<double> c(g, 2.0);
    const auto ec = extend_1d(c, 0);
    CHECK(ec.at_index(-40) == doctest::Approx(2.0 * extension_profile(ec.x[static_cast<std::size_t>(g - 1 - 40)])));
  }

  TEST_CASE("derivative matching for monomials") {
    const int g = 512;
    for (int p = 1; p <= 3; ++p) {
      std::vector<double> v(g);
      for (int i = 0; i < g; ++i) v[static_cast<std::size_t>(i)] = std::pow(i / double(g - 1), p);
      for (int n = 1; n <= 3; ++n) {
        for (const auto& m : derivative_matching(extend_1d(v, n), n)) CHECK(m.ok);
      }
    }
  }
}
