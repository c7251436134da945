#include <doctest.h>

#include "ltdiag/polynomials.hpp"

using namespace ltdiag;

namespace {
SparsePolynomial var(int n, int i) { return SparsePolynomial::variable(n, i); }
}  // namespace

TEST_SUITE("polynomials") {
  TEST_CASE("exact arithmetic") {
    const auto x = var(2, 0), y = var(2, 1);
    const auto one = SparsePolynomial::constant(2, 1);
    CHECK((x + one) * (x - one) == x * x - one);
    CHECK(((x * x * y).derivative(0, 2)) == SparsePolynomial::constant(2, 2) * y);
    const Rational pt[] = {Rational(1, 3), Rational(2)};
    CHECK((x * y + one).evaluate(std::span<const Rational>(pt)) == Rational(5, 3));
    const auto f = x * x * Rational(7, 5) - y;
    CHECK(SparsePolynomial::from_json(f.to_json()) == f);
    CHECK(f.degree_in(0) == 2);
    CHECK(f.max_var_degree() == 2);
  }

  TEST_CASE("coincidence substitution") {
    const auto f = var(3, 0) - var(3, 1);
    CHECK(substitute_coincidence(f, 1, CoincidencePattern::single_block(3, {0, 1})).is_zero());
    CHECK_FALSE(substitute_coincidence(f, 1, CoincidencePattern::single_block(3, {1, 2})).is_zero());
  }

  TEST_CASE("vanishing on diagonals") {
    CHECK(vanishes_on_k_diagonal(vandermonde_polynomial(4), 1, 2));
    CHECK_FALSE(vanishes_on_k_diagonal(var(2, 0) + var(2, 1), 1, 2));
    // (x1 - x2)(x2 - x3) vanishes on the triple diagonal but not on every pair diagonal
    const auto g = (var(3, 0) - var(3, 1)) * (var(3, 1) - var(3, 2));
    CHECK(vanishes_on_k_diagonal(g, 1, 3));
    CHECK_FALSE(vanishes_on_k_diagonal(g, 1, 2));
  }

  TEST_CASE("dimension of vanishing spaces") {
    CHECK(vanishing_space_dimension(1, 2, 2, 1) == 1);
    CHECK(vanishing_space_dimension(1, 3, 2, 1) == 0);
    CHECK(vanishing_space_dimension(1, 4, 2, 1) == 0);
    // (x - y) g with deg g <= 1 in each variable
    CHECK(vanishing_space_dimension(1, 2, 2, 2) == 4);
    // multilinear in 3 variables (8) minus the 4 coefficients of f(t,t,t)
    CHECK(vanishing_space_dimension(1, 3, 3, 1) == 4);
    // d=2, N=2, S=1: 16 monomials, restriction to x=y has 3^2 = 9 coefficients
    CHECK(vanishing_space_dimension(2, 2, 2, 1) == 7);
  }

  TEST_CASE("tensor interpolation recovers polynomials") {
    const std::vector<std::vector<double>> nodes{{0.0, 1.0, 2.0}, {0.0, 1.0}};
    std::vector<double> samples;
    for (double a : nodes[0]) {
      for (double b : nodes[1]) samples.push_back(1.0 + 2.0 * a + 3.0 * a * b - a * a);
    }
    const auto p = tensor_interpolate(samples, nodes);
    const auto x = var(2, 0), y = var(2, 1);
    CHECK(p == SparsePolynomial::constant(2, 1) + x * Rational(2) + x * y * Rational(3) - x * x);
  }

  TEST_CASE("counterexample has a vanishing local form and finite weight") {
    const auto u = counterexample_polynomial(3, 2);
    CHECK(u.n_vars() == 6);
    CHECK(vanishes_on_k_diagonal(u, 3, 2));
    CHECK(local_form_vanishes(u, 3, 2));
    CHECK_FALSE(local_form_vanishes(u, 3, 1));
    const auto r = wsk_integral(u, 3, FractionalOrder(2.0), 2, CubeDomain::unit(3), 32);
    CHECK(r.converged);
    CHECK_FALSE(r.diverged);
    const auto c = wsk_integral(SparsePolynomial::constant(6, 1), 3, FractionalOrder(2.0), 2, CubeDomain::unit(3), 32);
    CHECK(c.diverged);
  }

  TEST_CASE("pair-offset and direct quadratures agree") {
    const auto u = var(2, 0) * var(2, 0) - var(2, 1);
    const double a = wsk_quadrature(u, 1, FractionalOrder(0.25), 2, CubeDomain::unit(1), 9, false);
    const double b = wsk_quadrature(u, 1, FractionalOrder(0.25), 2, CubeDomain::unit(1), 9, true);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(wsk_quadrature(u, 1, FractionalOrder(0.25), 3, CubeDomain::unit(1), 9) == 0.0);
  }
}
