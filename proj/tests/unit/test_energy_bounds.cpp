#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "ltdiag/energy_bounds.hpp"

using namespace ltdiag;

namespace {

// exhaustive minimum over compositions into `parts` parts, each < n
double brute_min(const std::vector<double>& t, int n, int parts) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int, double)> rec = [&](int left, int remaining, double acc) {
    if (left == 1) {
      if (remaining < n) best = std::min(best, acc + t[static_cast<std::size_t>(remaining)]);
      return;
    }
    for (int k = 0; k <= remaining && k < n; ++k) rec(left - 1, remaining - k, acc + t[static_cast<std::size_t>(k)]);
  };
  rec(parts, n, 0.0);
  return best;
}

}  // namespace

TEST_SUITE("energy_bounds") {
  TEST_CASE("exclusion q by enumeration") {
    CHECK(exclusion_q(1, FractionalOrder(1.0)) == 1);
    CHECK(exclusion_q(1, FractionalOrder(2.0)) == 2);
    CHECK(exclusion_q(2, FractionalOrder(1.5)) == 3);
    CHECK(exclusion_q(3, FractionalOrder(2.5)) == 10);
  }

  TEST_CASE("propagation from a unit base") {
    const auto t = propagate_lower_bounds(1, FractionalOrder(1.0), {0.0, 1.0}, 64);
    CHECK(t.entries[2] == 8.0);
    CHECK(t.entries[3] == 36.0);
    CHECK(t.entries[4] == 64.0);
    for (int n = 1; n <= 64; ++n) CHECK(t.entries[static_cast<std::size_t>(n)] >= std::pow(n, 3));
    CHECK_THROWS_AS(propagate_lower_bounds(1, FractionalOrder(1.0), {}, 4), Error);
    CHECK_THROWS_AS(propagate_lower_bounds(1, FractionalOrder(1.0), {1.0, 1.0}, 4), Error);
    CHECK_THROWS_AS(propagate_lower_bounds(1, FractionalOrder(2.0), {0.0, 1.0}, 4), Error);
  }

  TEST_CASE("dynamic programme agrees with enumeration") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int parts : {2, 4}) {
      std::vector<double> t(13);
      for (double& v : t) v = u(rng);
      t[0] = 0.0;
      for (int n = 2; n <= 12; ++n) CHECK(min_composition(t, n, parts) == doctest::Approx(brute_min(t, n, parts)));
      CHECK(std::isinf(min_composition(t, 1, parts)));  // a single particle cannot be split into smaller parts
    }
  }

  TEST_CASE("refined positivity and local exclusion") {
    EnergyTable t;
    t.d = 1;
    t.order = FractionalOrder(1.0);
    t.q = 2;
    t.entries = {0.0, -1.0, 8.5, 9.0};
    CHECK(check_refined_positivity(t, 2.0));
    t.entries[2] = 8.0;
    CHECK_FALSE(check_refined_positivity(t, 2.0));
    CHECK(local_exclusion_bound(1.0, 1.0, 1.0, 1, 1, FractionalOrder(1.0)) == 0.0);
    CHECK(local_exclusion_bound(5.0, 0.125, 2.0, 1, 1, FractionalOrder(1.0)) == doctest::Approx(512.0));
  }

  TEST_CASE("constant assembly") {
    CHECK(assemble_lt_constant(1, 1, 0.25, 3, 1, FractionalOrder(1.0)) == doctest::Approx(1.0 / 45.0).epsilon(1e-15));
    CHECK(assemble_lt_constant(1, 2, 0.25, 3, 1, FractionalOrder(1.0)) > assemble_lt_constant(1, 1, 0.25, 3, 1, FractionalOrder(1.0)));
    CHECK(assemble_lt_constant(1, 1, 0.25, 5, 1, FractionalOrder(1.0)) < assemble_lt_constant(1, 1, 0.25, 3, 1, FractionalOrder(1.0)));
    CHECK_THROWS_AS(assemble_lt_constant(1, 0, 0.25, 3, 1, FractionalOrder(1.0)), Error);
  }

  TEST_CASE("table json round trip and thresholds") {
    const auto t = propagate_lower_bounds(1, FractionalOrder(1.0), {0.0, 0.0, 9.0}, 10);
    const auto back = EnergyTable::from_json(t.to_json());
    CHECK(back.entries == t.entries);
    CHECK(back.base_max == 3);
    CHECK(positivity_threshold(t) == 2);
    EnergyTable shifted = t;
    shifted.q = 2;
    CHECK(table_constant(shifted) == doctest::Approx(9.0 / 8.0));
  }
}
