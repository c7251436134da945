#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ltdiag/grid.hpp"
#include "ltdiag/grid_io.hpp"

using namespace ltdiag;

TEST_SUITE("grid") {
  TEST_CASE("desk limit") {
    CHECK_NOTHROW(check_desk_limit(4, 256));
    CHECK_THROWS_AS(check_desk_limit(5, 256), Error);
    CHECK(grid_size(2, 10) == 100);
  }

  TEST_CASE("trapezoid and simpson weights integrate low degree exactly") {
    const int g = 9;
    const double h = grid_spacing(2.0, g, GridKind::closed);
    auto w = axis_weights(g, h, GridKind::closed, QuadratureRule::simpson);
    double cubic = 0.0;
    for (int i = 0; i < g; ++i) cubic += w[static_cast<std::size_t>(i)] * std::pow(i * h, 3);
    CHECK(cubic == doctest::Approx(4.0).epsilon(1e-14));  // int_0^2 x^3 = 4
    CHECK_THROWS_AS(axis_weights(8, h, GridKind::closed, QuadratureRule::simpson), Error);
  }

  TEST_CASE("norm, normalization and permutation") {
    const auto f = GridFunction::sample(2, 17, CubeDomain::unit(1), GridKind::closed,
                                        [](std::span<const double> x) { return x[0] + 2.0 * x[1]; });
    // int int (x + 2y)^2 = 1/3 + 1 + 4/3, trapezoid error O(h^2)
    CHECK(f.norm_squared() == doctest::Approx(8.0 / 3.0).epsilon(2e-3));
    CHECK(f.normalized().is_normalized());
    const int perm[] = {1, 0};
    const auto g = f.permuted(perm);
    const std::size_t idx = 3 * f.stride(0) + 5 * f.stride(1);
    const std::size_t swapped = 5 * f.stride(0) + 3 * f.stride(1);
    CHECK(g[idx] == f[swapped]);
    const int bad[] = {0, 0};
    CHECK_THROWS_AS(f.permuted(bad), Error);
  }

  TEST_CASE("density of a normalized product state") {
    // psi = 1 on [0,1]^2: each particle contributes the constant marginal 1
    const auto psi = GridFunction::sample(2, 9, CubeDomain::unit(1), GridKind::closed,
                                          [](std::span<const double>) { return 1.0; });
    const DensityGrid rho = density(psi);
    CHECK(rho.total_mass == doctest::Approx(2.0));
    for (double v : rho.values) CHECK(v == doctest::Approx(2.0));
    CHECK_THROWS_WITH_AS(density(psi.scaled_values(2.0)), doctest::Contains("norm"), Error);
  }

  TEST_CASE("quadrature infers the grid and rejects bad sizes") {
    std::vector<double> ones(25, 1.0);
    CHECK(quad_integral(ones, CubeDomain::unit(2)) == doctest::Approx(1.0));
    std::vector<double> bad(24, 1.0);
    CHECK_THROWS_AS(quad_integral(bad, CubeDomain::unit(2)), Error);
  }

  TEST_CASE("manifest round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "ltdiag_grid_io_test";
    std::filesystem::create_directories(dir);
    const auto psi = GridFunction::sample(2, 5, CubeDomain::with_corner(1, -1.0, 2.0), GridKind::periodic,
                                          [](std::span<const double> x) { return cplx(x[0], x[1]); });
    write_grid_function(psi, dir / "psi.json");
    const auto back = read_grid_function(dir / "psi.json");
    CHECK(back.kind() == GridKind::periodic);
    CHECK(back.value_type() == ValueType::c128);
    CHECK(back.domain() == psi.domain());
    for (std::size_t i = 0; i < psi.size(); ++i) CHECK(back[i] == psi[i]);

    const DensityGrid rho = DensityGrid::from_values(CubeDomain::unit(1), 5, {0, 1, 2, 1, 0});
    write_density(rho, dir / "rho.json");
    const DensityGrid r2 = read_density(dir / "rho.json");
    CHECK(r2.values == rho.values);
    CHECK(r2.total_mass == doctest::Approx(1.0));
    std::filesystem::remove_all(dir);
  }
}
