#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ltdiag/config.hpp"
#include "ltdiag/energy_bounds.hpp"
#include "ltdiag/pipeline.hpp"
#include "ltdiag/suites.hpp"

using namespace ltdiag;
namespace fs = std::filesystem;

TEST_SUITE("pipeline") {
  TEST_CASE("ini configuration") {
    const auto dir = fs::temp_directory_path() / "ltdiag_cfg_test";
    fs::create_directories(dir);
    std::ofstream(dir / "run.ini") << "[problem]\nd = 1\ns = 0.5\nN = 3\nseed = 42\n\n[certify]\nc1 = 1.5\n";
    const auto cfg = load_config((dir / "run.ini").string());
    CHECK(cfg.s == 0.5);
    CHECK(cfg.n_particles == 3);
    CHECK(cfg.seed == 42);
    CHECK(cfg.c1 == "1.5");
    CHECK(cfg.k == 2);
    CHECK_NOTHROW(cfg.validate());
    std::ofstream(dir / "bad.ini") << "[problem]\nd = one\n";
    CHECK_THROWS_AS(load_config((dir / "bad.ini").string()), Error);
    PipelineConfig c2;
    c2.c1 = "-3";
    CHECK_THROWS_AS(c2.validate(), Error);
    fs::remove_all(dir);
  }

  TEST_CASE("bosonic scaling is exact") {
    PipelineConfig cfg;
    cfg.family = "bosonic";
    double first = 0.0;
    for (int n = 1; n <= 5; ++n) {
      cfg.n_particles = n;
      const double r = cmd_lt_ratio(cfg)["ratio_scaled"].get<double>();
      if (n == 1) first = r;
      CHECK(r == doctest::Approx(first).epsilon(1e-12));
    }
    // N = 1: pi^2 / int (2 sin^2)^3 = pi^2 / (5/2)
    CHECK(first == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.5).epsilon(1e-12));
  }

  TEST_CASE("Slater ratios stay away from zero") {
    PipelineConfig cfg;
    cfg.family = "slater";
    for (int n = 2; n <= 4; ++n) {
      cfg.n_particles = n;
      const auto r = cmd_lt_ratio(cfg);
      CHECK(r["lhs"].get<double>() == doctest::Approx(std::numbers::pi * std::numbers::pi * (n - 1) * n * (2 * n - 1) / 6.0));
      CHECK(r["ratio"].get<double>() >= 0.05);
    }
    cfg.family = "anyon";
    CHECK_THROWS_AS(cmd_lt_ratio(cfg), Error);
  }

  TEST_CASE("named densities carry the requested mass") {
    const auto rho = named_density("two_bump", 1, 6.0, 64);
    CHECK(rho.total_mass == doctest::Approx(6.0));
    CHECK_THROWS_AS(named_density("three_bump", 1, 6.0, 64), Error);
  }

  TEST_CASE("certify branches") {
    PipelineConfig cfg;
    const auto a = cmd_certify(cfg);
    CHECK(a["branch"] == "covering");
    CHECK(a["C"].get<double>() > 0.0);
    CHECK(a["lambda"].get<double>() == 5.0);

    cfg.mass = 4.0;
    const auto small = cmd_certify(cfg);
    CHECK(small["branch"] == "small_N");
    CHECK_FALSE(small.contains("covering"));

    const auto dir = fs::temp_directory_path() / "ltdiag_certify_test";
    fs::create_directories(dir);
    EnergyTable zero;
    zero.entries.assign(10, 0.0);
    std::ofstream(dir / "zero.json") << zero.to_json().dump();
    cfg.mass = 6.0;
    cfg.energy_table = (dir / "zero.json").string();
    const auto none = cmd_certify(cfg);
    CHECK(none["C"].get<double>() == 0.0);
    CHECK(none["flags"].dump().find("no exclusion") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("suite plumbing") {
    std::ostringstream log;
    CHECK(run_suite("nonsense", {}, log) == 2);
    CHECK(run_suite("propagation", {}, log) == 0);
    const std::string xml = junit_xml("x", {{"m.a", true, "", 0.1}, {"m.b", false, "bad <value>", 0.2}});
    CHECK(xml.find("failures=\"1\"") != std::string::npos);
    CHECK(xml.find("bad &lt;value&gt;") != std::string::npos);
  }
}
