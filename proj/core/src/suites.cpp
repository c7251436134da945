#include "ltdiag/suites.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "ltdiag/covering.hpp"
#include "ltdiag/cutoff.hpp"
#include "ltdiag/energy_bounds.hpp"
#include "ltdiag/extension.hpp"
#include "ltdiag/polynomials.hpp"
#include "ltdiag/sobolev.hpp"
#include "ltdiag/trial_functions.hpp"
#include "ltdiag/variational.hpp"

namespace ltdiag {

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  std::string name;
  std::function<std::string(bool&)> run;  // sets ok, returns a message
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::vector<Check> seminorm_checks() {
  return {
      {"constant_is_zero",
       [](bool& ok) {
         const auto c = GridFunction::sample(1, 65, CubeDomain::unit(1), GridKind::closed, [](std::span<const double>) { return 1.0; });
         const double v = seminorm_HsN(c, FractionalOrder(0.75), CubeDomain::unit(1)).value;
         ok = std::abs(v) <= 1e-12;
         return "value " + fmt(v);
       }},
      {"linear_h1_is_one",
       [](bool& ok) {
         const auto u = GridFunction::sample(1, 129, CubeDomain::unit(1), GridKind::closed, [](std::span<const double> x) { return x[0]; });
         const double v = seminorm_HsN(u, FractionalOrder(1.0), CubeDomain::unit(1)).value;
         ok = std::abs(v - 1.0) <= 1e-4;
         return "value " + fmt(v);
       }},
      {"fourier_single_mode",
       [](bool& ok) {
         const auto u = GridFunction::sample(1, 64, CubeDomain::unit(1), GridKind::periodic,
                                             [](std::span<const double> x) { return std::cos(6.0 * kPi * x[0]); });
         const double v = global_seminorm_fourier(u, FractionalOrder(0.75));
         const double expect = 0.5 * std::pow(6.0 * kPi, 1.5);
         ok = std::abs(v - expect) <= 1e-10 * expect;
         return "value " + fmt(v) + " expected " + fmt(expect);
       }},
      {"gagliardo_matches_fourier",
       [](bool& ok) {
         const auto u = GridFunction::sample(1, 256, CubeDomain::unit(1), GridKind::periodic,
                                             [](std::span<const double> x) { return std::exp(std::sin(2.0 * kPi * x[0])); });
         const double g = seminorm_HsN(u, FractionalOrder(0.5), CubeDomain::unit(1)).value;
         const double f = global_seminorm_fourier(u, FractionalOrder(0.5));
         ok = std::abs(g - f) <= 0.02 * f;
         return "gagliardo " + fmt(g) + " fourier " + fmt(f);
       }},
  };
}

std::vector<Check> covering_checks() {
  return {
      {"b_closed_formula",
       [](bool& ok) {
         const double b = covering_b(1, 1.0, 3.0, 2.0);
         ok = b == 0.25;
         return "b " + fmt(b);
       }},
      {"random_densities",
       [](bool& ok) {
         std::mt19937_64 rng(7);
         std::uniform_real_distribution<double> u(0.0, 1.0);
         ok = true;
         for (int t = 0; t < 10 && ok; ++t) {
           std::vector<double> v(129, 0.0);
           const double c = 0.2 + 0.6 * u(rng);
           for (int i = 0; i < 129; ++i) {
             const double x = i / 128.0;
             v[static_cast<std::size_t>(i)] = std::abs(x - c) < 0.15 ? 20.0 * u(rng) : 0.0;
           }
           const auto rho = DensityGrid::from_values(CubeDomain::unit(1), 129, v);
           if (rho.total_mass < 3.0) continue;
           const auto cov = build_covering(rho, 3.0, {2.0, 1.0, 40});
           bool leaves = true;
           for (double m : cov.masses) leaves = leaves && m <= 3.0 + 1e-9;
           ok = leaves && covering_is_partition(cov) && verify_covering_inequality(cov).ok;
         }
         return std::string(ok ? "all coverings valid" : "a covering failed");
       }},
  };
}

std::vector<Check> propagation_checks() {
  return {{"base_one_gives_8_36_64", [](bool& ok) {
             const auto t = propagate_lower_bounds(1, FractionalOrder(1.0), {0.0, 1.0}, 4);
             ok = t.entries[2] == 8.0 && t.entries[3] == 36.0 && t.entries[4] == 64.0;
             return "L2 " + fmt(t.entries[2]) + " L3 " + fmt(t.entries[3]) + " L4 " + fmt(t.entries[4]);
           }}};
}

std::vector<Check> variational_checks() {
  return {
      {"ritz_two_fermions",
       [](bool& ok) {
         const auto p = assemble_ritz(trial_basis("slater", 2, CubeDomain::unit(1), 1), FractionalOrder(1.0), CubeDomain::unit(1));
         const double v = ritz_upper_bound(p).value;
         ok = std::abs(v - kPi * kPi) <= 1e-6;
         return "value " + fmt(v);
       }},
      {"grid_estimate_two_particles",
       [](bool& ok) {
         const double v = grid_lower_estimate(1, FractionalOrder(1.0), 2, {}, 64).value;
         ok = v >= 8.0 && v <= kPi * kPi * 1.02;
         return "value " + fmt(v);
       }},
  };
}

std::vector<Check> polynomial_checks() {
  return {
      {"dimension_table",
       [](bool& ok) {
         const int a = vanishing_space_dimension(1, 2, 2, 1);
         const int b = vanishing_space_dimension(1, 3, 2, 1);
         const int c = vanishing_space_dimension(1, 4, 2, 1);
         ok = a == 1 && b == 0 && c == 0;
         return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
       }},
      {"vandermonde_vanishes",
       [](bool& ok) {
         ok = vanishes_on_k_diagonal(vandermonde_polynomial(4), 1, 2);
         return std::string(ok ? "vanishes" : "does not vanish");
       }},
  };
}

std::vector<Check> extension_checks() {
  return {
      {"reflection_coefficients",
       [](bool& ok) {
         const auto r1 = reflection_coefficients(1);
         const auto r2 = reflection_coefficients(2);
         ok = r1.lambdas == std::vector<Rational>{-3, 4} && r2.lambdas == std::vector<Rational>{6, -32, 27};
         return std::string(ok ? "(-3, 4) and (6, -32, 27)" : "mismatch");
       }},
      {"derivative_matching_cubic",
       [](bool& ok) {
         std::vector<double> v(512);
         for (std::size_t i = 0; i < v.size(); ++i) {
           const double x = static_cast<double>(i) / 511.0;
           v[i] = x * x * x;
         }
         ok = true;
         for (const auto& m : derivative_matching(extend_1d(v, 3), 3)) ok = ok && m.ok;
         return std::string(ok ? "orders 0..3 match" : "mismatch");
       }},
  };
}

std::vector<Check> cutoff_checks() {
  return {
      {"plain_slope",
       [](bool& ok) {
         const auto f = cutoff_scaling_fit(CutoffVariant::plain, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128},
                                           FractionalOrder(0.9), 1, CubeDomain::unit(1), 513);
         ok = std::abs(f.slope - f.expected) <= 0.15;
         return "slope " + fmt(f.slope) + " expected " + fmt(f.expected);
       }},
      {"critical_slope",
       [](bool& ok) {
         const auto f = cutoff_scaling_fit(CutoffVariant::critical, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128},
                                           FractionalOrder(0.5), 1, CubeDomain::unit(1), 0);
         ok = std::abs(f.slope - f.expected) <= 0.15;
         return "slope " + fmt(f.slope) + " expected " + fmt(f.expected);
       }},
  };
}

std::vector<Check> checks_for(const std::string& name) {
  if (name == "seminorms") return seminorm_checks();
  if (name == "covering") return covering_checks();
  if (name == "propagation") return propagation_checks();
  if (name == "variational") return variational_checks();
  if (name == "polynomials") return polynomial_checks();
  if (name == "extension") return extension_checks();
  if (name == "cutoffs") return cutoff_checks();
  return {};
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"seminorms", "covering", "propagation", "variational", "polynomials", "extension", "cutoffs", "full"};
}

std::string junit_xml(const std::string& suite, const std::vector<SuiteCase>& cases) {
  int failures = 0;
  double total = 0.0;
  for (const auto& c : cases) {
    failures += c.passed ? 0 : 1;
    total += c.seconds;
  }
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<testsuites>\n  <testsuite name=\"" << xml_escape(suite) << "\" tests=\"" << cases.size() << "\" failures=\""
     << failures << "\" time=\"" << total << "\">\n";
  for (const auto& c : cases) {
    const auto dot = c.name.find('.');
    const std::string cls = dot == std::string::npos ? suite : c.name.substr(0, dot);
    const std::string nm = dot == std::string::npos ? c.name : c.name.substr(dot + 1);
    os << "    <testcase classname=\"" << xml_escape(cls) << "\" name=\"" << xml_escape(nm) << "\" time=\"" << c.seconds
       << "\">";
    if (!c.passed) os << "<failure message=\"" << xml_escape(c.message) << "\"/>";
    os << "</testcase>\n";
  }
  os << "  </testsuite>\n</testsuites>\n";
  return os.str();
}

int run_suite(const std::string& name, const std::filesystem::path& junit_out, std::ostream& log) {
  std::vector<std::string> modules;
  if (name == "full") {
    modules = suite_names();
    modules.pop_back();
  } else if (!checks_for(name).empty()) {
    modules = {name};
  } else {
    log << "unknown suite '" << name << "'\n";
    return 2;
  }
  std::vector<SuiteCase> cases;
  for (const auto& m : modules) {
    for (const auto& check : checks_for(m)) {
      SuiteCase c;
      c.name = m + "." + check.name;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        c.message = check.run(c.passed);
      } catch (const std::exception& e) {
        c.passed = false;
        c.message = std::string("error: ") + e.what();
      }
      c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.message << '\n';
      cases.push_back(std::move(c));
    }
  }
  if (!junit_out.empty()) {
    if (junit_out.has_parent_path()) std::filesystem::create_directories(junit_out.parent_path());
    std::ofstream out(junit_out);
    if (!out) throw Error("cannot write " + junit_out.string());
    out << junit_xml(name, cases);
  }
  for (const auto& c : cases) {
    if (!c.passed) return 1;
  }
  return 0;
}

}  // namespace ltdiag
