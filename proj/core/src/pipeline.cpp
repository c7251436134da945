#include "ltdiag/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <fstream>
#include <numbers>
#include <random>

#include "ltdiag/covering.hpp"
#include "ltdiag/energy_bounds.hpp"
#include "ltdiag/grid_io.hpp"
#include "ltdiag/sobolev.hpp"
#include "ltdiag/special_functions.hpp"
#include "ltdiag/trial_functions.hpp"
#include "ltdiag/variational.hpp"

namespace ltdiag {

namespace {

constexpr double kPi = std::numbers::pi;

double bump(double x, double centre, double width) {
  const double t = (x - centre) / width;
  if (std::abs(t) >= 1.0) return 0.0;
  const double c = std::cos(0.5 * kPi * t);
  return c * c;
}

// int_Q rho^p for the closed-form families, by tensor Gauss-Legendre
template <typename Rho>
double gauss_power_integral(int d, double p, Rho&& rho) {
  const int q = d == 1 ? 200 : (d == 2 ? 100 : 40);
  const GaussRule r = gauss_legendre(q);
  std::vector<double> x(static_cast<std::size_t>(d));
  MultiIndex mi(d, q);
  double total = 0.0;
  do {
    double w = 1.0;
    for (int c = 0; c < d; ++c) {
      const auto i = static_cast<std::size_t>(mi[static_cast<std::size_t>(c)]);
      x[static_cast<std::size_t>(c)] = 0.5 * (r.nodes[i] + 1.0);
      w *= 0.5 * r.weights[i];
    }
    total += w * std::pow(rho(std::span<const double>(x)), p);
  } while (mi.next());
  return total;
}

nlohmann::json grid_ratio(const GridFunction& raw, const FractionalOrder& order) {
  const GridFunction psi = raw.normalized();
  const double lhs = seminorm_HsN(psi, order, psi.domain()).value;
  const DensityGrid rho = density(psi);
  std::vector<double> pw(rho.values.size());
  const double p = 1.0 + order.lt_exponent(psi.dim());
  for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = std::pow(rho.values[i], p);
  const double rhs = quad_integral(pw, rho.domain, QuadratureRule::trapezoid, rho.kind);
  return {{"lhs", lhs}, {"rhs", rhs}, {"evaluation", "grid"}, {"grid", raw.points()}};
}

}  // namespace

DensityGrid named_density(const std::string& name, int d, double mass, int points) {
  const CubeDomain unit = CubeDomain::unit(d);
  std::vector<double> centres;
  if (name == "two_bump") {
    centres = {0.3, 0.7};
  } else if (name == "one_bump") {
    centres = {0.5};
  } else {
    throw Error("unknown density family '" + name + "'");
  }
  std::vector<double> v(grid_size(d, points));
  const double h = grid_spacing(1.0, points, GridKind::closed);
  MultiIndex mi(d, points);
  std::size_t flat = 0;
  do {
    double across = 1.0;
    for (int c = 1; c < d; ++c) across *= bump(mi[static_cast<std::size_t>(c)] * h, 0.5, 0.3);
    double along = 0.0;
    for (double c : centres) along += bump(mi[0] * h, c, 0.15);
    v[flat++] = along * across;
  } while (mi.next());
  const double m = quad_integral(v, unit);
  for (double& x : v) x *= mass / m;
  return DensityGrid::from_values(unit, points, std::move(v));
}

double measure_c1(int d, double s, int points, int samples, std::uint64_t seed) {
  const FractionalOrder order(s);
  const CubeDomain unit = CubeDomain::unit(d);
  std::vector<CubeDomain> cubes{unit};
  for (int child = 0; child < (1 << d); ++child) {
    std::vector<double> corner(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) corner[static_cast<std::size_t>(c)] = ((child >> c) & 1) ? 0.5 : 0.0;
    cubes.emplace_back(d, corner, 0.5);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kModes = 3;
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    // Psi = sum c_{ab} phi_a(x_1) phi_b(x_2) over low Neumann modes, plus a positive offset
    const auto modes = neumann_modes(d, kModes);
    std::vector<double> c(kModes * kModes);
    for (double& x : c) x = normal(rng);
    c[0] += 2.0;
    auto psi = GridFunction::sample(2, points, unit, GridKind::closed, [&](std::span<const double> x) {
      double v = 0.0;
      for (int a = 0; a < kModes; ++a) {
        const double pa = neumann_mode(modes[static_cast<std::size_t>(a)], unit, x.subspan(0, static_cast<std::size_t>(d)));
        for (int b = 0; b < kModes; ++b) {
          v += c[static_cast<std::size_t>(a * kModes + b)] * pa *
               neumann_mode(modes[static_cast<std::size_t>(b)], unit, x.subspan(static_cast<std::size_t>(d)));
        }
      }
      return v;
    });
    psi = psi.normalized();
    for (const auto& q : cubes) worst = std::max(worst, local_uncertainty_constant(psi, q, order));
  }
  return worst;
}

nlohmann::json cmd_lt_ratio(const PipelineConfig& cfg) {
  const int d = cfg.d;
  const int n = cfg.n_particles;
  const FractionalOrder order(cfg.s);
  const double p = 1.0 + order.lt_exponent(d);
  const CubeDomain unit = CubeDomain::unit(d);
  nlohmann::json r;
  if (cfg.family == "bosonic") {
    // u = prod_c sqrt(2) sin(pi x_c): |u|^2_{H^m} = d^m pi^{2m}, int |u|^{2p} = (2^p Gamma(p+1/2) / (sqrt(pi) Gamma(p+1)))^d
    if (order.is_integer()) {
      const double one = std::pow(d, order.m()) * std::pow(kPi, 2.0 * order.m());
      const double moment = std::pow(std::pow(2.0, p) * std::tgamma(p + 0.5) / (std::sqrt(kPi) * std::tgamma(p + 1.0)), d);
      r = {{"lhs", n * one}, {"rhs", std::pow(n, p) * moment}, {"evaluation", "closed form"}};
    } else {
      r = grid_ratio(GridFunction::sample(n, cfg.grid, unit, GridKind::closed,
                                          [&](std::span<const double> x) {
                                            double v = 1.0;
                                            for (double t : x) v *= std::sqrt(2.0) * std::sin(kPi * t);
                                            return v;
                                          }),
                     order);
    }
  } else if (cfg.family == "slater") {
    const auto modes = neumann_modes(d, n);
    if (order.is_integer()) {
      // orthonormal modes: the form splits into one-body eigenvalues (pi^2 |n|^2)^m
      double lhs = 0.0;
      for (const auto& m : modes) {
        double k2 = 0.0;
        for (int c : m) k2 += kPi * kPi * c * c;
        lhs += std::pow(k2, order.m());
      }
      const double rhs = gauss_power_integral(d, p, [&](std::span<const double> x) {
        double rho = 0.0;
        for (const auto& m : modes) {
          double norm2 = 1.0;
          for (int c : m) norm2 *= c == 0 ? 1.0 : 2.0;
          const double v = neumann_mode(m, unit, x);
          rho += norm2 * v * v;
        }
        return rho;
      });
      r = {{"lhs", lhs}, {"rhs", rhs}, {"evaluation", "closed form"}};
    } else {
      const auto f = slater_determinant(modes, unit);
      r = grid_ratio(GridFunction::sample(n, cfg.grid, unit, GridKind::closed, [&](std::span<const double> x) { return f.value(x); }),
                     order);
    }
  } else if (cfg.family == "jastrow") {
    const auto f = jastrow(n, unit, 0.3, 0);
    r = grid_ratio(GridFunction::sample(n, cfg.grid, unit, GridKind::closed, [&](std::span<const double> x) { return f.value(x); }),
                   order);
  } else {
    throw Error("lt-ratio: unknown family '" + cfg.family + "' (expected bosonic, slater or jastrow)");
  }
  const double lhs = r["lhs"].get<double>();
  const double rhs = r["rhs"].get<double>();
  if (!(rhs > 0.0)) throw Error("lt-ratio: density integral vanishes");
  r["family"] = cfg.family;
  r["N"] = n;
  r["d"] = d;
  r["s"] = cfg.s;
  r["ratio"] = lhs / rhs;
  if (cfg.family == "bosonic") r["ratio_scaled"] = lhs / rhs * std::pow(n, order.lt_exponent(d));
  return r;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json cmd_certify(const PipelineConfig& cfg) {
  cfg.validate();
  const int d = cfg.d;
  const FractionalOrder order(cfg.s);
  nlohmann::json out;
  out["tool"] = "ltdiag certify";
  out["version"] = LTDIAG_VERSION;
  out["timestamp"] = utc_timestamp();
  out["config"] = cfg.to_json();
  out["status"] = "empirical, not certified";
  nlohmann::json flags = nlohmann::json::array();

  // density
  DensityGrid rho = cfg.density == "two_bump" || cfg.density == "one_bump"
                        ? named_density(cfg.density, d, cfg.mass, cfg.grid)
                        : read_density(cfg.density);
  if (rho.domain.dim() != d) throw Error("certify: density dimension does not match d");
  out["density"] = {{"source", cfg.density}, {"points", rho.points}, {"mass", rho.total_mass},
                    {"domain", rho.domain.to_json()}};

  // energy table
  EnergyTable table;
  if (!cfg.energy_table.empty()) {
    std::ifstream in(cfg.energy_table);
    if (!in) throw Error("certify: cannot open energy table " + cfg.energy_table);
    table = EnergyTable::from_json(nlohmann::json::parse(in));
    if (table.d != d || table.order.s() != cfg.s) throw Error("certify: energy table was built for other d or s");
    out["energy_table_source"] = cfg.energy_table;
  } else {
    const int g = d == 1 ? 64 : 12;
    std::vector<double> base(static_cast<std::size_t>(cfg.k + 1), 0.0);
    const GridEstimate e = grid_lower_estimate(d, order, cfg.k, DiagonalSpec{cfg.k, cfg.halo}, g);
    base[static_cast<std::size_t>(cfg.k)] = e.value;
    table = propagate_lower_bounds(d, order, base, cfg.table_max);
    out["energy_table_source"] = {{"kind", "propagated from a grid estimate (non-certified)"},
                                  {"grid", g},
                                  {"E_k", e.value},
                                  {"method", e.method}};
  }
  out["energy_table"] = table.to_json();

  bool any_positive = false;
  for (double v : table.entries) any_positive = any_positive || v > 0.0;
  if (!any_positive) {
    flags.push_back("no exclusion");
    out["flags"] = flags;
    out["branch"] = "no_exclusion";
    out["C"] = 0.0;
    return out;
  }

  const int q_eff = positivity_threshold(table);
  const double lambda = std::pow(2.0, d) * q_eff + 1.0;
  out["q"] = exclusion_q(d, order);
  out["q_eff"] = q_eff;
  out["lambda"] = lambda;

  EnergyTable shifted = table;
  shifted.q = q_eff;
  const double c2 = table_constant(shifted);
  out["C2"] = c2;

  double c1 = 0.0;
  if (cfg.c1 == "measured") {
    c1 = measure_c1(d, cfg.s, d == 1 ? cfg.grid : 16, cfg.c1_samples, cfg.seed);
    out["C1"] = {{"value", c1}, {"source", "measured"}, {"samples", cfg.c1_samples}, {"seed", cfg.seed}};
  } else {
    c1 = std::stod(cfg.c1);
    out["C1"] = {{"value", c1}, {"source", "supplied"}};
  }

  if (rho.total_mass <= lambda) {
    out["branch"] = "small_N";
    out["note"] = "mass <= Lambda: the bosonic-type bound with factor N^{-2s/d} applies; no covering built";
    out["flags"] = flags;
    return out;
  }
  if (!(c2 > 0.0)) {
    flags.push_back("no exclusion");
    out["flags"] = flags;
    out["branch"] = "no_exclusion";
    out["C"] = 0.0;
    return out;
  }

  CoveringOptions copts;
  copts.alpha = order.lt_exponent(d);
  copts.q = q_eff;
  const CoveringResult cov = build_covering(rho, lambda, copts);
  const CoveringCheck check = verify_covering_inequality(cov);
  if (!check.ok || !covering_is_partition(cov)) {
    std::size_t worst = 0;
    double worst_term = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cov.cubes.size(); ++i) {
      const double m = cov.masses[i];
      const double term = std::pow(cov.cubes[i].volume(), -cov.alpha) * (std::max(0.0, m - cov.q) - cov.b * m);
      if (term < worst_term) {
        worst_term = term;
        worst = i;
      }
    }
    throw Error("certify: covering verification failed at cube " + cov.cubes[worst].to_json().dump() +
                " (lhs = " + std::to_string(check.lhs) + ")");
  }
  out["branch"] = "covering";
  out["covering"] = cov.to_json(check.lhs);
  out["b"] = cov.b;
  out["C"] = assemble_lt_constant(c1, c2, cov.b, lambda, d, order);
  out["flags"] = flags;
  return out;
}

}  // namespace ltdiag
