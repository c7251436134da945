#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ltdiag/config.hpp"
#include "ltdiag/covering.hpp"
#include "ltdiag/cutoff.hpp"
#include "ltdiag/energy_bounds.hpp"
#include "ltdiag/extension.hpp"
#include "ltdiag/grid_io.hpp"
#include "ltdiag/pipeline.hpp"
#include "ltdiag/polynomials.hpp"
#include "ltdiag/sobolev.hpp"
#include "ltdiag/suites.hpp"
#include "ltdiag/trial_functions.hpp"
#include "ltdiag/variational.hpp"

namespace fs = std::filesystem;
using namespace ltdiag;
using json = nlohmann::json;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> grid, d, k, n;
  std::optional<double> s;
};

PipelineConfig resolve(const Overrides& o) {
  PipelineConfig cfg;
  if (!o.config.empty()) merge_config_file(cfg, o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out_dir = *o.out;
  if (o.grid) cfg.grid = *o.grid;
  if (o.d) cfg.d = *o.d;
  if (o.k) cfg.k = *o.k;
  if (o.n) cfg.n_particles = *o.n;
  if (o.s) cfg.s = *o.s;
  return cfg;
}

fs::path out_file(const PipelineConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

void emit(const PipelineConfig& cfg, const std::string& name, json report) {
  report["config"] = cfg.to_json();
  report["version"] = LTDIAG_VERSION;
  const auto path = out_file(cfg, name);
  std::ofstream(path) << report.dump(2) << '\n';
  std::cout << report.dump(2) << '\n';
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) v.push_back(std::stod(item));
  }
  return v;
}

GridFunction family_grid(const PipelineConfig& cfg) {
  const CubeDomain unit = CubeDomain::unit(cfg.d);
  const int n = cfg.n_particles;
  if (cfg.family == "slater") {
    const auto f = slater_determinant(neumann_modes(cfg.d, n), unit);
    return GridFunction::sample(n, cfg.grid, unit, GridKind::closed, [&](std::span<const double> x) { return f.value(x); });
  }
  if (cfg.family == "jastrow") {
    const auto f = jastrow(n, unit, 0.3, 0);
    return GridFunction::sample(n, cfg.grid, unit, GridKind::closed, [&](std::span<const double> x) { return f.value(x); });
  }
  if (cfg.family == "bosonic") {
    return GridFunction::sample(n, cfg.grid, unit, GridKind::closed, [](std::span<const double> x) {
      double v = 1.0;
      for (double t : x) v *= std::sqrt(2.0) * std::sin(std::numbers::pi * t);
      return v;
    });
  }
  throw Error("unknown family '" + cfg.family + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lieb-Thirring diagonal-vanishing toolkit"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "64-bit seed for randomized steps");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--grid", o.grid, "grid points per axis");
  app.add_option("-d", o.d, "spatial dimension");
  app.add_option("-s", o.s, "Sobolev order");
  app.add_option("-k", o.k, "diagonal order k");
  app.add_option("-N", o.n, "particle number");
  app.fallthrough();

  std::string family;
  auto* lt = app.add_subcommand("lt-ratio", "kinetic energy against the density integral for a named state");
  lt->add_option("--family", family, "bosonic, slater or jastrow");

  auto* certify = app.add_subcommand("certify", "covering, energy table and constant assembly");
  std::string density_src, table_file, c1;
  certify->add_option("--density", density_src, "two_bump, one_bump or a density manifest");
  certify->add_option("--table", table_file, "energy table JSON");
  certify->add_option("--c1", c1, "'measured' or a positive number");

  auto* seminorm = app.add_subcommand("seminorm", "localized seminorm of a grid function");
  std::string input;
  std::vector<double> omega_corner;
  double omega_side = 0.0;
  seminorm->add_option("--input", input, "grid manifest (default: sample --family)");
  seminorm->add_option("--family", family, "bosonic, slater or jastrow");
  seminorm->add_option("--omega-corner", omega_corner, "corner of the localization cube");
  seminorm->add_option("--omega-side", omega_side, "side of the localization cube");

  auto* dens = app.add_subcommand("density", "one-body density of a grid function");
  std::string output;
  dens->add_option("--input", input, "grid manifest (default: sample --family)");
  dens->add_option("--family", family, "bosonic, slater or jastrow");
  dens->add_option("--output", output, "density manifest to write (default OUT/density.json)");

  auto* cover = app.add_subcommand("cover", "dyadic covering of a density");
  double lambda = 0.0, q = 0.0;
  cover->add_option("--input", input, "density manifest (default: --density family)");
  cover->add_option("--density", density_src, "two_bump or one_bump");
  cover->add_option("--lambda", lambda, "mass threshold (default 2^d q + 1)");
  cover->add_option("--q", q, "exclusion number (default from d and s)");

  auto* prop = app.add_subcommand("propagate", "propagate an energy lower-bound table");
  std::string base = "0,1";
  int n_max = 64;
  prop->add_option("--base", base, "comma-separated L_0, ..., L_{N0-1}");
  prop->add_option("--n-max", n_max, "last propagated N");

  auto* ritz = app.add_subcommand("ritz", "Rayleigh-Ritz upper bound");
  int basis_size = 0;
  ritz->add_option("--family", family, "slater, jastrow or constant");
  ritz->add_option("--basis", basis_size, "basis size");

  auto* ge = app.add_subcommand("grid-energy", "grid estimate and Ritz bound of the local ground-state energy");
  double halo = -1.0;
  ge->add_option("--halo", halo, "diagonal halo in grid cells");
  ge->add_option("--family", family, "Ritz family");
  ge->add_option("--basis", basis_size, "Ritz basis size");

  auto* pc = app.add_subcommand("polycheck", "test whether a polynomial vanishes on the k-diagonal");
  std::string poly_file;
  pc->add_option("--poly", poly_file, "polynomial JSON (default: Vandermonde in N variables)");

  auto* pd = app.add_subcommand("poly-dim", "dimension of the vanishing polynomial space");
  int degree = 1;
  pd->add_option("-S", degree, "per-variable degree bound");

  auto* ext = app.add_subcommand("extend", "reflection extension of x^p across 0");
  int order_n = 1, power = 1;
  ext->add_option("-n", order_n, "extension order");
  ext->add_option("--power", power, "exponent p of the sampled function");

  auto* cs = app.add_subcommand("cutoff-scaling", "seminorm of cutoffs against epsilon");
  std::string variant, eps_list;
  cs->add_option("--variant", variant, "plain or critical");
  cs->add_option("--eps", eps_list, "comma-separated epsilons (default 2^-3..2^-7)");

  auto* suite = app.add_subcommand("suite", "run a module suite and write JUnit XML");
  std::string suite_name;
  suite->add_option("name", suite_name, "seminorms, covering, propagation, variational, polynomials, extension, cutoffs, full")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = resolve(o);
    if (!family.empty()) cfg.family = family;
    if (basis_size > 0) cfg.basis_size = basis_size;
    if (halo >= 0.0) cfg.halo = halo;
    if (!density_src.empty()) cfg.density = density_src;
    if (!table_file.empty()) cfg.energy_table = table_file;
    if (!c1.empty()) cfg.c1 = c1;
    if (!variant.empty()) cfg.variant = variant;
    const FractionalOrder order(cfg.s);

    if (*lt) {
      emit(cfg, "lt_ratio.json", cmd_lt_ratio(cfg));
    } else if (*certify) {
      const json r = cmd_certify(cfg);
      std::ofstream(out_file(cfg, "certify.json")) << r.dump(2) << '\n';
      std::cout << r.dump(2) << '\n';
    } else if (*seminorm) {
      const GridFunction psi = input.empty() ? family_grid(cfg).normalized() : read_grid_function(input);
      const CubeDomain omega = omega_side > 0.0 ? CubeDomain(psi.dim(), omega_corner, omega_side) : psi.domain();
      emit(cfg, "seminorm.json", seminorm_HsN(psi, FractionalOrder(cfg.s), omega).to_json());
    } else if (*dens) {
      const GridFunction psi = input.empty() ? family_grid(cfg).normalized() : read_grid_function(input);
      const DensityGrid rho = density(psi);
      const fs::path path = output.empty() ? out_file(cfg, "density.json") : fs::path(output);
      write_density(rho, path);
      std::cout << json{{"manifest", path.string()}, {"mass", rho.total_mass}, {"points", rho.points}}.dump(2) << '\n';
    } else if (*cover) {
      const DensityGrid rho = input.empty() ? named_density(cfg.density, cfg.d, cfg.mass, cfg.grid) : read_density(input);
      const int d = rho.domain.dim();
      const double qq = q > 0.0 ? q : exclusion_q(d, order);
      const double lam = lambda > 0.0 ? lambda : std::pow(2.0, d) * qq + 1.0;
      const CoveringResult cov = build_covering(rho, lam, {order.lt_exponent(d), qq, 40});
      const CoveringCheck chk = verify_covering_inequality(cov);
      json r = cov.to_json(chk.lhs);
      r["inequality_ok"] = chk.ok;
      r["partition_ok"] = covering_is_partition(cov);
      emit(cfg, "covering.json", r);
    } else if (*prop) {
      emit(cfg, "energy_table.json", propagate_lower_bounds(cfg.d, order, parse_list(base), n_max).to_json());
    } else if (*ritz) {
      const auto p = assemble_ritz(trial_basis(cfg.family, cfg.n_particles, CubeDomain::unit(cfg.d), cfg.basis_size),
                                   order, CubeDomain::unit(cfg.d), {0, cfg.grid});
      const auto r = ritz_upper_bound(p);
      std::vector<double> coef(r.coefficients.data(), r.coefficients.data() + r.coefficients.size());
      emit(cfg, "ritz.json", {{"value", r.value}, {"coefficients", coef}, {"family", cfg.family}, {"basis_size", cfg.basis_size}});
    } else if (*ge) {
      EnergyEstimate e;
      const auto est = grid_lower_estimate(cfg.d, order, cfg.n_particles, {cfg.k, cfg.halo}, cfg.grid);
      e.lower = est.value;
      e.converged = est.converged;
      e.n_particles = cfg.n_particles;
      e.k = cfg.k;
      e.d = cfg.d;
      e.order = order;
      e.domain = CubeDomain::unit(cfg.d);
      const std::string fam = cfg.n_particles < cfg.k ? "constant" : cfg.family;
      const auto p = assemble_ritz(trial_basis(fam, cfg.n_particles, e.domain, cfg.basis_size), order, e.domain, {0, cfg.grid});
      e.upper = ritz_upper_bound(p).value;
      json r = e.to_json();
      r["method"] = est.method;
      r["dof"] = est.dof;
      r["halo"] = cfg.halo;
      emit(cfg, "grid_energy.json", r);
    } else if (*pc) {
      SparsePolynomial f;
      if (poly_file.empty()) {
        f = vandermonde_polynomial(cfg.n_particles);
      } else {
        std::ifstream in(poly_file);
        if (!in) throw Error("cannot open " + poly_file);
        f = SparsePolynomial::from_json(json::parse(in));
      }
      emit(cfg, "polycheck.json", {{"vanishes", vanishes_on_k_diagonal(f, cfg.d, cfg.k)}, {"polynomial", f.to_string()}});
    } else if (*pd) {
      emit(cfg, "poly_dim.json",
           {{"dimension", vanishing_space_dimension(cfg.d, cfg.n_particles, cfg.k, degree)}, {"S", degree}});
    } else if (*ext) {
      std::vector<double> v(static_cast<std::size_t>(cfg.grid));
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(static_cast<double>(i) / (cfg.grid - 1), power);
      const Extension1D e = extend_1d(v, order_n);
      std::ofstream csv(out_file(cfg, "extension.csv"));
      csv.precision(15);
      csv << "x,value\n";
      for (std::size_t i = 0; i < e.x.size(); ++i) csv << e.x[i] << ',' << e.values[i] << '\n';
      json m = json::array();
      for (const auto& dm : derivative_matching(e, order_n)) {
        m.push_back({{"order", dm.order}, {"left", dm.left}, {"right", dm.right}, {"tolerance", dm.tolerance}, {"ok", dm.ok}});
      }
      std::vector<std::string> lambdas;
      for (const auto& l : reflection_coefficients(order_n).lambdas) lambdas.push_back(l.get_str());
      emit(cfg, "extension.json", {{"lambdas", lambdas}, {"matching", m}, {"csv", "extension.csv"}});
    } else if (*cs) {
      const auto v = parse_cutoff_variant(cfg.variant);
      const std::vector<double> eps =
          eps_list.empty() ? std::vector<double>{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128} : parse_list(eps_list);
      const ScalingFit fit = cutoff_scaling_fit(v, eps, order, cfg.d, CubeDomain::unit(cfg.d), cfg.grid);
      std::ofstream(out_file(cfg, "cutoff_scaling.csv")) << fit.to_csv();
      emit(cfg, "cutoff_scaling.json",
           {{"variant", cfg.variant}, {"slope", fit.slope}, {"expected", fit.expected}, {"intercept", fit.intercept}, {"csv", "cutoff_scaling.csv"}});
    } else if (*suite) {
      fs::create_directories(cfg.out_dir);
      return run_suite(suite_name, fs::path(cfg.out_dir) / ("junit_" + suite_name + ".xml"), std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
