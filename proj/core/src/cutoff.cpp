#include "ltdiag/cutoff.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ltdiag/extension.hpp"
#include "ltdiag/special_functions.hpp"

namespace ltdiag {

CutoffVariant parse_cutoff_variant(const std::string& name) {
  if (name == "plain") return CutoffVariant::plain;
  if (name == "critical") return CutoffVariant::critical;
  throw Error("unknown cutoff variant '" + name + "' (expected plain or critical)");
}

std::string to_string(CutoffVariant v) { return v == CutoffVariant::plain ? "plain" : "critical"; }

double cutoff_profile(CutoffVariant v, double x) {
  return v == CutoffVariant::plain ? smooth_step(x - 1.0) : smooth_step(x + 2.0);
}

double pair_factor(CutoffVariant v, double epsilon, double r) {
  if (r <= 0.0) return 0.0;
  if (v == CutoffVariant::plain) return cutoff_profile(v, r / epsilon);
  return cutoff_profile(v, epsilon * std::log(r));
}

double cutoff_evaluate(const CutoffSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.d * spec.n_particles) throw Error("cutoff_evaluate: configuration size mismatch");
  if (!(spec.epsilon > 0.0)) throw Error("cutoff_evaluate: epsilon must be positive");
  double chi = 1.0;
  for (int j = 0; j < spec.n_particles && chi != 0.0; ++j) {
    for (int k = j + 1; k < spec.n_particles; ++k) {
      double r2 = 0.0;
      for (int c = 0; c < spec.d; ++c) {
        const double diff = x[static_cast<std::size_t>(j * spec.d + c)] - x[static_cast<std::size_t>(k * spec.d + c)];
        r2 += diff * diff;
      }
      chi *= pair_factor(spec.variant, spec.epsilon, std::sqrt(r2));
    }
  }
  return chi;
}

GridFunction cutoff_grid(const CutoffSpec& spec, int points, const CubeDomain& domain) {
  if (domain.dim() != spec.d) throw Error("cutoff_grid: domain dimension mismatch");
  return GridFunction::sample(spec.n_particles, points, domain, GridKind::closed,
                              [&](std::span<const double> x) { return cutoff_evaluate(spec, x); });
}

std::string ScalingFit::to_csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "epsilon,seminorm,residual\n";
  for (const auto& p : points) {
    if (p.used) os << p.epsilon << ',' << p.seminorm << ',' << p.residual << '\n';
  }
  return os.str();
}

namespace {

GradedOptions cutoff_grading(CutoffVariant v, double eps) {
  GradedOptions o;
  o.ratio = 3.0;
  o.gauss_points = 8;
  if (v == CutoffVariant::plain) {
    o.r_min = 1e-6 * eps;
    o.active_radius = 2.0 * eps;
  } else {
    o.r_min = 1e-3 * std::exp(-2.0 / eps);
    o.active_radius = std::exp(-1.0 / eps);
  }
  return o;
}

}  // namespace

double pair_seminorm_graded(const PairFunction& f, const CubeDomain& omega, double sigma, const GradedOptions& opts,
                            int fixed_points) {
  if (omega.dim() != 1) throw Error("graded pair seminorm supports d = 1 only");
  const double a = omega.corner(0);
  const double L = omega.side();
  const GaussRule rule = gauss_legendre(fixed_points);
  const double bp[] = {0.0};
  double total = 0.0;
  for (int moving = 0; moving < 2; ++moving) {
    // two Gauss panels in the fixed coordinate
    for (int half = 0; half < 2; ++half) {
      const double lo = a + 0.5 * L * half;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double x = lo + 0.25 * L * (rule.nodes[k] + 1.0);
        const double v = graded_gagliardo_1d([&](double t) { return f(x, t, moving); }, a - x, a + L - x, sigma, bp, opts);
        total += 0.25 * L * rule.weights[k] * v;
      }
    }
  }
  return total;
}

double pair_l2_graded(const PairFunction& f, const CubeDomain& omega, const GradedOptions& opts, int fixed_points) {
  if (omega.dim() != 1) throw Error("graded pair norm supports d = 1 only");
  const double a = omega.corner(0);
  const double L = omega.side();
  const GaussRule rule = gauss_legendre(fixed_points);
  const double bp[] = {0.0};
  double total = 0.0;
  for (int half = 0; half < 2; ++half) {
    const double lo = a + 0.5 * L * half;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double x = lo + 0.25 * L * (rule.nodes[k] + 1.0);
      const double v = graded_integral_1d(
          [&](double t) {
            const double y = f(x, t, 0);
            return y * y;
          },
          a - x, a + L - x, bp, opts);
      total += 0.25 * L * rule.weights[k] * v;
    }
  }
  return total;
}

ScalingFit cutoff_scaling_fit(CutoffVariant variant, const std::vector<double>& epsilons, const FractionalOrder& order,
                              int d, const CubeDomain& omega, int points) {
  ScalingFit fit;
  fit.expected = variant == CutoffVariant::plain ? 0.5 * d - order.s() : 0.5;
  for (double eps : epsilons) {
    ScalingPoint p;
    p.epsilon = eps;
    try {
      double sq = 0.0;
      if (variant == CutoffVariant::critical) {
        if (d != 1 || order.m() != 0) throw Error("critical cutoff scaling needs d = 1 and s < 1");
        sq = pair_seminorm_graded([&](double, double t, int) { return pair_factor(variant, eps, std::abs(t)); }, omega,
                                  order.sigma(), cutoff_grading(variant, eps));
      } else {
        const CutoffSpec spec{variant, eps, d, 2};
        sq = seminorm_HsN(cutoff_grid(spec, points, omega), order, omega).value;
      }
      p.seminorm = std::sqrt(sq);
      p.used = std::isfinite(p.seminorm) && p.seminorm > 0.0;
    } catch (const Error&) {
      p.used = false;
    }
    fit.points.push_back(p);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : fit.points) {
    if (!p.used) continue;
    const double x = std::log(p.epsilon);
    const double y = std::log(p.seminorm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw Error("cutoff_scaling_fit: fewer than three epsilons could be evaluated");
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  for (auto& p : fit.points) {
    if (p.used) p.residual = std::log(p.seminorm) - (fit.intercept + fit.slope * std::log(p.epsilon));
  }
  return fit;
}

std::vector<double> approximation_decay(const GridFunction& psi, CutoffVariant variant,
                                        const std::vector<double>& epsilons, const FractionalOrder& order) {
  std::vector<double> out;
  for (double eps : epsilons) {
    const CutoffSpec spec{variant, eps, psi.dim(), psi.n_particles()};
    GridFunction r(psi);
    const auto chi = cutoff_grid(spec, psi.points(), psi.domain());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = psi[i] * (1.0 - chi[i].real());
    const double l2 = std::sqrt(r.norm_squared());
    const double hs = std::sqrt(seminorm_HsN(r, order, psi.domain()).value);
    out.push_back(l2 + hs);
  }
  return out;
}

std::vector<double> approximation_decay_pair(const std::function<double(double, double)>& psi, const CubeDomain& omega,
                                             CutoffVariant variant, const std::vector<double>& epsilons,
                                             const FractionalOrder& order) {
  if (order.m() != 0) throw Error("graded approximation decay supports s < 1 only");
  std::vector<double> out;
  for (double eps : epsilons) {
    const PairFunction residual = [&](double x, double t, int moving) {
      const double y = x + t;
      const double v = moving == 0 ? psi(y, x) : psi(x, y);
      return v * (1.0 - pair_factor(variant, eps, std::abs(t)));
    };
    const auto opts = cutoff_grading(variant, eps);
    const double l2 = std::sqrt(pair_l2_graded(residual, omega, opts));
    const double hs = std::sqrt(pair_seminorm_graded(residual, omega, order.sigma(), opts));
    out.push_back(l2 + hs);
  }
  return out;
}

}  // namespace ltdiag
