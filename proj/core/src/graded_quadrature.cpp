#include <algorithm>
#include <cmath>

#include "ltdiag/sobolev.hpp"
#include "ltdiag/special_functions.hpp"

namespace ltdiag {

namespace {

// Panel edges on [u, v] refined geometrically toward both ends down to `finest`.
std::vector<double> graded_edges(double u, double v, double finest, double ratio) {
  std::vector<double> left{u};
  std::vector<double> right{v};
  const double mid = 0.5 * (u + v);
  for (double s = finest; u + s < mid; s *= ratio) {
    left.push_back(u + s);
    right.push_back(v - s);
  }
  left.push_back(mid);
  std::reverse(right.begin(), right.end());
  left.insert(left.end(), right.begin(), right.end());
  return left;
}

template <typename F>
double integrate_panels(const std::vector<double>& edges, const GaussRule& rule, F&& f) {
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(c + half * rule.nodes[k]);
    total += half * s;
  }
  return total;
}

// cut points of [a, b] at the breakpoints and the active window edges; returns
// the sub-intervals to integrate over
std::vector<std::pair<double, double>> active_pieces(double a, double b, const std::vector<double>& points,
                                                     double radius) {
  std::vector<double> cuts{a, b};
  std::vector<std::pair<double, double>> windows;
  const bool limited = std::isfinite(radius);
  for (double q : points) {
    if (q > a && q < b) cuts.push_back(q);
    if (limited) {
      windows.emplace_back(q - radius, q + radius);
      if (q - radius > a && q - radius < b) cuts.push_back(q - radius);
      if (q + radius > a && q + radius < b) cuts.push_back(q + radius);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    if (limited && !std::any_of(windows.begin(), windows.end(), [m](const auto& w) { return m > w.first && m < w.second; })) {
      continue;
    }
    out.emplace_back(cuts[i], cuts[i + 1]);
  }
  return out;
}

}  // namespace

double graded_integral_1d(const std::function<double(double)>& g, double t_lo, double t_hi,
                          std::span<const double> breakpoints, const GradedOptions& opts) {
  if (!(t_hi > t_lo)) return 0.0;
  const GaussRule rule = gauss_legendre(opts.gauss_points);
  double total = 0.0;
  for (const auto& [u, v] : active_pieces(t_lo, t_hi, {breakpoints.begin(), breakpoints.end()}, opts.active_radius)) {
    total += integrate_panels(graded_edges(u, v, opts.r_min, opts.ratio), rule, g);
  }
  return total;
}

double graded_gagliardo_1d(const std::function<double(double)>& g, double t_lo, double t_hi, double sigma,
                           std::span<const double> breakpoints, const GradedOptions& opts) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw Error("graded_gagliardo_1d: sigma must lie in (0,1)");
  if (!(t_hi > t_lo)) throw Error("graded_gagliardo_1d: empty interval");
  if (!(opts.r_min > 0.0) || !(opts.ratio > 1.0)) throw Error("graded_gagliardo_1d: bad grading options");
  const GaussRule rule = gauss_legendre(opts.gauss_points);
  const double span = t_hi - t_lo;

  // I(r) = int_{t_lo}^{t_hi - r} |g(t + r) - g(t)|^2 dt
  auto pair_integral = [&](double r) {
    const double a = t_lo;
    const double b = t_hi - r;
    if (!(b > a)) return 0.0;
    std::vector<double> pts;
    for (double p : breakpoints) {
      pts.push_back(p);
      pts.push_back(p - r);
    }
    double total = 0.0;
    for (const auto& [u, v] : active_pieces(a, b, pts, opts.active_radius)) {
      total += integrate_panels(graded_edges(u, v, opts.r_min, opts.ratio), rule, [&](double t) {
        const double diff = g(t + r) - g(t);
        return diff * diff;
      });
    }
    return total;
  };

  std::vector<double> r_edges{opts.r_min};
  for (double r = opts.r_min * opts.ratio; r < span; r *= opts.ratio) r_edges.push_back(r);
  r_edges.push_back(span);
  // I(r) has kinks where a breakpoint (or active window edge) meets an end or another breakpoint
  std::vector<double> marks;
  for (double p : breakpoints) {
    marks.push_back(p);
    if (std::isfinite(opts.active_radius)) {
      marks.push_back(p - opts.active_radius);
      marks.push_back(p + opts.active_radius);
    }
  }
  std::vector<double> kinks;
  for (double m : marks) {
    kinks.push_back(m - t_lo);
    kinks.push_back(t_hi - m);
    for (double m2 : marks) kinks.push_back(std::abs(m - m2));
  }
  for (double r : kinks) {
    if (r > opts.r_min && r < span) r_edges.push_back(r);
  }
  std::sort(r_edges.begin(), r_edges.end());
  r_edges.erase(std::unique(r_edges.begin(), r_edges.end(),
                            [](double x, double y) { return y - x <= 1e-14 * std::abs(y); }),
                r_edges.end());
  const double body = integrate_panels(r_edges, rule, [&](double r) {
    return std::pow(r, -1.0 - 2.0 * sigma) * pair_integral(r);
  });
  // below r_min the pair integral is quadratic in r
  const double tail = pair_integral(opts.r_min) * std::pow(opts.r_min, -2.0 * sigma) / (2.0 - 2.0 * sigma);
  return gagliardo_constant(1, sigma) * 2.0 * (body + tail);
}

}  // namespace ltdiag
