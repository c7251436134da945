#include "ltdiag/extension.hpp"

#include <cmath>

#include "ltdiag/finite_difference.hpp"
#include "ltdiag/types.hpp"

namespace ltdiag {

std::vector<Rational> ReflectionCoefficients::residuals() const {
  std::vector<Rational> r;
  const int m = static_cast<int>(lambdas.size());
  for (int i = 1; i <= m; ++i) {
    Rational s = 0;
    for (int j = 1; j <= m; ++j) {
      // (-j)^{1-i} = 1 / (-j)^{i-1}
      Rational p = 1;
      for (int k = 0; k < i - 1; ++k) p /= -j;
      s += lambdas[static_cast<std::size_t>(j - 1)] * p;
    }
    r.push_back(s - 1);
  }
  return r;
}

ReflectionCoefficients reflection_coefficients(int n) {
  if (n < 0) throw Error("reflection_coefficients: n must be non-negative");
  const int m = n + 1;
  std::vector<std::vector<Rational>> a(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(m + 1)));
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      Rational p = 1;
      for (int k = 0; k < i - 1; ++k) p /= -j;
      a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = p;
    }
    a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(m)] = 1;
  }
  for (int c = 0; c < m; ++c) {
    int piv = c;
    while (a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)] == 0) ++piv;
    std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(c)]);
    const Rational inv = 1 / a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    for (auto& v : a[static_cast<std::size_t>(c)]) v *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      const Rational f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (f == 0) continue;
      for (int k = 0; k <= m; ++k) a[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= f * a[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
    }
  }
  ReflectionCoefficients rc;
  rc.order_n = n;
  for (int j = 0; j < m; ++j) rc.lambdas.push_back(a[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)]);
  return rc;
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double extension_profile(double x, double delta) { return smooth_step((x + delta) / (0.5 * delta)); }

namespace {

double lagrange_at(std::span<const double> v, double h, double x) {
  const int g = static_cast<int>(v.size());
  constexpr int width = 6;
  const double pos = x / h;
  int start = static_cast<int>(std::floor(pos)) - width / 2 + 1;
  start = std::clamp(start, 0, g - width);
  double total = 0.0;
  for (int i = 0; i < width; ++i) {
    double li = 1.0;
    for (int k = 0; k < width; ++k) {
      if (k != i) li *= (pos - (start + k)) / static_cast<double>(i - k);
    }
    total += li * v[static_cast<std::size_t>(start + i)];
  }
  return total;
}

}  // namespace

Extension1D extend_1d(std::span<const double> v, int n, double delta) {
  const int g = static_cast<int>(v.size());
  if (g < std::max(6, n + 3)) throw Error("extend_1d: grid too coarse for order-" + std::to_string(n) + " differences");
  if (!(delta > 0.0 && delta <= 1.0)) throw Error("extend_1d: delta must lie in (0, 1]");
  const auto rc = reflection_coefficients(n);
  std::vector<double> lam;
  for (const auto& l : rc.lambdas) lam.push_back(l.get_d());
  Extension1D ext;
  ext.points = g;
  ext.spacing = 1.0 / (g - 1);
  ext.x.resize(static_cast<std::size_t>(2 * g - 1));
  ext.values.resize(static_cast<std::size_t>(2 * g - 1));
  for (int i = -(g - 1); i <= g - 1; ++i) {
    const std::size_t k = static_cast<std::size_t>(i + g - 1);
    const double x = i * ext.spacing;
    ext.x[k] = x;
    if (i >= 0) {
      ext.values[k] = v[static_cast<std::size_t>(i)];
      continue;
    }
    const double phi = extension_profile(x, delta);
    if (phi == 0.0) {
      ext.values[k] = 0.0;
      continue;
    }
    double s = 0.0;
    for (int j = 1; j <= n + 1; ++j) {
      const double y = -x / j;
      const double r = y / ext.spacing;
      const double nearest = std::round(r);
      const double vy = std::abs(r - nearest) < 1e-9 ? v[static_cast<std::size_t>(nearest)] : lagrange_at(v, ext.spacing, y);
      s += lam[static_cast<std::size_t>(j - 1)] * vy;
    }
    ext.values[k] = phi * s;
  }
  return ext;
}

double one_sided_derivative(const Extension1D& ext, int order, bool from_right) {
  const int width = order + 2;
  if (ext.points < width) throw Error("one_sided_derivative: grid too coarse");
  std::vector<double> nodes(static_cast<std::size_t>(width));
  for (int k = 0; k < width; ++k) nodes[static_cast<std::size_t>(k)] = from_right ? k : -k;
  const auto w = fornberg_weights(0.0, nodes, order);
  double s = 0.0;
  for (int k = 0; k < width; ++k) s += w[static_cast<std::size_t>(k)] * ext.at_index(from_right ? k : -k);
  return s * std::pow(ext.spacing, -order);
}

std::vector<DerivativeMatch> derivative_matching(const Extension1D& ext, int n) {
  std::vector<DerivativeMatch> out;
  for (int p = 0; p <= n; ++p) {
    DerivativeMatch m;
    m.order = p;
    m.left = one_sided_derivative(ext, p, false);
    m.right = one_sided_derivative(ext, p, true);
    m.tolerance = 10.0 * ext.spacing;
    m.ok = std::abs(m.left - m.right) <= m.tolerance;
    out.push_back(m);
  }
  return out;
}

}  // namespace ltdiag
