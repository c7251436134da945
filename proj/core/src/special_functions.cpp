#include "ltdiag/special_functions.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "ltdiag/types.hpp"

namespace ltdiag {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  GaussRule r{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

double hurwitz_zeta(double s, double a) {
  if (!(a > 0.0)) throw Error("hurwitz_zeta: a must be positive");
  if (std::abs(s - 1.0) < 1e-14) throw Error("hurwitz_zeta: pole at s = 1");
  // Euler-Maclaurin with M explicit terms and K Bernoulli corrections
  constexpr int M = 12;
  constexpr int K = 10;
  double sum = 0.0;
  for (int n = 0; n < M; ++n) sum += std::pow(n + a, -s);
  const double x = M + a;
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double rising = s;  // s (s+1) ... (s+2k-2)
  double fact = 2.0;  // (2k)!
  double xpow = std::pow(x, -s - 1.0);
  for (int k = 1; k <= K; ++k) {
    sum += boost::math::bernoulli_b2n<double>(k) / fact * rising * xpow;
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
    xpow /= x * x;
  }
  return sum;
}

double upper_incomplete_gamma(double a, double x) {
  if (!(x > 0.0)) throw Error("upper_incomplete_gamma: x must be positive");
  if (a > 0.0 && x < a + 1.0) return boost::math::tgamma(a, x);
  // modified Lentz continued fraction, valid for any real a once x is not small
  if (x < 1.0) throw Error("upper_incomplete_gamma: non-positive a needs x >= 1");
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double dd = 1.0 / b;
  double h = dd;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    dd = an * dd + b;
    if (std::abs(dd) < tiny) dd = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    dd = 1.0 / dd;
    const double delta = dd * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x)) * h;
}

double epstein_zeta(int d, double t) {
  if (d < 1) throw Error("epstein_zeta: dimension must be positive");
  if (std::abs(t - d) < 1e-12) throw Error("epstein_zeta: pole at t = d");
  if (std::abs(t) < 1e-12) return -1.0;
  if (d == 1) return 2.0 * boost::math::zeta(t);
  // Ewald splitting with the theta-function functional equation
  using std::numbers::pi;
  double lattice = 0.0;
  const int R = 6;  // exp(-pi R^2) is far below double precision
  std::vector<int> n(static_cast<std::size_t>(d), -R);
  for (;;) {
    long r2 = 0;
    for (int v : n) r2 += static_cast<long>(v) * v;
    if (r2 != 0 && r2 <= static_cast<long>(R) * R) {
      const double y = pi * static_cast<double>(r2);
      lattice += upper_incomplete_gamma(0.5 * t, y) * std::pow(y, -0.5 * t) +
                 upper_incomplete_gamma(0.5 * (d - t), y) * std::pow(y, -0.5 * (d - t));
    }
    int a = d - 1;
    while (a >= 0 && ++n[static_cast<std::size_t>(a)] > R) n[static_cast<std::size_t>(a--)] = -R;
    if (a < 0) break;
  }
  const double bracket = -2.0 / t + 2.0 / (t - d) + lattice;
  return bracket * std::pow(pi, 0.5 * t) / boost::math::tgamma(0.5 * t);
}

double gagliardo_constant(int d, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw Error("gagliardo_constant: sigma must lie in (0,1), got " + std::to_string(sigma));
  }
  if (d < 1) throw Error("gagliardo_constant: dimension must be positive");
  return std::pow(2.0, 2.0 * sigma - 1.0) * std::pow(std::numbers::pi, -0.5 * d) *
         boost::math::tgamma(0.5 * (d + 2.0 * sigma)) / std::abs(boost::math::tgamma(-sigma));
}

}  // namespace ltdiag
