#pragma once

#include <span>
#include <vector>

#include "ltdiag/polynomial.hpp"

namespace ltdiag {

struct ReflectionCoefficients {
  int order_n = 0;
  std::vector<Rational> lambdas;  // lambda_1 .. lambda_{n+1}

  // sum_j lambda_j (-j)^{1-i} - 1 for i = 1..n+1 (all exactly zero)
  std::vector<Rational> residuals() const;
};

ReflectionCoefficients reflection_coefficients(int n);

// C^infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

// Extension profile: 0 for x < -delta, 1 on [-delta/2, 0].
double extension_profile(double x, double delta = 0.5);

struct Extension1D {
  double spacing = 0.0;
  int points = 0;               // samples on [0, 1]; output holds 2*points - 1 on [-1, 1]
  std::vector<double> x;
  std::vector<double> values;
  double at_index(int i) const { return values[static_cast<std::size_t>(i + points - 1)]; }
};

// v_ext(x) = phi(x) sum_j lambda_j v(-x/j) for x < 0 and v on [0, 1]. Off-node
// values v(|x|/j) use local 6-point Lagrange interpolation.
Extension1D extend_1d(std::span<const double> v, int n, double delta = 0.5);

// Accuracy-2 one-sided difference of the given order at x = 0 from the right or left.
double one_sided_derivative(const Extension1D& ext, int order, bool from_right);

struct DerivativeMatch {
  int order = 0;
  double left = 0.0;
  double right = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};
// Orders 0..n matched across x = 0 within 10 h.
std::vector<DerivativeMatch> derivative_matching(const Extension1D& ext, int n);

}  // namespace ltdiag
