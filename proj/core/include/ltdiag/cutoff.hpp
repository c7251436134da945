#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ltdiag/grid.hpp"
#include "ltdiag/sobolev.hpp"
#include "ltdiag/types.hpp"

namespace ltdiag {

enum class CutoffVariant { plain, critical };

CutoffVariant parse_cutoff_variant(const std::string& name);
std::string to_string(CutoffVariant v);

struct CutoffSpec {
  CutoffVariant variant = CutoffVariant::plain;
  double epsilon = 0.1;
  int d = 1;
  int n_particles = 2;
};

// phi: 0 on (-inf, 1], 1 on [2, inf).  phi*: 0 on (-inf, -2], 1 on [-1, inf).
double cutoff_profile(CutoffVariant v, double x);
// phi(r / eps) or phi*(eps ln r) for a pair at distance r
double pair_factor(CutoffVariant v, double epsilon, double r);
// product over pairs j < k
double cutoff_evaluate(const CutoffSpec& spec, std::span<const double> x);

GridFunction cutoff_grid(const CutoffSpec& spec, int points, const CubeDomain& domain);

struct ScalingPoint {
  double epsilon = 0.0;
  double seminorm = 0.0;  // ||chi_eps||_{H^{s,N}(Omega)}
  double residual = 0.0;  // log-log fit residual
  bool used = false;
};
struct ScalingFit {
  std::vector<ScalingPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double expected = 0.0;
  std::string to_csv() const;
};

// Least-squares slope of log ||chi_eps|| against log eps for N = 2. Plain
// cutoffs use the tensor grid with the given points per axis; critical cutoffs
// (d = 1, s < 1) use graded quadrature in the pair distance. Points that fail
// to evaluate are dropped; at least three are required.
ScalingFit cutoff_scaling_fit(CutoffVariant variant, const std::vector<double>& epsilons, const FractionalOrder& order,
                              int d, const CubeDomain& omega, int points);

// Localized seminorm squared of a two-particle pair function on [a, a+L]^2
// (d = 1, s < 1): f(x_fixed, t, moving) is the value with the moving particle
// at x_fixed + t and the other one at x_fixed. Graded in t around t = 0.
using PairFunction = std::function<double(double x_fixed, double t, int moving)>;
double pair_seminorm_graded(const PairFunction& f, const CubeDomain& omega, double sigma, const GradedOptions& opts,
                            int fixed_points = 4);
double pair_l2_graded(const PairFunction& f, const CubeDomain& omega, const GradedOptions& opts, int fixed_points = 4);

// ||Psi - chi_eps Psi||_{L^2} + ||Psi - chi_eps Psi||_{H^{s,N}} for each epsilon (grid evaluation).
std::vector<double> approximation_decay(const GridFunction& psi, CutoffVariant variant,
                                        const std::vector<double>& epsilons, const FractionalOrder& order);
// Same for a two-particle closed-form Psi(x1, x2) in d = 1 with graded pair quadrature.
std::vector<double> approximation_decay_pair(const std::function<double(double, double)>& psi, const CubeDomain& omega,
                                             CutoffVariant variant, const std::vector<double>& epsilons,
                                             const FractionalOrder& order);

}  // namespace ltdiag
