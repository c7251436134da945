#pragma once

#include <vector>

namespace ltdiag {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

// Hurwitz zeta sum_{n>=0} (n+a)^{-s}, a > 0, s != 1 (analytic continuation for s < 1).
double hurwitz_zeta(double s, double a);

// Upper incomplete gamma Gamma(a, x) for real a and x > 0.
double upper_incomplete_gamma(double a, double x);

// Epstein zeta of the cubic lattice, sum_{n in Z^d, n != 0} |n|^{-t}, continued to all t != d.
double epstein_zeta(int d, double t);

// c_{d,sigma} = 2^{2 sigma-1} pi^{-d/2} Gamma((d+2 sigma)/2) / |Gamma(-sigma)|
double gagliardo_constant(int d, double sigma);

}  // namespace ltdiag
