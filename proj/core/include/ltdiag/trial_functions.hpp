#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ltdiag/types.hpp"

namespace ltdiag {

// Closed-form N-body function on Q^N with its full gradient (dN components).
struct TrialFunction {
  std::string label;
  int n_particles = 1;
  int dim = 1;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

// One-body Neumann mode prod_c cos(pi n_c (x_c - a_c) / L) on Q.
double neumann_mode(std::span<const int> n, const CubeDomain& q, std::span<const double> x);
void neumann_mode_gradient(std::span<const int> n, const CubeDomain& q, std::span<const double> x,
                           std::span<double> grad);

// The first `count` one-body Neumann mode indices ordered by eigenvalue pi^2|n|^2 / L^2
// (ties broken lexicographically).
std::vector<std::vector<int>> neumann_modes(int d, int count);

// Slater determinant det[phi_{modes[i]}(x_j)]; antisymmetric, so it vanishes on
// every coincidence x_j = x_l.
TrialFunction slater_determinant(const std::vector<std::vector<int>>& modes, const CubeDomain& q);

// Phi(x) prod_{j<l} (1 - exp(-|x_j - x_l|^2 / a^2)) with Phi = (1 + sum_j |x_j - c|^2)^p,
// c the centre of Q.
TrialFunction jastrow(int n_particles, const CubeDomain& q, double a, int p);

TrialFunction constant_function(int n_particles, int d);

// Named families for the command line: "slater" uses the lowest Neumann modes
// (basis_size determinants built from successive mode windows), "jastrow" uses
// p = 0..basis_size-1, "constant" is a single constant.
std::vector<TrialFunction> trial_basis(const std::string& family, int n_particles, const CubeDomain& q,
                                       int basis_size, double jastrow_width = 0.3);

}  // namespace ltdiag
