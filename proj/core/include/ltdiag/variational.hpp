#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ltdiag/grid.hpp"
#include "ltdiag/sobolev.hpp"
#include "ltdiag/trial_functions.hpp"
#include "ltdiag/types.hpp"

namespace ltdiag {

struct RitzProblem {
  std::vector<TrialFunction> basis;
  Eigen::MatrixXd gram_A;  // localized H^{s,N}(Q) pairings
  Eigen::MatrixXd gram_B;  // L^2(Q^N) pairings
  FractionalOrder order{1.0};
  CubeDomain domain = CubeDomain::unit(1);
};

struct RitzAssembly {
  int quad_points = 0;    // Gauss points per axis; 0 picks a size-dependent default
  int grid_points = 64;   // grid for non-first-order forms (polarization of the grid seminorm)
};

// s = 1 uses analytic gradients and tensor Gauss-Legendre quadrature; other
// orders sample the basis on a closed grid of Q^N and polarize the grid form.
RitzProblem assemble_ritz(std::vector<TrialFunction> basis, const FractionalOrder& order, const CubeDomain& q,
                          const RitzAssembly& opts = {});

struct RitzResult {
  double value = 0.0;
  Eigen::VectorXd coefficients;
};
RitzResult ritz_upper_bound(const RitzProblem& problem);

struct GridEstimate {
  double value = 0.0;
  std::size_t dof = 0;
  std::string method;  // "trivial", "dense" or "lanczos"
  bool converged = true;
};

// Smallest eigenvalue of the discrete localized form on the closed G-grid of
// [0, side]^{dN}, restricted to grid functions vanishing at every node with k
// particles inside a ball of radius halo * side / G around one of them.
GridEstimate grid_lower_estimate(int d, const FractionalOrder& order, int n_particles, const DiagonalSpec& diag,
                                 int points, double side = 1.0);

struct CubeEstimate {
  CubeDomain cube;
  int n = 0;
  double value = 0.0;
};

struct SuperadditivityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};
// lhs = estimate of (parent, N); rhs = min over n_1 + ... + n_m = N of sum E_{n_j}(child_j)
// with E_0 = 0. Every child entry needed must be present.
SuperadditivityCheck superadditivity_check(const CubeDomain& parent, int n_particles,
                                           const std::vector<CubeEstimate>& estimates, double tol = 1e-9);

// C = (-E + sqrt(E^2 + 4AB)) / (2B); 0 when the cube carries no mass.
double local_uncertainty_from(double E, double A, double B);
double local_uncertainty_constant(const GridFunction& psi, const CubeDomain& q_cube, const FractionalOrder& order);

struct EnergyEstimate {
  double upper = 0.0;
  double lower = 0.0;
  int n_particles = 0;
  int k = 2;
  int d = 1;
  FractionalOrder order{1.0};
  CubeDomain domain = CubeDomain::unit(1);
  bool converged = false;

  nlohmann::json to_json() const;
};

}  // namespace ltdiag
