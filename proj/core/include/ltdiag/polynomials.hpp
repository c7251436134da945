#pragma once

#include <vector>

#include "ltdiag/polynomial.hpp"
#include "ltdiag/types.hpp"

namespace ltdiag {

// Set partition of the particles {0..N-1}; particles in one block coincide.
struct CoincidencePattern {
  std::vector<std::vector<int>> blocks;

  // pattern with a single block A and all other particles free
  static CoincidencePattern single_block(int n_particles, const std::vector<int>& block);
  void validate(int n_particles, int k = 2) const;
};

// Collapses each block onto one representative point. Reduced variables follow
// the blocks ordered by their smallest particle: block b, coordinate c -> b*d + c.
SparsePolynomial substitute_coincidence(const SparsePolynomial& f, int d, const CoincidencePattern& pattern);

// True iff f vanishes on every set {x_j1 = ... = x_jk} of k distinct particles.
bool vanishes_on_k_diagonal(const SparsePolynomial& f, int d, int k);

// dim{f : deg_{x_j} f <= S, f = 0 on the k-diagonal} in dN variables, exact.
int vanishing_space_dimension(int d, int n_particles, int k, int S, std::size_t cap = 20000);

// Unique polynomial with deg_{x_a} <= nodes[a].size()-1 interpolating row-major samples.
SparsePolynomial tensor_interpolate(std::span<const double> samples, const std::vector<std::vector<double>>& nodes);

// prod_{i<j} (x_i - x_j) in one dimension.
SparsePolynomial vandermonde_polynomial(int n_particles);

// prod_{j<l<k} (x_{j,1} - x_{l,1}) in d*k variables
SparsePolynomial counterexample_polynomial(int d, int k);

// Every derivative D^alpha with |alpha| = m in the coordinates of a single
// particle is the zero polynomial (so the integer-order localized form vanishes).
bool local_form_vanishes(const SparsePolynomial& f, int d, int m);

struct WskResult {
  double value = 0.0;          // at G
  double refined_value = 0.0;  // at 2G
  bool converged = false;      // relative change < 5%
  bool diverged = false;       // growth by more than 2x
  int points = 0;
};

// int_{Q^N} W_{s,k} |u|^2 with W_{s,k} = sum_{|A|=k} (sum_{j<l in A} |x_j - x_l|^2)^{-s},
// trapezoid tensor quadrature with coincident configurations excluded.
WskResult wsk_integral(const SparsePolynomial& u, int d, const FractionalOrder& order, int k, const CubeDomain& q,
                       int points);
// Single-resolution value (exposed for refinement studies and tests).
double wsk_quadrature(const SparsePolynomial& u, int d, const FractionalOrder& order, int k, const CubeDomain& q,
                      int points, bool force_direct = false);

}  // namespace ltdiag
