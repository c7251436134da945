#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <json.hpp>

#include "ltdiag/grid.hpp"
#include "ltdiag/types.hpp"

namespace ltdiag {

struct SeminormOptions {
  // restore the contribution of the excluded coincident pairs (lattice zeta term)
  bool diagonal_correction = true;
};

struct SeminormReport {
  double value = 0.0;
  std::vector<double> per_particle_terms;
  FractionalOrder order{1.0};
  CubeDomain domain = CubeDomain::unit(1);

  nlohmann::json to_json() const;
};

// Node index range [lo, hi] of a sub-cube along each axis of a grid.
// Sub-cubes are snapped to the grid nodes they contain.
struct NodeBox {
  std::vector<int> lo;
  std::vector<int> hi;
  int count(int axis) const { return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)] + 1; }
};
NodeBox snap_to_nodes(const CubeDomain& ambient, int points, GridKind kind, const CubeDomain& omega);

// Trapezoid weights of the snapped sub-cube along one axis (zero outside).
std::vector<double> restricted_weights(int points, double spacing, GridKind kind, int lo, int hi);

// Multinomial m!/alpha! for every |alpha| = m in d dimensions (exact integers).
struct MultiIndexTerm {
  std::vector<int> alpha;
  long long weight;
};
std::vector<MultiIndexTerm> multi_indices(int d, int m);

// Per-variable seminorm |Psi(.., x_j, ..)|^2_{H^s(Omega)} for every ambient grid
// configuration of the other particles (row-major over the remaining particles).
std::vector<double> seminorm_per_variable(const GridFunction& psi, int j, const FractionalOrder& order,
                                          const CubeDomain& omega, const SeminormOptions& opts = {});

// Completely localized form: other particles integrated over Omega^{N-1}.
SeminormReport seminorm_HsN(const GridFunction& psi, const FractionalOrder& order, const CubeDomain& omega,
                            const SeminormOptions& opts = {});

// Expected local energy on Q: other particles integrated over the ambient cube.
double local_energy(const GridFunction& psi, const FractionalOrder& order, const CubeDomain& q_cube,
                    const SeminormOptions& opts = {});

// L^{dN} sum_p |p|^{2s} |c_p|^2 on a torus grid (full multiplier |p| over all dN frequencies).
double global_seminorm_fourier(const GridFunction& psi, const FractionalOrder& order);
// Same with sum_j |p_j|^{2s}, i.e. the completely localized form on the torus.
double per_particle_seminorm_fourier(const GridFunction& psi, const FractionalOrder& order);

struct NormEquivalence {
  std::optional<double> ratio;  // empty when the global seminorm vanishes
  double c_lo = 1.0;
  double c_hi = 1.0;
  bool ok = false;
};
NormEquivalence norm_equivalence_check(const GridFunction& psi, const FractionalOrder& order, double tol = 1e-6);

// Discrete one-body H^s(Q) form on the closed node grid of Q, as a symmetric
// matrix in row-compressed form: u^T A u approximates |u|^2_{H^s(Q)}. Integer
// orders use forward (edge) differences, so the form has exactly the
// polynomials of degree < s in its kernel; fractional orders add the Gagliardo
// graph Laplacian.
struct SparseRows {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;
  double apply_row(int i, std::span<const double> x) const;
};
SparseRows one_body_form(int d, const FractionalOrder& order, int points, double side,
                         const SeminormOptions& opts = {});

// 1-D Gagliardo seminorm c_{1,sigma} int int_{[t_lo,t_hi]^2} |g(t)-g(t')|^2 / |t-t'|^{1+2 sigma}
// by graded Gauss panels clustered at the breakpoints of g and in the pair
// distance r, for functions with structure far below any uniform grid scale.
// When active_radius is finite, g is taken to be one constant outside the
// active_radius-neighbourhoods of the breakpoints. Distances below r_min use the
// leading Taylor term of the pair integral.
struct GradedOptions {
  double r_min = 1e-12;
  double ratio = 2.0;
  int gauss_points = 6;
  double active_radius = std::numeric_limits<double>::infinity();
};
// int_{t_lo}^{t_hi} g(t) dt with the same panels; with a finite active_radius
// g is taken to vanish outside the breakpoint neighbourhoods.
double graded_integral_1d(const std::function<double(double)>& g, double t_lo, double t_hi,
                          std::span<const double> breakpoints, const GradedOptions& opts = {});
double graded_gagliardo_1d(const std::function<double(double)>& g, double t_lo, double t_hi, double sigma,
                           std::span<const double> breakpoints, const GradedOptions& opts = {});

}  // namespace ltdiag
