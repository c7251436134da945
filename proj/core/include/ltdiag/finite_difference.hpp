#pragma once

#include <span>
#include <vector>

#include "ltdiag/grid.hpp"

namespace ltdiag {

// Fornberg's recursion: weights of the `order`-th derivative at x0 from the given nodes.
std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int order);

struct Stencil {
  int start = 0;              // first node index (may be negative on a periodic grid)
  std::vector<double> weights;
};

// Accuracy-2 stencils of the `order`-th derivative for every node of a uniform
// axis: central in the interior, one-sided windows of order+2 nodes at the faces
// of a closed grid, wrapped on a periodic grid.
std::vector<Stencil> derivative_stencils(int points, int order, double spacing, GridKind kind);

// Applies a stencil table along one axis of a row-major array with the given stride.
void apply_stencils(std::span<const cplx> in, std::span<cplx> out, int points, std::size_t stride,
                    const std::vector<Stencil>& stencils);

}  // namespace ltdiag
