#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "ltdiag/grid.hpp"

namespace ltdiag {

struct CoveringResult {
  int d = 1;
  CubeDomain root = CubeDomain::unit(1);
  std::vector<CubeDomain> cubes;
  std::vector<double> masses;
  std::vector<int> depths;
  std::vector<double> parent_masses;  // NaN for the root
  double lambda = 0.0;
  double alpha = 0.0;
  double q = 0.0;
  double b = 0.0;

  nlohmann::json to_json(std::optional<double> lhs = std::nullopt) const;
};

// b = (1 - 2^d q / Lambda) (2^{d alpha} - 1) / (2^{d alpha} + 2^d - 2)
double covering_b(int d, double q, double lambda, double alpha);

struct CoveringOptions {
  double alpha = 2.0;
  double q = 1.0;
  int max_depth = 40;
};

// Recursive dyadic subdivision of the smallest grid-aligned cube containing supp f
// until every cube carries mass <= Lambda. Cube masses sum the trapezoid cell
// masses whose centres lie in the cube (lo < centre <= hi, ties to the lower cube).
CoveringResult build_covering(const DensityGrid& f, double lambda, const CoveringOptions& opts = {});

struct CoveringCheck {
  double lhs = 0.0;
  double scale = 0.0;
  bool ok = false;
};
// Sum over cubes of |Q|^{-alpha} ([m_Q - q]_+ - b m_Q), ok when >= -1e-9 * scale.
CoveringCheck verify_covering_inequality(const CoveringResult& cov);

// Geometric re-assertion: cubes inside the root, pairwise disjoint interiors, volumes summing to the root.
bool covering_is_partition(const CoveringResult& cov, double tol = 1e-12);

}  // namespace ltdiag
