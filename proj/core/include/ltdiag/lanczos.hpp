#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ltdiag {

struct LanczosOptions {
  int max_iterations = 4000;
  double tolerance = 1e-11;  // relative change of the lowest Ritz value
  int check_every = 10;      // iterations between tridiagonal eigensolves
  int stable_window = 3;     // consecutive checks the change must stay below tolerance
};

struct LanczosResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Lowest eigenvalue of the symmetric operator y = op(x) on R^n, three-term
// recurrence without reorthogonalization (only the extreme Ritz value is used,
// which loss of orthogonality does not spoil).
LanczosResult lanczos_smallest(std::size_t n, const std::function<void(std::span<const double>, std::span<double>)>& op,
                               std::span<const double> start, const LanczosOptions& opts = {});

}  // namespace ltdiag
