#include "ltdiag/lanczos.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ltdiag/types.hpp"

namespace ltdiag {

LanczosResult lanczos_smallest(std::size_t n, const std::function<void(std::span<const double>, std::span<double>)>& op,
                               std::span<const double> start, const LanczosOptions& opts) {
  if (n == 0) throw Error("lanczos: empty operator");
  if (start.size() != n) throw Error("lanczos: start vector size mismatch");
  std::vector<double> v(start.begin(), start.end()), v_prev(n, 0.0), w(n);
  double nrm = 0.0;
  for (double x : v) nrm += x * x;
  nrm = std::sqrt(nrm);
  if (!(nrm > 0.0)) throw Error("lanczos: zero start vector");
  for (double& x : v) x /= nrm;

  std::vector<double> alpha, beta;
  LanczosResult res;
  double last = 0.0;
  int stable = 0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    op(v, w);
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += w[i] * v[i];
    const double b_prev = beta.empty() ? 0.0 : beta.back();
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * v[i] + b_prev * v_prev[i];
    double b = 0.0;
    for (double x : w) b += x * x;
    b = std::sqrt(b);
    alpha.push_back(a);
    const bool breakdown = b <= 1e-14 * std::max(1.0, std::abs(a));
    if (!breakdown && (it + 1) % opts.check_every != 0 && it + 1 < opts.max_iterations) {
      beta.push_back(b);
      v_prev.swap(v);
      for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
      continue;
    }

    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(alpha.size() > 0 ? alpha.size() - 1 : 0));
    for (Eigen::Index i = 0; i < sub.size(); ++i) sub(i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("lanczos: tridiagonal eigensolve failed");
    const double cur = es.eigenvalues()(0);
    res.value = cur;
    res.iterations = it + 1;
    if (it + 1 > opts.check_every && std::abs(cur - last) <= opts.tolerance * std::max(1.0, std::abs(cur))) {
      if (++stable >= opts.stable_window) {
        res.converged = true;
        return res;
      }
    } else {
      stable = 0;
    }
    last = cur;
    if (breakdown) {
      // invariant subspace reached: the Ritz value is exact
      res.converged = true;
      return res;
    }
    beta.push_back(b);
    v_prev.swap(v);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
  }
  return res;
}

}  // namespace ltdiag
