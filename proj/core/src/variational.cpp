#include "ltdiag/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include <Eigen/Eigenvalues>

#include "ltdiag/lanczos.hpp"
#include "ltdiag/parallel.hpp"
#include "ltdiag/special_functions.hpp"

namespace ltdiag {

namespace {

int default_quad_points(int axes) {
  // keep the tensor rule near 2e5 nodes
  const int q = static_cast<int>(std::floor(std::pow(2.0e5, 1.0 / axes)));
  return std::clamp(q, 8, 32);
}

RitzProblem assemble_gradient(RitzProblem p, int quad) {
  const int nb = static_cast<int>(p.basis.size());
  const int n = p.basis.front().n_particles;
  const int d = p.domain.dim();
  const int axes = n * d;
  const GaussRule rule = gauss_legendre(quad);
  const double half = 0.5 * p.domain.side();
  std::size_t total = 1;
  for (int a = 0; a < axes; ++a) total *= static_cast<std::size_t>(quad);

  const std::size_t chunks = std::min(total, kReductionChunks);
  std::vector<Eigen::MatrixXd> pa(chunks, Eigen::MatrixXd::Zero(nb, nb)), pb(chunks, Eigen::MatrixXd::Zero(nb, nb));
  detail::strided_run(chunks, [&](std::size_t c) {
    std::vector<double> x(static_cast<std::size_t>(axes));
    std::vector<double> g(static_cast<std::size_t>(axes));
    Eigen::VectorXd val(nb);
    Eigen::MatrixXd grad(axes, nb);
    const std::size_t begin = total * c / chunks;
    const std::size_t end = total * (c + 1) / chunks;
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::size_t rem = flat;
      double w = 1.0;
      for (int a = axes - 1; a >= 0; --a) {
        const std::size_t i = rem % static_cast<std::size_t>(quad);
        rem /= static_cast<std::size_t>(quad);
        x[static_cast<std::size_t>(a)] = p.domain.corner(a % d) + half * (rule.nodes[i] + 1.0);
        w *= half * rule.weights[i];
      }
      for (int b = 0; b < nb; ++b) {
        const auto& f = p.basis[static_cast<std::size_t>(b)];
        val(b) = f.value(x);
        f.gradient(x, g);
        for (int a = 0; a < axes; ++a) grad(a, b) = g[static_cast<std::size_t>(a)];
      }
      pb[c].noalias() += w * val * val.transpose();
      pa[c].noalias() += w * grad.transpose() * grad;
    }
  });
  p.gram_A = Eigen::MatrixXd::Zero(nb, nb);
  p.gram_B = Eigen::MatrixXd::Zero(nb, nb);
  for (std::size_t c = 0; c < chunks; ++c) {
    p.gram_A += pa[c];
    p.gram_B += pb[c];
  }
  return p;
}

RitzProblem assemble_grid(RitzProblem p, int points, int quad) {
  const int nb = static_cast<int>(p.basis.size());
  const int n = p.basis.front().n_particles;
  std::vector<GridFunction> samples;
  for (const auto& f : p.basis) {
    samples.push_back(GridFunction::sample(n, points, p.domain, GridKind::closed,
                                           [&](std::span<const double> x) { return f.value(x); }));
  }
  auto form = [&](const GridFunction& g) { return seminorm_HsN(g, p.order, p.domain).value; };
  p.gram_A = Eigen::MatrixXd::Zero(nb, nb);
  for (int a = 0; a < nb; ++a) {
    p.gram_A(a, a) = form(samples[static_cast<std::size_t>(a)]);
    for (int b = a + 1; b < nb; ++b) {
      GridFunction plus = samples[static_cast<std::size_t>(a)];
      GridFunction minus = samples[static_cast<std::size_t>(a)];
      for (std::size_t i = 0; i < plus.size(); ++i) {
        plus[i] += samples[static_cast<std::size_t>(b)][i];
        minus[i] -= samples[static_cast<std::size_t>(b)][i];
      }
      p.gram_A(a, b) = p.gram_A(b, a) = 0.25 * (form(plus) - form(minus));
    }
  }
  // L^2 pairings with the Gauss rule, which is far more accurate than the grid
  auto grads = p.basis;
  for (auto& f : grads) f.gradient = [](std::span<const double>, std::span<double> g) { std::fill(g.begin(), g.end(), 0.0); };
  p.gram_B = assemble_gradient(RitzProblem{grads, {}, {}, p.order, p.domain}, quad).gram_B;
  return p;
}

}  // namespace

RitzProblem assemble_ritz(std::vector<TrialFunction> basis, const FractionalOrder& order, const CubeDomain& q,
                          const RitzAssembly& opts) {
  if (basis.empty()) throw Error("assemble_ritz: empty basis");
  const int n = basis.front().n_particles;
  for (const auto& f : basis) {
    if (f.n_particles != n || f.dim != q.dim()) throw Error("assemble_ritz: basis functions disagree on N or d");
    if (!f.value) throw Error("assemble_ritz: trial function without a value");
  }
  const int quad = opts.quad_points > 0 ? opts.quad_points : default_quad_points(n * q.dim());
  RitzProblem p{std::move(basis), {}, {}, order, q};
  if (order.s() == 1.0) {
    for (const auto& f : p.basis) {
      if (!f.gradient) throw Error("assemble_ritz: first-order form needs gradients");
    }
    return assemble_gradient(std::move(p), quad);
  }
  return assemble_grid(std::move(p), opts.grid_points, quad);
}

RitzResult ritz_upper_bound(const RitzProblem& problem) {
  const auto& A = problem.gram_A;
  const auto& B = problem.gram_B;
  if (A.rows() == 0 || A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols()) {
    throw Error("ritz_upper_bound: Gram matrices missing or of mismatched size");
  }
  if (!A.allFinite() || !B.allFinite()) throw Error("ritz_upper_bound: non-finite Gram entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bs(B, Eigen::EigenvaluesOnly);
  if (bs.info() != Eigen::Success) throw Error("ritz_upper_bound: eigen-solve of the L2 Gram matrix failed");
  const double bmax = bs.eigenvalues().maxCoeff();
  const double bmin = bs.eigenvalues().minCoeff();
  if (!(bmax > 0.0) || bmin <= 1e-12 * bmax) {
    throw Error("ritz_upper_bound: L2 Gram matrix is not positive definite (rank-deficient basis)");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw Error("ritz_upper_bound: generalized eigen-solve failed");
  RitzResult r;
  r.value = std::max(0.0, es.eigenvalues()(0));
  r.coefficients = es.eigenvectors().col(0);
  return r;
}

GridEstimate grid_lower_estimate(int d, const FractionalOrder& order, int n_particles, const DiagonalSpec& diag,
                                 int points, double side) {
  if (d < 1 || n_particles < 1 || points < 2 || !(side > 0.0)) throw Error("grid_lower_estimate: bad arguments");
  diag.validate(n_particles);
  GridEstimate est;
  if (n_particles < diag.k) {
    est.method = "trivial";
    return est;
  }
  const int axes = d * n_particles;
  const std::size_t total = grid_size(axes, points);
  const SparseRows a1 = one_body_form(d, order, points, side);
  const double h = grid_spacing(side, points, GridKind::closed);
  const auto w1d = axis_weights(points, h, GridKind::closed);
  const std::size_t g1 = a1.rows.size();
  std::vector<double> m1(g1);
  {
    MultiIndex mi(d, points);
    std::size_t k = 0;
    do {
      double w = 1.0;
      for (int c = 0; c < d; ++c) w *= w1d[static_cast<std::size_t>(mi[static_cast<std::size_t>(c)])];
      m1[k++] = w;
    } while (mi.next());
  }

  // flat index = sum_j node_j * g1^{N-1-j}
  std::vector<std::size_t> pstride(static_cast<std::size_t>(n_particles), 1);
  for (int j = n_particles - 2; j >= 0; --j) pstride[static_cast<std::size_t>(j)] = pstride[static_cast<std::size_t>(j + 1)] * g1;

  const double radius = diag.epsilon_halo * side / points;
  const double r2max = radius * radius * (1.0 + 1e-12);
  std::vector<double> mass(total);
  std::vector<std::size_t> free_nodes;
  {
    std::vector<double> x(static_cast<std::size_t>(axes));
    MultiIndex mi(axes, points);
    std::size_t flat = 0;
    do {
      double m = 1.0;
      for (int a = 0; a < axes; ++a) {
        const int i = mi[static_cast<std::size_t>(a)];
        x[static_cast<std::size_t>(a)] = i * h;
        m *= w1d[static_cast<std::size_t>(i)];
      }
      mass[flat] = m;
      bool blocked = false;
      for (int j = 0; j < n_particles && !blocked; ++j) {
        int near = 0;
        for (int l = 0; l < n_particles; ++l) {
          double r2 = 0.0;
          for (int c = 0; c < d; ++c) {
            const double t = x[static_cast<std::size_t>(j * d + c)] - x[static_cast<std::size_t>(l * d + c)];
            r2 += t * t;
          }
          if (r2 <= r2max) ++near;
        }
        blocked = near >= diag.k;
      }
      if (!blocked) free_nodes.push_back(flat);
      ++flat;
    } while (mi.next());
  }
  if (free_nodes.empty()) throw Error("grid_lower_estimate: the diagonal halo removes every degree of freedom");
  est.dof = free_nodes.size();

  std::vector<double> inv_sqrt(free_nodes.size());
  for (std::size_t i = 0; i < free_nodes.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(mass[free_nodes[i]]);

  std::vector<double> u(total, 0.0), y(total, 0.0);
  const std::size_t n_other = total / g1;
  // y = sum_j (M x .. x A1 (slot j) x .. x M) u
  auto apply_full = [&]() {
    std::fill(y.begin(), y.end(), 0.0);
    for (int j = 0; j < n_particles; ++j) {
      const std::size_t sj = pstride[static_cast<std::size_t>(j)];
      const std::size_t chunks = std::min(n_other, kReductionChunks);
      detail::strided_run(chunks, [&](std::size_t c) {
        const std::size_t begin = n_other * c / chunks;
        const std::size_t end = n_other * (c + 1) / chunks;
        for (std::size_t o = begin; o < end; ++o) {
          // decode the other-particle configuration o into a base offset and weight
          std::size_t rem = o, base = 0;
          double w = 1.0;
          for (int l = n_particles - 1; l >= 0; --l) {
            if (l == j) continue;
            const std::size_t node = rem % g1;
            rem /= g1;
            base += node * pstride[static_cast<std::size_t>(l)];
            w *= m1[node];
          }
          bool any = false;
          for (std::size_t r = 0; r < g1 && !any; ++r) any = u[base + r * sj] != 0.0;
          if (!any) continue;
          for (std::size_t r = 0; r < g1; ++r) {
            double acc = 0.0;
            for (const auto& [col, val] : a1.rows[r]) acc += val * u[base + static_cast<std::size_t>(col) * sj];
            y[base + r * sj] += w * acc;
          }
        }
      });
    }
  };
  auto op = [&](std::span<const double> z, std::span<double> out) {
    for (std::size_t i = 0; i < free_nodes.size(); ++i) u[free_nodes[i]] = z[i] * inv_sqrt[i];
    apply_full();
    for (std::size_t i = 0; i < free_nodes.size(); ++i) out[i] = y[free_nodes[i]] * inv_sqrt[i];
  };

  const std::size_t nf = free_nodes.size();
  if (nf <= 2000) {
    Eigen::MatrixXd K(static_cast<Eigen::Index>(nf), static_cast<Eigen::Index>(nf));
    std::vector<double> e(nf, 0.0), col(nf);
    for (std::size_t i = 0; i < nf; ++i) {
      e[i] = 1.0;
      op(e, col);
      e[i] = 0.0;
      for (std::size_t r = 0; r < nf; ++r) K(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = col[r];
    }
    K = 0.5 * (K + K.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("grid_lower_estimate: dense eigen-solve failed");
    est.value = std::max(0.0, es.eigenvalues()(0));
    est.method = "dense";
    return est;
  }
  std::vector<double> start(nf);
  for (std::size_t i = 0; i < nf; ++i) start[i] = 1.0 / inv_sqrt[i];
  const LanczosResult lr = lanczos_smallest(nf, op, start);
  est.value = std::max(0.0, lr.value);
  est.converged = lr.converged;
  est.method = "lanczos";
  return est;
}

SuperadditivityCheck superadditivity_check(const CubeDomain& parent, int n_particles,
                                           const std::vector<CubeEstimate>& estimates, double tol) {
  if (n_particles < 0) throw Error("superadditivity_check: negative particle number");
  std::vector<CubeDomain> children;
  std::optional<double> lhs;
  for (const auto& e : estimates) {
    if (e.cube == parent) {
      if (e.n == n_particles) lhs = e.value;
      continue;
    }
    if (std::find(children.begin(), children.end(), e.cube) == children.end()) children.push_back(e.cube);
  }
  SuperadditivityCheck out;
  if (n_particles == 0) {
    out.ok = true;
    return out;
  }
  if (!lhs) throw Error("superadditivity_check: no estimate for the parent cube at N");
  if (children.empty()) throw Error("superadditivity_check: no child cubes");
  double vol = 0.0;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (!parent.contains(children[i], 1e-12)) throw Error("superadditivity_check: child cube outside the parent");
    for (std::size_t j = i + 1; j < children.size(); ++j) {
      if (children[i].interiors_overlap(children[j])) throw Error("superadditivity_check: child cubes overlap");
    }
    vol += children[i].volume();
  }
  if (std::abs(vol - parent.volume()) > 1e-9 * parent.volume()) {
    throw Error("superadditivity_check: child cubes do not tile the parent");
  }
  auto value = [&](const CubeDomain& c, int n) {
    if (n == 0) return 0.0;
    for (const auto& e : estimates) {
      if (e.cube == c && e.n == n) return e.value;
    }
    throw Error("superadditivity_check: missing child estimate for n = " + std::to_string(n));
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(static_cast<std::size_t>(n_particles + 1), inf);
  best[0] = 0.0;
  for (const auto& c : children) {
    std::vector<double> next(best.size(), inf);
    for (int t = 0; t <= n_particles; ++t) {
      for (int nj = 0; nj <= t; ++nj) {
        const double prev = best[static_cast<std::size_t>(t - nj)];
        if (prev == inf) continue;
        next[static_cast<std::size_t>(t)] = std::min(next[static_cast<std::size_t>(t)], prev + value(c, nj));
      }
    }
    best.swap(next);
  }
  out.lhs = *lhs;
  out.rhs = best[static_cast<std::size_t>(n_particles)];
  out.ok = out.lhs >= out.rhs - tol * std::max(1.0, std::abs(out.rhs));
  return out;
}

double local_uncertainty_from(double E, double A, double B) {
  if (B <= 0.0) return 0.0;
  if (E < 0.0 || A < 0.0) throw Error("local_uncertainty_constant: negative energy or density moment");
  return (-E + std::sqrt(E * E + 4.0 * A * B)) / (2.0 * B);
}

double local_uncertainty_constant(const GridFunction& psi, const CubeDomain& q_cube, const FractionalOrder& order) {
  const int d = psi.dim();
  const DensityGrid rho = density(psi);
  const NodeBox box = snap_to_nodes(psi.domain(), psi.points(), psi.kind(), q_cube);
  std::vector<std::vector<double>> w;
  for (int c = 0; c < d; ++c) {
    w.push_back(restricted_weights(psi.points(), psi.spacing(), psi.kind(), box.lo[static_cast<std::size_t>(c)],
                                   box.hi[static_cast<std::size_t>(c)]));
  }
  const double p = 1.0 + order.lt_exponent(d);
  double mass = 0.0, moment = 0.0;
  MultiIndex mi(d, psi.points());
  std::size_t flat = 0;
  do {
    double wt = 1.0;
    for (int c = 0; c < d; ++c) wt *= w[static_cast<std::size_t>(c)][static_cast<std::size_t>(mi[static_cast<std::size_t>(c)])];
    const double r = rho.values[flat];
    mass += wt * r;
    moment += wt * std::pow(r, p);
    ++flat;
  } while (mi.next());
  if (!(mass > 0.0)) return 0.0;
  const double E = local_energy(psi, order, q_cube);
  const double A = moment / std::pow(mass, order.lt_exponent(d));
  const double B = std::pow(q_cube.volume(), -order.lt_exponent(d)) * mass;
  return local_uncertainty_from(std::max(0.0, E), A, B);
}

nlohmann::json EnergyEstimate::to_json() const {
  return {{"upper", upper},  {"lower", lower},         {"N", n_particles},        {"k", k},
          {"d", d},          {"s", order.s()},         {"domain", domain.to_json()},
          {"converged", converged}, {"lower_certified", false}};
}

}  // namespace ltdiag
