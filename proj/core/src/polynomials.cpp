#include "ltdiag/polynomials.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ltdiag/grid.hpp"
#include "ltdiag/parallel.hpp"

namespace ltdiag {

namespace {

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// image of a monomial under a coincidence map (particle -> reduced block)
Exponents collapse(const Exponents& e, int d, const std::vector<int>& block_of, int n_blocks) {
  Exponents r(static_cast<std::size_t>(n_blocks * d), 0);
  const int n = static_cast<int>(block_of.size());
  for (int p = 0; p < n; ++p) {
    for (int c = 0; c < d; ++c) {
      r[static_cast<std::size_t>(block_of[static_cast<std::size_t>(p)] * d + c)] += e[static_cast<std::size_t>(p * d + c)];
    }
  }
  return r;
}

}  // namespace

CoincidencePattern CoincidencePattern::single_block(int n_particles, const std::vector<int>& block) {
  CoincidencePattern p;
  p.blocks.push_back(block);
  for (int i = 0; i < n_particles; ++i) {
    if (std::find(block.begin(), block.end(), i) == block.end()) p.blocks.push_back({i});
  }
  return p;
}

void CoincidencePattern::validate(int n_particles, int k) const {
  std::vector<int> seen(static_cast<std::size_t>(n_particles), 0);
  bool big = false;
  for (const auto& b : blocks) {
    if (b.empty()) throw Error("CoincidencePattern: empty block");
    big = big || static_cast<int>(b.size()) >= k;
    for (int i : b) {
      if (i < 0 || i >= n_particles || seen[static_cast<std::size_t>(i)]++) {
        throw Error("CoincidencePattern: blocks must partition the particles");
      }
    }
  }
  for (int s : seen) {
    if (s != 1) throw Error("CoincidencePattern: blocks must cover every particle");
  }
  if (!big) throw Error("CoincidencePattern: need a block of size >= k");
}

SparsePolynomial substitute_coincidence(const SparsePolynomial& f, int d, const CoincidencePattern& pattern) {
  if (d < 1 || f.n_vars() % d != 0) throw Error("substitute_coincidence: variable count is not a multiple of d");
  const int n = f.n_vars() / d;
  pattern.validate(n, 1);
  auto blocks = pattern.blocks;
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::vector<int> block_of(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int p : blocks[b]) block_of[static_cast<std::size_t>(p)] = static_cast<int>(b);
  }
  const int nb = static_cast<int>(blocks.size());
  SparsePolynomial out(nb * d);
  for (const auto& [e, c] : f.terms()) out.add_term(collapse(e, d, block_of, nb), c);
  return out;
}

bool vanishes_on_k_diagonal(const SparsePolynomial& f, int d, int k) {
  const int n = f.n_vars() / d;
  if (k < 2) throw Error("vanishes_on_k_diagonal: k must be at least 2");
  if (k > n) throw Error("vanishes_on_k_diagonal: k exceeds the number of particles");
  bool all = true;
  for_each_subset(n, k, [&](const std::vector<int>& a) {
    if (all && !substitute_coincidence(f, d, CoincidencePattern::single_block(n, a)).is_zero()) all = false;
  });
  return all;
}

int vanishing_space_dimension(int d, int n_particles, int k, int S, std::size_t cap) {
  if (d < 1 || n_particles < 1 || S < 0 || k < 2) throw Error("vanishing_space_dimension: bad parameters");
  const int vars = d * n_particles;
  double count = std::pow(S + 1.0, vars);
  if (count > static_cast<double>(cap)) {
    throw Error("vanishing_space_dimension: (S+1)^{dN} = " + std::to_string(static_cast<long long>(count)) +
                " monomials exceeds the cap of " + std::to_string(cap));
  }
  const std::size_t unknowns = static_cast<std::size_t>(count);
  std::vector<Exponents> mono;
  mono.reserve(unknowns);
  {
    MultiIndex mi(vars, S + 1);
    do {
      Exponents e(static_cast<std::size_t>(vars));
      for (int v = 0; v < vars; ++v) e[static_cast<std::size_t>(v)] = static_cast<std::uint16_t>(mi[static_cast<std::size_t>(v)]);
      mono.push_back(std::move(e));
    } while (mi.next());
  }
  if (k > n_particles) return static_cast<int>(unknowns);

  // each constraint: the coefficients collapsing onto one reduced monomial sum to zero
  std::vector<std::vector<int>> rows;
  for_each_subset(n_particles, k, [&](const std::vector<int>& a) {
    std::vector<int> block_of(static_cast<std::size_t>(n_particles));
    int nb = 1;
    for (int p = 0; p < n_particles; ++p) {
      const bool in_a = std::find(a.begin(), a.end(), p) != a.end();
      block_of[static_cast<std::size_t>(p)] = in_a ? 0 : nb++;
    }
    std::map<Exponents, std::vector<int>> groups;
    for (std::size_t i = 0; i < unknowns; ++i) groups[collapse(mono[i], d, block_of, nb)].push_back(static_cast<int>(i));
    for (auto& [key, cols] : groups) rows.push_back(std::move(cols));
  });

  // exact sparse Gaussian elimination; pivots keyed by leading column
  std::map<int, std::map<int, Rational>> pivots;
  for (const auto& cols : rows) {
    std::map<int, Rational> r;
    for (int c : cols) r[c] = 1;
    while (!r.empty()) {
      const int lead = r.begin()->first;
      auto it = pivots.find(lead);
      if (it == pivots.end()) {
        const Rational inv = 1 / r.begin()->second;
        for (auto& [c, v] : r) v *= inv;
        pivots.emplace(lead, std::move(r));
        break;
      }
      const Rational factor = r.begin()->second;
      for (const auto& [c, v] : it->second) {
        auto [pos, inserted] = r.try_emplace(c, 0);
        pos->second -= factor * v;
        if (pos->second == 0) r.erase(pos);
      }
    }
  }
  return static_cast<int>(unknowns - pivots.size());
}

SparsePolynomial tensor_interpolate(std::span<const double> samples, const std::vector<std::vector<double>>& nodes) {
  const int axes = static_cast<int>(nodes.size());
  if (axes == 0) throw Error("tensor_interpolate: need at least one axis");
  std::size_t total = 1;
  for (const auto& ax : nodes) {
    if (ax.empty()) throw Error("tensor_interpolate: empty node list");
    std::set<double> uniq(ax.begin(), ax.end());
    if (uniq.size() != ax.size()) throw Error("tensor_interpolate: repeated interpolation nodes");
    total *= ax.size();
  }
  if (samples.size() != total) throw Error("tensor_interpolate: sample count does not match the tensor grid");

  std::vector<Rational> coef(total);
  for (std::size_t i = 0; i < total; ++i) coef[i] = Rational(samples[i]);

  std::size_t stride = total;
  for (int a = 0; a < axes; ++a) {
    const auto& ax = nodes[static_cast<std::size_t>(a)];
    const std::size_t m = ax.size();
    stride /= m;
    // inverse Vandermonde V[i][k] = x_i^k by exact Gauss-Jordan
    std::vector<std::vector<Rational>> V(m, std::vector<Rational>(2 * m));
    for (std::size_t i = 0; i < m; ++i) {
      const Rational x(ax[i]);
      Rational p = 1;
      for (std::size_t k = 0; k < m; ++k) {
        V[i][k] = p;
        p *= x;
      }
      V[i][m + i] = 1;
    }
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t piv = col;
      while (V[piv][col] == 0) ++piv;
      std::swap(V[piv], V[col]);
      const Rational inv = 1 / V[col][col];
      for (auto& v : V[col]) v *= inv;
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col || V[r][col] == 0) continue;
        const Rational f = V[r][col];
        for (std::size_t c = 0; c < 2 * m; ++c) V[r][c] -= f * V[col][c];
      }
    }
    const std::size_t block = stride * m;
    std::vector<Rational> tmp(m);
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        for (std::size_t k = 0; k < m; ++k) {
          Rational s = 0;
          for (std::size_t i = 0; i < m; ++i) s += V[k][m + i] * coef[base + inner + i * stride];
          tmp[k] = s;
        }
        for (std::size_t k = 0; k < m; ++k) coef[base + inner + k * stride] = tmp[k];
      }
    }
  }

  SparsePolynomial p(axes);
  std::vector<std::size_t> idx(static_cast<std::size_t>(axes), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    Exponents e(static_cast<std::size_t>(axes));
    for (int a = axes - 1; a >= 0; --a) {
      const std::size_t m = nodes[static_cast<std::size_t>(a)].size();
      e[static_cast<std::size_t>(a)] = static_cast<std::uint16_t>(rem % m);
      rem /= m;
    }
    p.add_term(e, coef[flat]);
  }
  return p;
}

SparsePolynomial vandermonde_polynomial(int n_particles) {
  if (n_particles < 1) throw Error("vandermonde_polynomial: need at least one particle");
  SparsePolynomial v = SparsePolynomial::constant(n_particles, 1);
  for (int i = 0; i < n_particles; ++i) {
    for (int j = i + 1; j < n_particles; ++j) {
      v = v * (SparsePolynomial::variable(n_particles, i) - SparsePolynomial::variable(n_particles, j));
    }
  }
  return v;
}

SparsePolynomial counterexample_polynomial(int d, int k) {
  if (d < 1 || k < 2) throw Error("counterexample_polynomial: need d >= 1 and k >= 2");
  const int vars = d * k;
  SparsePolynomial u = SparsePolynomial::constant(vars, 1);
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l < k; ++l) {
      u = u * (SparsePolynomial::variable(vars, j * d) - SparsePolynomial::variable(vars, l * d));
    }
  }
  u.declare_degree_bound(k - 1);
  return u;
}

bool local_form_vanishes(const SparsePolynomial& f, int d, int m) {
  const int n = f.n_vars() / d;
  for (int j = 0; j < n; ++j) {
    // all alpha with |alpha| = m over the d coordinates of particle j
    std::vector<int> alpha(static_cast<std::size_t>(d), 0);
    std::function<bool(int, int)> rec = [&](int c, int left) -> bool {
      if (c == d - 1) {
        alpha[static_cast<std::size_t>(c)] = left;
        SparsePolynomial g = f;
        for (int a = 0; a < d; ++a) {
          if (alpha[static_cast<std::size_t>(a)] > 0) g = g.derivative(j * d + a, alpha[static_cast<std::size_t>(a)]);
        }
        return g.is_zero();
      }
      for (int v = 0; v <= left; ++v) {
        alpha[static_cast<std::size_t>(c)] = v;
        if (!rec(c + 1, left - v)) return false;
      }
      return true;
    };
    if (!rec(0, m)) return false;
  }
  return true;
}

namespace {

// N = 2 pairs: the sum depends on x - y only through W, so it is regrouped by
// index offset with per-axis weighted moments of the polynomial |u(y + r, y)|^2.
double wsk_pair_offsets(const SparsePolynomial& u, int d, double s, const CubeDomain& q, int points) {
  const int vars = 2 * d;  // y_c at c, r_c at d + c
  SparsePolynomial shifted(vars);
  for (const auto& [e, c] : u.terms()) {
    SparsePolynomial term = SparsePolynomial::constant(vars, c);
    for (int a = 0; a < d; ++a) {
      const auto y = SparsePolynomial::variable(vars, a);
      const auto r = SparsePolynomial::variable(vars, d + a);
      for (int t = 0; t < e[static_cast<std::size_t>(a)]; ++t) term = term * (y + r);
      for (int t = 0; t < e[static_cast<std::size_t>(d + a)]; ++t) term = term * y;
    }
    shifted += term;
  }
  const SparsePolynomial p2 = shifted * shifted;
  const double h = q.side() / (points - 1);
  const auto w = axis_weights(points, h, GridKind::closed);
  const int span = 2 * points - 1;

  struct Term {
    double c;
    std::vector<int> py, pr;
  };
  std::vector<Term> terms;
  int pmax = 0;
  for (const auto& [e, c] : p2.terms()) {
    Term t{c.get_d(), {}, {}};
    for (int a = 0; a < d; ++a) {
      t.py.push_back(e[static_cast<std::size_t>(a)]);
      t.pr.push_back(e[static_cast<std::size_t>(d + a)]);
      pmax = std::max(pmax, static_cast<int>(e[static_cast<std::size_t>(a)]));
    }
    terms.push_back(std::move(t));
  }
  // moments[a][p][n + G - 1] = sum_j w_{j+n} w_j y_j^p
  std::vector<std::vector<std::vector<double>>> moments(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    auto& ma = moments[static_cast<std::size_t>(a)];
    ma.assign(static_cast<std::size_t>(pmax + 1), std::vector<double>(static_cast<std::size_t>(span), 0.0));
    for (int p = 0; p <= pmax; ++p) {
      for (int n = -(points - 1); n < points; ++n) {
        double acc = 0.0;
        for (int j = std::max(0, -n); j < points && j + n < points; ++j) {
          acc += w[static_cast<std::size_t>(j + n)] * w[static_cast<std::size_t>(j)] * std::pow(q.corner(a) + j * h, p);
        }
        ma[static_cast<std::size_t>(p)][static_cast<std::size_t>(n + points - 1)] = acc;
      }
    }
  }
  const std::size_t inner = static_cast<std::size_t>(std::pow(span, d - 1));
  return chunked_sum(static_cast<std::size_t>(span), [&](std::size_t b, std::size_t e) {
    double total = 0.0;
    std::vector<int> n(static_cast<std::size_t>(d));
    for (std::size_t first = b; first < e; ++first) {
      for (std::size_t rest = 0; rest < inner; ++rest) {
        n[0] = static_cast<int>(first) - (points - 1);
        std::size_t rem = rest;
        long r2 = static_cast<long>(n[0]) * n[0];
        for (int a = d - 1; a >= 1; --a) {
          n[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(span)) - (points - 1);
          rem /= static_cast<std::size_t>(span);
          r2 += static_cast<long>(n[static_cast<std::size_t>(a)]) * n[static_cast<std::size_t>(a)];
        }
        if (r2 == 0) continue;
        double acc = 0.0;
        for (const auto& t : terms) {
          double prod = t.c;
          for (int a = 0; a < d; ++a) {
            const int na = n[static_cast<std::size_t>(a)];
            prod *= std::pow(na * h, t.pr[static_cast<std::size_t>(a)]) *
                    moments[static_cast<std::size_t>(a)][static_cast<std::size_t>(t.py[static_cast<std::size_t>(a)])]
                           [static_cast<std::size_t>(na + points - 1)];
          }
          acc += prod;
        }
        total += acc * std::pow(h * h * static_cast<double>(r2), -s);
      }
    }
    return total;
  });
}

double wsk_direct(const SparsePolynomial& u, int d, double s, int k, const CubeDomain& q, int points) {
  const int n = u.n_vars() / d;
  const int axes = u.n_vars();
  const std::size_t size = grid_size(axes, points);
  const double h = q.side() / (points - 1);
  const auto w = axis_weights(points, h, GridKind::closed);
  std::vector<std::vector<int>> subsets;
  for_each_subset(n, k, [&](const std::vector<int>& a) { subsets.push_back(a); });
  return chunked_sum(size, [&](std::size_t b, std::size_t e) {
    std::vector<double> x(static_cast<std::size_t>(axes));
    double total = 0.0;
    for (std::size_t flat = b; flat < e; ++flat) {
      std::size_t rem = flat;
      double wt = 1.0;
      for (int a = axes - 1; a >= 0; --a) {
        const int i = static_cast<int>(rem % static_cast<std::size_t>(points));
        rem /= static_cast<std::size_t>(points);
        x[static_cast<std::size_t>(a)] = q.corner(a % d) + i * h;
        wt *= w[static_cast<std::size_t>(i)];
      }
      double W = 0.0;
      for (const auto& A : subsets) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < A.size(); ++i) {
          for (std::size_t j = i + 1; j < A.size(); ++j) {
            for (int c = 0; c < d; ++c) {
              const double diff = x[static_cast<std::size_t>(A[i] * d + c)] - x[static_cast<std::size_t>(A[j] * d + c)];
              r2 += diff * diff;
            }
          }
        }
        if (r2 > 0.0) W += std::pow(r2, -s);
      }
      if (W == 0.0) continue;
      const double v = u.evaluate(x);
      total += wt * W * v * v;
    }
    return total;
  });
}

}  // namespace

double wsk_quadrature(const SparsePolynomial& u, int d, const FractionalOrder& order, int k, const CubeDomain& q,
                      int points, bool force_direct) {
  if (d < 1 || u.n_vars() % d != 0) throw Error("wsk_integral: variable count is not a multiple of d");
  if (q.dim() != d) throw Error("wsk_integral: cube dimension does not match d");
  if (points < 2) throw Error("wsk_integral: need at least two points per axis");
  const int n = u.n_vars() / d;
  if (k > n) return 0.0;
  if (n == 2 && !force_direct) return wsk_pair_offsets(u, d, order.s(), q, points);
  return wsk_direct(u, d, order.s(), k, q, points);
}

WskResult wsk_integral(const SparsePolynomial& u, int d, const FractionalOrder& order, int k, const CubeDomain& q,
                       int points) {
  WskResult r;
  r.points = points;
  r.value = wsk_quadrature(u, d, order, k, q, points);
  r.refined_value = wsk_quadrature(u, d, order, k, q, 2 * points);
  const double denom = std::max(std::abs(r.refined_value), 1e-300);
  r.diverged = r.refined_value > 2.0 * r.value && r.value > 0.0;
  r.converged = !r.diverged && std::abs(r.refined_value - r.value) / denom < 0.05;
  return r;
}

}  // namespace ltdiag
