#include "ltdiag/grid.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ltdiag {

void check_desk_limit(int n_axes, int points) {
  if (n_axes < 1 || points < 1) throw Error("grid: axes and points must be positive");
  const double bits = n_axes * std::log2(static_cast<double>(points));
  if (bits > kDeskLimitLog2 + 1e-12) {
    std::ostringstream os;
    os << "grid exceeds desk-scale limit: dN*log2(G) = " << bits << " > " << kDeskLimitLog2
       << " (dN=" << n_axes << ", G=" << points << ")";
    throw Error(os.str());
  }
}

std::size_t grid_size(int n_axes, int points) {
  check_desk_limit(n_axes, points);
  std::size_t n = 1;
  for (int a = 0; a < n_axes; ++a) n *= static_cast<std::size_t>(points);
  return n;
}

double grid_spacing(double side, int points, GridKind kind) {
  if (kind == GridKind::periodic) return side / points;
  if (points < 2) throw Error("closed grid needs at least two points per axis");
  return side / (points - 1);
}

std::vector<double> axis_weights(int points, double spacing, GridKind kind, QuadratureRule rule) {
  std::vector<double> w(static_cast<std::size_t>(points), spacing);
  if (kind == GridKind::periodic) return w;  // rectangle rule is spectrally exact on the torus
  if (rule == QuadratureRule::trapezoid) {
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
  }
  if (points < 3 || points % 2 == 0) {
    throw Error("composite Simpson needs an odd number of points >= 3, got " + std::to_string(points));
  }
  for (int i = 0; i < points; ++i) {
    const double c = (i == 0 || i == points - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[static_cast<std::size_t>(i)] = spacing * c / 3.0;
  }
  return w;
}

GridFunction::GridFunction(int n_particles, int points, CubeDomain domain, GridKind kind,
                           ValueType value_type)
    : n_particles_(n_particles), points_(points), domain_(std::move(domain)), kind_(kind),
      value_type_(value_type) {
  if (n_particles_ < 1) throw Error("GridFunction: need at least one particle");
  if (points_ < 2) throw Error("GridFunction: need at least two points per axis");
  values_.assign(grid_size(n_axes(), points_), cplx(0.0, 0.0));
}

double GridFunction::node(int axis, int i) const {
  return domain_.corner(axis % domain_.dim()) + i * spacing();
}

std::size_t GridFunction::stride(int axis) const {
  std::size_t s = 1;
  for (int a = axis + 1; a < n_axes(); ++a) s *= static_cast<std::size_t>(points_);
  return s;
}

std::vector<double> GridFunction::axis_weights(QuadratureRule rule) const {
  return ltdiag::axis_weights(points_, spacing(), kind_, rule);
}

double GridFunction::norm_squared(QuadratureRule rule) const {
  const auto w = axis_weights(rule);
  const int axes = n_axes();
  double total = 0.0;
  MultiIndex mi(axes, points_);
  std::size_t flat = 0;
  do {
    double wt = 1.0;
    for (int a = 0; a < axes; ++a) wt *= w[static_cast<std::size_t>(mi[static_cast<std::size_t>(a)])];
    total += wt * std::norm(values_[flat]);
    ++flat;
  } while (mi.next());
  return total;
}

bool GridFunction::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

GridFunction GridFunction::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw Error("GridFunction::normalized: zero function cannot be normalized");
  return scaled_values(cplx(1.0 / std::sqrt(n2), 0.0));
}

GridFunction GridFunction::scaled_values(cplx factor) const {
  GridFunction out(*this);
  for (auto& v : out.values_) v *= factor;
  return out;
}

GridFunction GridFunction::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != n_particles_) throw Error("permuted: permutation size mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || p >= n_particles_ || seen[static_cast<std::size_t>(p)]) {
      throw Error("permuted: not a permutation");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
  GridFunction out(*this);
  const int d = dim();
  const int axes = n_axes();
  MultiIndex mi(axes, points_);
  std::vector<std::size_t> strides(static_cast<std::size_t>(axes));
  for (int a = 0; a < axes; ++a) strides[static_cast<std::size_t>(a)] = stride(a);
  std::size_t flat = 0;
  do {
    // out(x_0..x_{N-1}) = in(y) with y_{perm[p]} = x_p
    std::size_t src = 0;
    for (int p = 0; p < n_particles_; ++p) {
      for (int c = 0; c < d; ++c) {
        const int dst_axis = p * d + c;
        const int src_axis = perm[static_cast<std::size_t>(p)] * d + c;
        src += static_cast<std::size_t>(mi[static_cast<std::size_t>(dst_axis)]) *
               strides[static_cast<std::size_t>(src_axis)];
      }
    }
    out.values_[flat] = values_[src];
    ++flat;
  } while (mi.next());
  return out;
}

DensityGrid DensityGrid::from_values(CubeDomain domain, int points, std::vector<double> values, GridKind kind) {
  for (double v : values) {
    if (!(v >= 0.0)) throw Error("DensityGrid: values must be non-negative");
  }
  DensityGrid g{std::move(domain), points, kind, std::move(values), 0.0};
  if (g.values.size() != grid_size(g.domain.dim(), points)) throw Error("DensityGrid: size mismatch");
  g.total_mass = quad_integral(g.values, g.domain, QuadratureRule::trapezoid, kind);
  return g;
}

double quad_integral(std::span<const double> f, const CubeDomain& domain, QuadratureRule rule, GridKind kind) {
  const int axes = domain.dim();
  const double root = std::pow(static_cast<double>(f.size()), 1.0 / axes);
  const int points = static_cast<int>(std::llround(root));
  if (points < 2 || grid_size(axes, points) != f.size()) {
    throw Error("quad_integral: array of size " + std::to_string(f.size()) +
                " is not a tensor grid over a " + std::to_string(axes) + "-dimensional cube");
  }
  const auto w = axis_weights(points, grid_spacing(domain.side(), points, kind), kind, rule);
  double total = 0.0;
  MultiIndex mi(axes, points);
  std::size_t flat = 0;
  do {
    double wt = 1.0;
    for (int a = 0; a < axes; ++a) wt *= w[static_cast<std::size_t>(mi[static_cast<std::size_t>(a)])];
    total += wt * f[flat];
    ++flat;
  } while (mi.next());
  return total;
}

DensityGrid density(const GridFunction& psi, double norm_tol) {
  const double n2 = psi.norm_squared();
  if (std::abs(n2 - 1.0) > norm_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "density: wave function is not normalized (L2 norm^2 = " << n2 << ")";
    throw Error(os.str());
  }
  const int d = psi.dim();
  const int n = psi.n_particles();
  const int g = psi.points();
  const int axes = psi.n_axes();
  const auto w = psi.axis_weights();
  std::vector<double> rho(grid_size(d, g), 0.0);

  MultiIndex mi(axes, g);
  std::size_t flat = 0;
  do {
    const double p = std::norm(psi[flat]);
    if (p != 0.0) {
      double w_all = 1.0;
      for (int a = 0; a < axes; ++a) w_all *= w[static_cast<std::size_t>(mi[static_cast<std::size_t>(a)])];
      for (int j = 0; j < n; ++j) {
        std::size_t node = 0;
        double w_own = 1.0;
        for (int c = 0; c < d; ++c) {
          const int i = mi[static_cast<std::size_t>(j * d + c)];
          node = node * static_cast<std::size_t>(g) + static_cast<std::size_t>(i);
          w_own *= w[static_cast<std::size_t>(i)];
        }
        rho[node] += p * (w_all / w_own);
      }
    }
    ++flat;
  } while (mi.next());

  return DensityGrid::from_values(psi.domain(), g, std::move(rho), psi.kind());
}

}  // namespace ltdiag
