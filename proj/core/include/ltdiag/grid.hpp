#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "ltdiag/types.hpp"

namespace ltdiag {

using cplx = std::complex<double>;

// Closed grids include both cube faces (spacing L/(G-1)); periodic grids
// sample the torus [a, a+L) with spacing L/G.
enum class GridKind { closed, periodic };
enum class ValueType { f64, c128 };
enum class QuadratureRule { trapezoid, simpson };

// Largest number of samples a grid may hold: dN * log2(G) <= 32.
inline constexpr double kDeskLimitLog2 = 32.0;

void check_desk_limit(int n_axes, int points);
std::size_t grid_size(int n_axes, int points);

double grid_spacing(double side, int points, GridKind kind);
std::vector<double> axis_weights(int points, double spacing, GridKind kind,
                                 QuadratureRule rule = QuadratureRule::trapezoid);

// Odometer over a row-major multi-index (axis 0 slowest).
class MultiIndex {
 public:
  MultiIndex(int n_axes, int points) : idx_(static_cast<std::size_t>(n_axes), 0), points_(points) {}
  const std::vector<int>& operator()() const { return idx_; }
  int operator[](std::size_t a) const { return idx_[a]; }
  // advances to the next index; returns false after the last one
  bool next() {
    for (std::size_t a = idx_.size(); a-- > 0;) {
      if (++idx_[a] < points_) return true;
      idx_[a] = 0;
    }
    return false;
  }

 private:
  std::vector<int> idx_;
  int points_;
};

// Samples of an N-body wave function on a uniform tensor grid over Q^N.
class GridFunction {
 public:
  GridFunction(int n_particles, int points, CubeDomain domain, GridKind kind = GridKind::closed,
               ValueType value_type = ValueType::f64);

  // f receives the dN coordinates of a grid node and returns double or cplx.
  template <typename F>
  static GridFunction sample(int n_particles, int points, const CubeDomain& domain, GridKind kind, F&& f);

  int n_particles() const { return n_particles_; }
  int points() const { return points_; }
  int dim() const { return domain_.dim(); }
  int n_axes() const { return n_particles_ * domain_.dim(); }
  const CubeDomain& domain() const { return domain_; }
  GridKind kind() const { return kind_; }
  ValueType value_type() const { return value_type_; }
  void set_value_type(ValueType t) { value_type_ = t; }

  double spacing() const { return grid_spacing(domain_.side(), points_, kind_); }
  // coordinate of node i along a single axis of a given spatial direction
  double node(int axis, int i) const;
  std::size_t size() const { return values_.size(); }
  std::size_t stride(int axis) const;

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  std::vector<double> axis_weights(QuadratureRule rule = QuadratureRule::trapezoid) const;
  double norm_squared(QuadratureRule rule = QuadratureRule::trapezoid) const;
  bool is_normalized(double tol = 1e-10) const;
  GridFunction normalized() const;
  GridFunction scaled_values(cplx factor) const;

  // Relabels particles: particle p of the result is particle perm[p] of *this.
  GridFunction permuted(std::span<const int> perm) const;

 private:
  int n_particles_;
  int points_;
  CubeDomain domain_;
  GridKind kind_;
  ValueType value_type_;
  std::vector<cplx> values_;
};

struct DensityGrid {
  CubeDomain domain;
  int points;
  GridKind kind = GridKind::closed;
  std::vector<double> values;
  double total_mass = 0.0;

  double spacing() const { return grid_spacing(domain.side(), points, kind); }
  // builds a density from node values and fills total_mass by quadrature
  static DensityGrid from_values(CubeDomain domain, int points, std::vector<double> values,
                                 GridKind kind = GridKind::closed);
};

// Tensor quadrature of node values over a cube grid (G inferred from size).
double quad_integral(std::span<const double> f, const CubeDomain& domain,
                     QuadratureRule rule = QuadratureRule::trapezoid, GridKind kind = GridKind::closed);

// One-body density: sum over particles of the marginal of |psi|^2.
DensityGrid density(const GridFunction& psi, double norm_tol = 1e-8);

template <typename F>
GridFunction GridFunction::sample(int n_particles, int points, const CubeDomain& domain, GridKind kind, F&& f) {
  GridFunction g(n_particles, points, domain, kind);
  const int axes = g.n_axes();
  std::vector<double> x(static_cast<std::size_t>(axes));
  MultiIndex mi(axes, points);
  std::size_t flat = 0;
  bool any_complex = false;
  do {
    for (int a = 0; a < axes; ++a) x[static_cast<std::size_t>(a)] = g.node(a, mi[static_cast<std::size_t>(a)]);
    using R = std::invoke_result_t<F&, std::span<const double>>;
    if constexpr (std::is_convertible_v<R, double> && !std::is_same_v<std::decay_t<R>, cplx>) {
      g.values_[flat] = cplx(static_cast<double>(f(std::span<const double>(x))), 0.0);
    } else {
      const cplx v = f(std::span<const double>(x));
      any_complex = any_complex || v.imag() != 0.0;
      g.values_[flat] = v;
    }
    ++flat;
  } while (mi.next());
  if (any_complex) g.value_type_ = ValueType::c128;
  return g;
}

}  // namespace ltdiag
