#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ltdiag {

// Raised for violated preconditions and failed numerical contracts.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sobolev order s = m + sigma with m integer and sigma in [0, 1).
class FractionalOrder {
 public:
  explicit FractionalOrder(double s);

  double s() const { return s_; }
  int m() const { return m_; }
  double sigma() const { return sigma_; }
  bool is_integer() const { return sigma_ == 0.0; }

  // exponent 2s/d appearing in the Lieb-Thirring power 1 + 2s/d
  double lt_exponent(int d) const { return 2.0 * s_ / d; }

 private:
  double s_;
  int m_;
  double sigma_;
};

// Axis-aligned cube [corner, corner + side]^d.
class CubeDomain {
 public:
  CubeDomain(int dim, std::vector<double> corner, double side);

  static CubeDomain unit(int dim);
  static CubeDomain with_corner(int dim, double corner, double side);

  int dim() const { return dim_; }
  const std::vector<double>& corner() const { return corner_; }
  double corner(int axis) const { return corner_[static_cast<std::size_t>(axis)]; }
  double side() const { return side_; }
  double upper(int axis) const { return corner(axis) + side_; }
  double volume() const;

  // Q^N viewed as a cube in dN dimensions.
  CubeDomain power(int n) const;
  CubeDomain scaled(double lambda) const;
  CubeDomain translated(std::span<const double> shift) const;

  bool contains(const CubeDomain& inner, double tol = 1e-12) const;
  bool contains_point(std::span<const double> x, double tol = 0.0) const;
  bool interiors_overlap(const CubeDomain& other, double tol = 1e-12) const;

  nlohmann::json to_json() const;
  static CubeDomain from_json(const nlohmann::json& j);

  friend bool operator==(const CubeDomain&, const CubeDomain&) = default;

 private:
  int dim_;
  std::vector<double> corner_;
  double side_;
};

// Vanishing constraint on the k-diagonal, with a grid halo measured in units of L/G.
struct DiagonalSpec {
  int k = 2;
  double epsilon_halo = 1.0;

  void validate(int n_particles) const;
};

}  // namespace ltdiag
