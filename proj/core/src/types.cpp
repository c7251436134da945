#include "ltdiag/types.hpp"

#include <algorithm>
#include <cmath>

namespace ltdiag {

FractionalOrder::FractionalOrder(double s) : s_(s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error("FractionalOrder: s must be positive and finite, got " + std::to_string(s));
  }
  const double floor_s = std::floor(s);
  // snap values within rounding of an integer so that s = 2 really is integer
  if (std::abs(s - std::round(s)) < 1e-12) {
    m_ = static_cast<int>(std::round(s));
    sigma_ = 0.0;
    s_ = static_cast<double>(m_);
  } else {
    m_ = static_cast<int>(floor_s);
    sigma_ = s - floor_s;
  }
}

CubeDomain::CubeDomain(int dim, std::vector<double> corner, double side)
    : dim_(dim), corner_(std::move(corner)), side_(side) {
  if (dim_ < 1) throw Error("CubeDomain: dimension must be positive");
  if (static_cast<int>(corner_.size()) != dim_) {
    throw Error("CubeDomain: corner has " + std::to_string(corner_.size()) +
                " coordinates, expected " + std::to_string(dim_));
  }
  if (!(side_ > 0.0) || !std::isfinite(side_)) {
    throw Error("CubeDomain: side must be positive, got " + std::to_string(side_));
  }
}

CubeDomain CubeDomain::unit(int dim) { return CubeDomain(dim, std::vector<double>(dim, 0.0), 1.0); }

CubeDomain CubeDomain::with_corner(int dim, double corner, double side) {
  return CubeDomain(dim, std::vector<double>(dim, corner), side);
}

double CubeDomain::volume() const { return std::pow(side_, dim_); }

CubeDomain CubeDomain::power(int n) const {
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(dim_ * n));
  for (int p = 0; p < n; ++p) c.insert(c.end(), corner_.begin(), corner_.end());
  return CubeDomain(dim_ * n, std::move(c), side_);
}

CubeDomain CubeDomain::scaled(double lambda) const {
  std::vector<double> c(corner_);
  for (auto& x : c) x *= lambda;
  return CubeDomain(dim_, std::move(c), side_ * lambda);
}

CubeDomain CubeDomain::translated(std::span<const double> shift) const {
  if (static_cast<int>(shift.size()) != dim_) throw Error("CubeDomain::translated: dimension mismatch");
  std::vector<double> c(corner_);
  for (int i = 0; i < dim_; ++i) c[static_cast<std::size_t>(i)] += shift[static_cast<std::size_t>(i)];
  return CubeDomain(dim_, std::move(c), side_);
}

bool CubeDomain::contains(const CubeDomain& inner, double tol) const {
  if (inner.dim_ != dim_) return false;
  const double slack = tol * std::max(1.0, side_);
  for (int i = 0; i < dim_; ++i) {
    if (inner.corner(i) < corner(i) - slack) return false;
    if (inner.upper(i) > upper(i) + slack) return false;
  }
  return true;
}

bool CubeDomain::contains_point(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    if (xi < corner(i) - tol || xi > upper(i) + tol) return false;
  }
  return true;
}

bool CubeDomain::interiors_overlap(const CubeDomain& other, double tol) const {
  if (other.dim_ != dim_) throw Error("CubeDomain::interiors_overlap: dimension mismatch");
  const double slack = tol * std::max(side_, other.side_);
  for (int i = 0; i < dim_; ++i) {
    const double lo = std::max(corner(i), other.corner(i));
    const double hi = std::min(upper(i), other.upper(i));
    if (hi - lo <= slack) return false;
  }
  return true;
}

nlohmann::json CubeDomain::to_json() const {
  return {{"dim", dim_}, {"corner", corner_}, {"side", side_}};
}

CubeDomain CubeDomain::from_json(const nlohmann::json& j) {
  return CubeDomain(j.at("dim").get<int>(), j.at("corner").get<std::vector<double>>(),
                    j.at("side").get<double>());
}

void DiagonalSpec::validate(int n_particles) const {
  if (k < 2) throw Error("DiagonalSpec: k must be at least 2");
  if (epsilon_halo < 0.0) throw Error("DiagonalSpec: halo must be non-negative");
  (void)n_particles;  // k > N is allowed and means "no constraint"
}

}  // namespace ltdiag
