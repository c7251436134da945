#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace ltdiag {

using Rational = mpq_class;
using Exponents = std::vector<std::uint16_t>;

// Exact multivariate polynomial over Q. Variable index = particle * d + coordinate.
class SparsePolynomial {
 public:
  explicit SparsePolynomial(int n_vars = 0) : n_vars_(n_vars) {}

  static SparsePolynomial constant(int n_vars, const Rational& c);
  static SparsePolynomial variable(int n_vars, int index);

  int n_vars() const { return n_vars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, const Rational& c);
  int degree_in(int var) const;
  int max_var_degree() const;

  std::optional<int> degree_bound;  // declared per-variable bound S
  void declare_degree_bound(int s);

  SparsePolynomial operator-() const;
  SparsePolynomial& operator+=(const SparsePolynomial& o);
  SparsePolynomial& operator-=(const SparsePolynomial& o);
  SparsePolynomial& operator*=(const Rational& c);
  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
  friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) { return a -= b; }
  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b);
  friend SparsePolynomial operator*(SparsePolynomial a, const Rational& c) { return a *= c; }
  friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

  double evaluate(std::span<const double> x) const;
  Rational evaluate(std::span<const Rational> x) const;
  SparsePolynomial derivative(int var, int times = 1) const;

  nlohmann::json to_json() const;
  static SparsePolynomial from_json(const nlohmann::json& j);
  std::string to_string() const;

 private:
  void check_vars(const SparsePolynomial& o) const;

  int n_vars_;
  std::map<Exponents, Rational> terms_;
};

}  // namespace ltdiag
