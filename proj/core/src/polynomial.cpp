#include "ltdiag/polynomial.hpp"

#include <cmath>
#include <sstream>

#include "ltdiag/types.hpp"

namespace ltdiag {

SparsePolynomial SparsePolynomial::constant(int n_vars, const Rational& c) {
  SparsePolynomial p(n_vars);
  p.add_term(Exponents(static_cast<std::size_t>(n_vars), 0), c);
  return p;
}

SparsePolynomial SparsePolynomial::variable(int n_vars, int index) {
  if (index < 0 || index >= n_vars) throw Error("SparsePolynomial::variable: index out of range");
  Exponents e(static_cast<std::size_t>(n_vars), 0);
  e[static_cast<std::size_t>(index)] = 1;
  SparsePolynomial p(n_vars);
  p.add_term(e, 1);
  return p;
}

void SparsePolynomial::add_term(const Exponents& e, const Rational& c) {
  if (static_cast<int>(e.size()) != n_vars_) throw Error("SparsePolynomial: exponent length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int SparsePolynomial::degree_in(int var) const {
  int deg = 0;
  for (const auto& [e, c] : terms_) deg = std::max(deg, static_cast<int>(e[static_cast<std::size_t>(var)]));
  return deg;
}

int SparsePolynomial::max_var_degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    for (auto v : e) deg = std::max(deg, static_cast<int>(v));
  }
  return deg;
}

void SparsePolynomial::declare_degree_bound(int s) {
  if (max_var_degree() > s) throw Error("SparsePolynomial: per-variable degree exceeds the declared bound");
  degree_bound = s;
}

void SparsePolynomial::check_vars(const SparsePolynomial& o) const {
  if (o.n_vars_ != n_vars_) throw Error("SparsePolynomial: variable count mismatch");
}

SparsePolynomial SparsePolynomial::operator-() const {
  SparsePolynomial p(*this);
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

SparsePolynomial& SparsePolynomial::operator+=(const SparsePolynomial& o) {
  check_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  degree_bound.reset();
  return *this;
}

SparsePolynomial& SparsePolynomial::operator-=(const SparsePolynomial& o) {
  check_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  degree_bound.reset();
  return *this;
}

SparsePolynomial& SparsePolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
  a.check_vars(b);
  SparsePolynomial p(a.n_vars_);
  Exponents e(static_cast<std::size_t>(a.n_vars_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      p.add_term(e, ca * cb);
    }
  }
  return p;
}

double SparsePolynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_vars_) throw Error("SparsePolynomial::evaluate: wrong number of values");
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) m *= std::pow(x[i], e[i]);
    }
    total += m;
  }
  return total;
}

Rational SparsePolynomial::evaluate(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != n_vars_) throw Error("SparsePolynomial::evaluate: wrong number of values");
  Rational total = 0;
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) m *= x[i];
    }
    total += m;
  }
  return total;
}

SparsePolynomial SparsePolynomial::derivative(int var, int times) const {
  if (var < 0 || var >= n_vars_) throw Error("SparsePolynomial::derivative: variable out of range");
  SparsePolynomial p(n_vars_);
  for (const auto& [e, c] : terms_) {
    const int k = e[static_cast<std::size_t>(var)];
    if (k < times) continue;
    Rational f = c;
    for (int i = 0; i < times; ++i) f *= k - i;
    Exponents ne = e;
    ne[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(k - times);
    p.add_term(ne, f);
  }
  return p;
}

nlohmann::json SparsePolynomial::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : terms_) {
    arr.push_back({{"exponents", e}, {"numerator", c.get_num().get_str()}, {"denominator", c.get_den().get_str()}});
  }
  return arr;
}

SparsePolynomial SparsePolynomial::from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error("polynomial JSON must be a list of terms");
  int n_vars = -1;
  SparsePolynomial p(0);
  for (const auto& t : j) {
    const auto e = t.at("exponents").get<Exponents>();
    if (n_vars < 0) {
      n_vars = static_cast<int>(e.size());
      p = SparsePolynomial(n_vars);
    }
    auto as_str = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>()); };
    Rational c(mpz_class(as_str(t.at("numerator"))), mpz_class(as_str(t.at("denominator"))));
    c.canonicalize();
    p.add_term(e, c);
  }
  return p;
}

std::string SparsePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const Rational a = abs(c);
    bool has_var = false;
    std::ostringstream mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (has_var) mono << "*";
      mono << "x" << i;
      if (e[i] > 1) mono << "^" << e[i];
      has_var = true;
    }
    if (!has_var) os << a.get_str();
    else if (a != 1) os << a.get_str() << "*" << mono.str();
    else os << mono.str();
  }
  return os.str();
}

}  // namespace ltdiag
