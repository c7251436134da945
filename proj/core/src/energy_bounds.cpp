#include "ltdiag/energy_bounds.hpp"

#include <cmath>
#include <limits>

namespace ltdiag {

int exclusion_q(int d, const FractionalOrder& order) {
  if (d < 1) throw Error("exclusion_q: dimension must be positive");
  // number of alpha with |alpha| = k is C(k+d-1, d-1)
  int q = 0;
  for (int k = 0; k < order.s(); ++k) {
    long long c = 1;
    for (int i = 1; i <= d - 1; ++i) c = c * (k + i) / i;
    q += static_cast<int>(c);
  }
  return q;
}

double min_composition(const std::vector<double>& table, int n, int parts) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (n < 0 || n >= static_cast<int>(table.size()) + 1) throw Error("min_composition: n outside the table");
  // best[r] = min over compositions of r into the parts used so far, each part < n
  std::vector<double> best(static_cast<std::size_t>(n + 1), inf);
  best[0] = 0.0;
  for (int p = 0; p < parts; ++p) {
    std::vector<double> next(static_cast<std::size_t>(n + 1), inf);
    for (int r = 0; r <= n; ++r) {
      if (best[static_cast<std::size_t>(r)] == inf) continue;
      for (int k = 0; r + k <= n && k < n; ++k) {
        const double v = best[static_cast<std::size_t>(r)] + table[static_cast<std::size_t>(k)];
        if (v < next[static_cast<std::size_t>(r + k)]) next[static_cast<std::size_t>(r + k)] = v;
      }
    }
    best = std::move(next);
  }
  return best[static_cast<std::size_t>(n)];
}

EnergyTable propagate_lower_bounds(int d, const FractionalOrder& order, const std::vector<double>& base, int n_max) {
  if (base.empty()) throw Error("propagate_lower_bounds: empty base table");
  if (base[0] != 0.0) throw Error("propagate_lower_bounds: L_0 must be 0");
  for (double v : base) {
    if (!(v >= 0.0)) throw Error("propagate_lower_bounds: base entries must be non-negative");
  }
  EnergyTable t;
  t.d = d;
  t.order = order;
  t.q = exclusion_q(d, order);
  t.base_max = static_cast<int>(base.size());
  bool positive = false;
  for (std::size_t n = 0; n < base.size(); ++n) positive = positive || base[n] > 0.0;
  if (t.q >= t.base_max || !positive) {
    throw Error("propagate_lower_bounds: q = " + std::to_string(t.q) + " >= N0 = " + std::to_string(t.base_max) +
                " or no positive base entry");
  }
  t.entries = base;
  const int parts = 1 << d;
  const double factor = std::pow(2.0, 2.0 * order.s());
  for (int n = t.base_max; n <= n_max; ++n) {
    t.entries.push_back(factor * min_composition(t.entries, n, parts));
  }
  return t;
}

bool check_refined_positivity(const EnergyTable& table, double c) {
  double e_minus = 0.0;
  for (int n = 0; n < table.q && n <= table.n_max(); ++n) e_minus = std::max(e_minus, -table.entries[static_cast<std::size_t>(n)]);
  const double s = table.order.s();
  const double threshold = c * (table.d / (2.0 * s)) * std::pow(2.0, table.d + 2.0 * s) * e_minus;
  for (int n = table.q; n <= table.n_max(); ++n) {
    if (!(table.entries[static_cast<std::size_t>(n)] > threshold)) return false;
  }
  return true;
}

double local_exclusion_bound(double mass, double volume, double C, int q, int d, const FractionalOrder& order) {
  if (!(volume > 0.0)) throw Error("local_exclusion_bound: volume must be positive");
  if (mass < 0.0 || C < 0.0) throw Error("local_exclusion_bound: mass and C must be non-negative");
  return C * std::pow(volume, -order.lt_exponent(d)) * std::max(mass - q, 0.0);
}

double assemble_lt_constant(double C1, double C2, double b, double lambda, int d, const FractionalOrder& order) {
  if (!(C1 > 0.0) || !(C2 > 0.0) || !(b > 0.0) || !(lambda > 0.0)) {
    throw Error("assemble_lt_constant: C1, C2, b and Lambda must be positive");
  }
  const double eps = C2 * b / C1;
  return eps / ((1.0 + eps) * C1 * std::pow(lambda, order.lt_exponent(d)));
}

double table_constant(const EnergyTable& table, int n_limit) {
  const int last = n_limit < 0 ? table.n_max() : std::min(n_limit, table.n_max());
  const double p = 1.0 + table.order.lt_exponent(table.d);
  double c = std::numeric_limits<double>::infinity();
  for (int n = std::max(table.q, 1); n <= last; ++n) {
    c = std::min(c, table.entries[static_cast<std::size_t>(n)] / std::pow(n, p));
  }
  return std::isfinite(c) ? std::max(c, 0.0) : 0.0;
}

int positivity_threshold(const EnergyTable& table) {
  int n0 = table.n_max() + 1;
  for (int n = table.n_max(); n >= 1; --n) {
    if (table.entries[static_cast<std::size_t>(n)] > 0.0) {
      n0 = n;
    } else {
      break;
    }
  }
  return n0;
}

nlohmann::json EnergyTable::to_json() const {
  return {{"d", d}, {"s", order.s()}, {"q", q}, {"N0", base_max}, {"entries", entries}};
}

EnergyTable EnergyTable::from_json(const nlohmann::json& j) {
  try {
    EnergyTable t;
    t.d = j.at("d").get<int>();
    t.order = FractionalOrder(j.at("s").get<double>());
    t.q = j.value("q", exclusion_q(t.d, t.order));
    t.entries = j.at("entries").get<std::vector<double>>();
    t.base_max = j.value("N0", static_cast<int>(t.entries.size()));
    if (t.entries.empty()) throw Error("energy table has no entries");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed energy table: ") + e.what());
  }
}

}  // namespace ltdiag
