#pragma once

#include <map>
#include <vector>

#include <json.hpp>

#include "ltdiag/types.hpp"

namespace ltdiag {

struct EnergyTable {
  int d = 1;
  FractionalOrder order{1.0};
  int q = 1;
  int base_max = 0;               // N0: entries below are inputs, from N0 on propagated
  std::vector<double> entries;    // entries[n] = L_n

  int n_max() const { return static_cast<int>(entries.size()) - 1; }
  nlohmann::json to_json() const;
  static EnergyTable from_json(const nlohmann::json& j);
};

// #{alpha in N_0^d : |alpha| < s}
int exclusion_q(int d, const FractionalOrder& order);

// L_N = 2^{2s} min over compositions of N into 2^d parts, each < N, of sum L_{n_j}.
EnergyTable propagate_lower_bounds(int d, const FractionalOrder& order, const std::vector<double>& base, int n_max);

// min_{n_j < N, sum = N} sum_j L_{n_j} over `parts` parts, computed by dynamic programming.
double min_composition(const std::vector<double>& table, int n, int parts);

// E_- = max_{n<q} (-E_n); every entry n >= q must exceed c (d/2s) 2^{d+2s} E_-.
bool check_refined_positivity(const EnergyTable& table, double c);

double local_exclusion_bound(double mass, double volume, double C, int q, int d, const FractionalOrder& order);

// eps = C2 b / C1, result eps / ((1 + eps) C1 Lambda^{2s/d})
double assemble_lt_constant(double C1, double C2, double b, double lambda, int d, const FractionalOrder& order);

// C = min over n >= q with n <= N of L_n / n^{1+2s/d}; the constant of the covariant bound.
double table_constant(const EnergyTable& table, int n_limit = -1);

// Smallest n0 such that L_n > 0 for all n0 <= n <= n_max (n_max + 1 when none).
int positivity_threshold(const EnergyTable& table);

}  // namespace ltdiag
