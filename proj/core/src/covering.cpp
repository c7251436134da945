#include "ltdiag/covering.hpp"

#include <cmath>
#include <limits>

namespace ltdiag {

double covering_b(int d, double q, double lambda, double alpha) {
  if (!(lambda > 0.0) || !(alpha > 0.0)) throw Error("covering_b: Lambda and alpha must be positive");
  const double two_d = std::pow(2.0, d);
  if (q < 0.0 || q >= lambda / two_d) {
    throw Error("covering_b: q must satisfy 0 <= q < Lambda 2^{-d}");
  }
  const double p = std::pow(2.0, d * alpha);
  return (1.0 - two_d * q / lambda) * (p - 1.0) / (p + two_d - 2.0);
}

namespace {

// d-dimensional summed-area table over the (G-1)^d trapezoid cells
class CellTable {
 public:
  CellTable(const DensityGrid& f) : d_(f.domain.dim()), n_(f.points - 1) {
    const double h = f.spacing();
    const double vol = std::pow(h, d_);
    const double corners = std::pow(2.0, d_);
    std::size_t cells = 1;
    for (int c = 0; c < d_; ++c) cells *= static_cast<std::size_t>(n_);
    mass_.assign(cells, 0.0);
    MultiIndex mi(d_, n_);
    std::size_t k = 0;
    do {
      double sum = 0.0;
      for (int corner = 0; corner < (1 << d_); ++corner) {
        std::size_t node = 0;
        for (int c = 0; c < d_; ++c) {
          node = node * static_cast<std::size_t>(f.points) +
                 static_cast<std::size_t>(mi[static_cast<std::size_t>(c)] + ((corner >> c) & 1));
        }
        sum += f.values[node];
      }
      mass_[k++] = vol * sum / corners;
    } while (mi.next());
    // prefix sums with a zero border: index i+1 along each axis
    const int m = n_ + 1;
    std::size_t total = 1;
    for (int c = 0; c < d_; ++c) total *= static_cast<std::size_t>(m);
    sat_.assign(total, 0.0);
    MultiIndex cell(d_, n_);
    k = 0;
    do {
      std::size_t idx = 0;
      for (int c = 0; c < d_; ++c) idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(cell[static_cast<std::size_t>(c)] + 1);
      sat_[idx] = mass_[k++];
    } while (cell.next());
    std::size_t stride = 1;
    for (int c = d_ - 1; c >= 0; --c) {
      for (std::size_t i = 0; i < total; ++i) {
        if ((i / stride) % static_cast<std::size_t>(m) != 0) sat_[i] += sat_[i - stride];
      }
      stride *= static_cast<std::size_t>(m);
    }
  }

  int cells_per_axis() const { return n_; }
  double cell_mass(std::size_t k) const { return mass_[k]; }

  // mass of cells with index in [lo_c, hi_c] (inclusive) on every axis
  double box(const std::vector<int>& lo, const std::vector<int>& hi) const {
    for (int c = 0; c < d_; ++c) {
      if (hi[static_cast<std::size_t>(c)] < lo[static_cast<std::size_t>(c)]) return 0.0;
    }
    const int m = n_ + 1;
    double total = 0.0;
    for (int corner = 0; corner < (1 << d_); ++corner) {
      std::size_t idx = 0;
      int sign = 1;
      for (int c = 0; c < d_; ++c) {
        const bool upper = (corner >> c) & 1;
        const int v = upper ? hi[static_cast<std::size_t>(c)] + 1 : lo[static_cast<std::size_t>(c)];
        if (!upper) sign = -sign;
        idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(v);
      }
      total += sign * sat_[idx];
    }
    return total;
  }

 private:
  int d_;
  int n_;
  std::vector<double> mass_;
  std::vector<double> sat_;
};

struct Node {
  std::vector<double> lo;  // in cell units
  double side;             // in cell units
  int depth;
  double parent_mass;
};

}  // namespace

CoveringResult build_covering(const DensityGrid& f, double lambda, const CoveringOptions& opts) {
  if (f.kind != GridKind::closed) throw Error("build_covering: density must live on a closed grid");
  if (!(lambda > 0.0)) throw Error("build_covering: Lambda must be positive");
  const int d = f.domain.dim();
  const CellTable table(f);
  const double total = table.box(std::vector<int>(static_cast<std::size_t>(d), 0),
                                 std::vector<int>(static_cast<std::size_t>(d), table.cells_per_axis() - 1));
  if (total < lambda * (1.0 - 1e-12)) {
    throw Error("build_covering: total mass " + std::to_string(total) + " is below Lambda = " +
                std::to_string(lambda) + "; use the small-N branch");
  }

  // bounding cube of the support cells
  const int n = table.cells_per_axis();
  std::vector<int> smin(static_cast<std::size_t>(d), n);
  std::vector<int> smax(static_cast<std::size_t>(d), -1);
  {
    MultiIndex mi(d, n);
    std::size_t k = 0;
    do {
      if (table.cell_mass(k++) > 0.0) {
        for (int c = 0; c < d; ++c) {
          smin[static_cast<std::size_t>(c)] = std::min(smin[static_cast<std::size_t>(c)], mi[static_cast<std::size_t>(c)]);
          smax[static_cast<std::size_t>(c)] = std::max(smax[static_cast<std::size_t>(c)], mi[static_cast<std::size_t>(c)]);
        }
      }
    } while (mi.next());
  }
  int side = 1;
  for (int c = 0; c < d; ++c) side = std::max(side, smax[static_cast<std::size_t>(c)] - smin[static_cast<std::size_t>(c)] + 1);
  std::vector<double> root_lo(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c) root_lo[static_cast<std::size_t>(c)] = std::min(smin[static_cast<std::size_t>(c)], n - side);

  const double h = f.spacing();
  auto to_cube = [&](const Node& nd) {
    std::vector<double> corner(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) corner[static_cast<std::size_t>(c)] = f.domain.corner(c) + nd.lo[static_cast<std::size_t>(c)] * h;
    return CubeDomain(d, std::move(corner), nd.side * h);
  };
  auto mass_of = [&](const Node& nd) {
    std::vector<int> lo(static_cast<std::size_t>(d));
    std::vector<int> hi(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) {
      // cells i with lo < i + 1/2 <= lo + side
      const double a = nd.lo[static_cast<std::size_t>(c)];
      lo[static_cast<std::size_t>(c)] = static_cast<int>(std::floor(a - 0.5)) + 1;
      hi[static_cast<std::size_t>(c)] = static_cast<int>(std::floor(a + nd.side - 0.5));
      lo[static_cast<std::size_t>(c)] = std::max(lo[static_cast<std::size_t>(c)], 0);
      hi[static_cast<std::size_t>(c)] = std::min(hi[static_cast<std::size_t>(c)], n - 1);
    }
    return table.box(lo, hi);
  };

  CoveringResult out;
  out.d = d;
  out.lambda = lambda;
  out.alpha = opts.alpha;
  out.q = opts.q;
  const double two_d = std::pow(2.0, d);
  out.b = (opts.q >= 0.0 && opts.q < lambda / two_d) ? covering_b(d, opts.q, lambda, opts.alpha) : 0.0;
  Node root{root_lo, static_cast<double>(side), 0, std::numeric_limits<double>::quiet_NaN()};
  out.root = to_cube(root);

  // depth-first, children in lexicographic order of their corners
  std::vector<Node> stack{root};
  while (!stack.empty()) {
    Node nd = stack.back();
    stack.pop_back();
    const double m = mass_of(nd);
    if (m > lambda * (1.0 + 1e-12)) {
      if (nd.depth >= opts.max_depth) {
        throw Error("build_covering: depth cap reached; a single grid cell carries mass above Lambda");
      }
      const double half = 0.5 * nd.side;
      for (int child = (1 << d) - 1; child >= 0; --child) {
        Node c{nd.lo, half, nd.depth + 1, m};
        for (int a = 0; a < d; ++a) {
          if ((child >> (d - 1 - a)) & 1) c.lo[static_cast<std::size_t>(a)] += half;
        }
        stack.push_back(std::move(c));
      }
      continue;
    }
    out.cubes.push_back(to_cube(nd));
    out.masses.push_back(m);
    out.depths.push_back(nd.depth);
    out.parent_masses.push_back(nd.parent_mass);
  }
  return out;
}

CoveringCheck verify_covering_inequality(const CoveringResult& cov) {
  if (!(cov.alpha > 0.0)) throw Error("verify_covering_inequality: alpha must be positive");
  const double b = covering_b(cov.d, cov.q, cov.lambda, cov.alpha);
  CoveringCheck r;
  for (std::size_t i = 0; i < cov.cubes.size(); ++i) {
    const double w = std::pow(cov.cubes[i].volume(), -cov.alpha);
    const double m = cov.masses[i];
    r.lhs += w * (std::max(m - cov.q, 0.0) - b * m);
    r.scale += w * std::abs(m);
  }
  r.ok = r.lhs >= -1e-9 * std::max(r.scale, 1.0);
  return r;
}

bool covering_is_partition(const CoveringResult& cov, double tol) {
  double vol = 0.0;
  for (std::size_t i = 0; i < cov.cubes.size(); ++i) {
    if (!cov.root.contains(cov.cubes[i], tol)) return false;
    vol += cov.cubes[i].volume();
    for (std::size_t j = i + 1; j < cov.cubes.size(); ++j) {
      if (cov.cubes[i].interiors_overlap(cov.cubes[j], tol)) return false;
    }
  }
  return std::abs(vol - cov.root.volume()) <= 1e-9 * cov.root.volume();
}

nlohmann::json CoveringResult::to_json(std::optional<double> lhs) const {
  nlohmann::json cubes_j = nlohmann::json::array();
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    cubes_j.push_back({{"corner", cubes[i].corner()}, {"side", cubes[i].side()}, {"mass", masses[i]}, {"depth", depths[i]}});
  }
  nlohmann::json j{{"dim", d}, {"root", root.to_json()}, {"cubes", cubes_j}, {"masses", masses},
                   {"lambda", lambda}, {"alpha", alpha}, {"q", q}, {"b", b}};
  if (lhs) j["lhs"] = *lhs;
  return j;
}

}  // namespace ltdiag
