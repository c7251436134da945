#include "ltdiag/trial_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace ltdiag {

double neumann_mode(std::span<const int> n, const CubeDomain& q, std::span<const double> x) {
  double v = 1.0;
  for (std::size_t c = 0; c < n.size(); ++c) {
    v *= std::cos(std::numbers::pi * n[c] * (x[c] - q.corner(static_cast<int>(c))) / q.side());
  }
  return v;
}

void neumann_mode_gradient(std::span<const int> n, const CubeDomain& q, std::span<const double> x,
                           std::span<double> grad) {
  const std::size_t d = n.size();
  std::vector<double> cs(d), sn(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double k = std::numbers::pi * n[c] / q.side();
    const double t = k * (x[c] - q.corner(static_cast<int>(c)));
    cs[c] = std::cos(t);
    sn[c] = -k * std::sin(t);
  }
  for (std::size_t c = 0; c < d; ++c) {
    double g = sn[c];
    for (std::size_t e = 0; e < d; ++e) {
      if (e != c) g *= cs[e];
    }
    grad[c] = g;
  }
}

std::vector<std::vector<int>> neumann_modes(int d, int count) {
  if (d < 1 || count < 0) throw Error("neumann_modes: bad arguments");
  int r = 0;
  while (static_cast<long long>(std::pow(r + 1, d)) < count) ++r;
  // every mode with |n|^2 <= r^2 fits in the box [0, r]^d, which holds >= count modes
  std::vector<std::vector<int>> all;
  std::vector<int> n(static_cast<std::size_t>(d), 0);
  for (;;) {
    all.push_back(n);
    std::size_t c = 0;
    while (c < n.size() && ++n[c] > r) n[c++] = 0;
    if (c == n.size()) break;
  }
  auto norm2 = [](const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x * x;
    return s;
  };
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    const int na = norm2(a), nb = norm2(b);
    return na != nb ? na < nb : a < b;
  });
  all.resize(static_cast<std::size_t>(count));
  return all;
}

TrialFunction slater_determinant(const std::vector<std::vector<int>>& modes, const CubeDomain& q) {
  const int n = static_cast<int>(modes.size());
  const int d = q.dim();
  if (n < 1) throw Error("slater_determinant: need at least one mode");
  for (const auto& m : modes) {
    if (static_cast<int>(m.size()) != d) throw Error("slater_determinant: mode dimension mismatch");
  }
  TrialFunction f;
  f.n_particles = n;
  f.dim = d;
  f.label = "slater";
  auto matrix = [modes, q, n, d](std::span<const double> x) {
    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) m(j, i) = neumann_mode(modes[static_cast<std::size_t>(i)], q, x.subspan(static_cast<std::size_t>(j * d), static_cast<std::size_t>(d)));
    }
    return m;
  };
  f.value = [matrix](std::span<const double> x) { return matrix(x).determinant(); };
  f.gradient = [matrix, modes, q, n, d](std::span<const double> x, std::span<double> grad) {
    const Eigen::MatrixXd m = matrix(x);
    std::vector<double> g(static_cast<std::size_t>(d));
    for (int j = 0; j < n; ++j) {
      const auto xj = x.subspan(static_cast<std::size_t>(j * d), static_cast<std::size_t>(d));
      Eigen::MatrixXd rows(d, n);
      for (int i = 0; i < n; ++i) {
        neumann_mode_gradient(modes[static_cast<std::size_t>(i)], q, xj, g);
        for (int c = 0; c < d; ++c) rows(c, i) = g[static_cast<std::size_t>(c)];
      }
      // derivative in x_j only touches row j of the matrix
      for (int c = 0; c < d; ++c) {
        Eigen::MatrixXd mc = m;
        mc.row(j) = rows.row(c);
        grad[static_cast<std::size_t>(j * d + c)] = mc.determinant();
      }
    }
  };
  return f;
}

TrialFunction jastrow(int n_particles, const CubeDomain& q, double a, int p) {
  if (n_particles < 1 || !(a > 0.0) || p < 0) throw Error("jastrow: bad parameters");
  const int d = q.dim();
  std::vector<double> centre(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c) centre[static_cast<std::size_t>(c)] = q.corner(c) + 0.5 * q.side();
  TrialFunction f;
  f.n_particles = n_particles;
  f.dim = d;
  f.label = "jastrow_p" + std::to_string(p);
  const double inv_a2 = 1.0 / (a * a);
  f.value = [=](std::span<const double> x) {
    double r2 = 0.0;
    for (int j = 0; j < n_particles; ++j) {
      for (int c = 0; c < d; ++c) {
        const double t = x[static_cast<std::size_t>(j * d + c)] - centre[static_cast<std::size_t>(c)];
        r2 += t * t;
      }
    }
    double v = std::pow(1.0 + r2, p);
    for (int j = 0; j < n_particles; ++j) {
      for (int l = j + 1; l < n_particles; ++l) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) {
          const double t = x[static_cast<std::size_t>(j * d + c)] - x[static_cast<std::size_t>(l * d + c)];
          s += t * t;
        }
        v *= -std::expm1(-s * inv_a2);
      }
    }
    return v;
  };
  f.gradient = [=](std::span<const double> x, std::span<double> grad) {
    const std::size_t dn = static_cast<std::size_t>(n_particles * d);
    double r2 = 0.0;
    for (int j = 0; j < n_particles; ++j) {
      for (int c = 0; c < d; ++c) {
        const double t = x[static_cast<std::size_t>(j * d + c)] - centre[static_cast<std::size_t>(c)];
        r2 += t * t;
      }
    }
    const double phi = std::pow(1.0 + r2, p);
    const double dphi = p == 0 ? 0.0 : 2.0 * p * std::pow(1.0 + r2, p - 1);  // times (x - c)
    // product rule: grad(Phi W) = W grad Phi + Phi W sum_pairs grad w / w, computed
    // without dividing by w, which vanishes on the diagonal
    std::vector<double> w;
    std::vector<std::vector<double>> dw;  // gradient of w_pair wrt x_j (the first particle)
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < n_particles; ++j) {
      for (int l = j + 1; l < n_particles; ++l) {
        double s = 0.0;
        std::vector<double> diff(static_cast<std::size_t>(d));
        for (int c = 0; c < d; ++c) {
          diff[static_cast<std::size_t>(c)] = x[static_cast<std::size_t>(j * d + c)] - x[static_cast<std::size_t>(l * d + c)];
          s += diff[static_cast<std::size_t>(c)] * diff[static_cast<std::size_t>(c)];
        }
        const double e = std::exp(-s * inv_a2);
        w.push_back(-std::expm1(-s * inv_a2));
        for (auto& t : diff) t *= 2.0 * inv_a2 * e;
        dw.push_back(std::move(diff));
        pairs.emplace_back(j, l);
      }
    }
    double wall = 1.0;
    for (double t : w) wall *= t;
    for (std::size_t i = 0; i < dn; ++i) {
      const int c = static_cast<int>(i) % d;
      grad[i] = dphi * (x[i] - centre[static_cast<std::size_t>(c)]) * wall;
    }
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      double others = phi;
      for (std::size_t o = 0; o < pairs.size(); ++o) {
        if (o != pi) others *= w[o];
      }
      const auto [j, l] = pairs[pi];
      for (int c = 0; c < d; ++c) {
        const double g = others * dw[pi][static_cast<std::size_t>(c)];
        grad[static_cast<std::size_t>(j * d + c)] += g;
        grad[static_cast<std::size_t>(l * d + c)] -= g;
      }
    }
  };
  return f;
}

TrialFunction constant_function(int n_particles, int d) {
  TrialFunction f;
  f.n_particles = n_particles;
  f.dim = d;
  f.label = "constant";
  f.value = [](std::span<const double>) { return 1.0; };
  f.gradient = [](std::span<const double>, std::span<double> g) { std::fill(g.begin(), g.end(), 0.0); };
  return f;
}

std::vector<TrialFunction> trial_basis(const std::string& family, int n_particles, const CubeDomain& q,
                                       int basis_size, double jastrow_width) {
  if (basis_size < 1) throw Error("trial_basis: basis size must be positive");
  std::vector<TrialFunction> out;
  if (family == "constant") {
    out.push_back(constant_function(n_particles, q.dim()));
  } else if (family == "slater") {
    // determinant b uses the lowest N-1 modes plus mode N-1+b
    const auto modes = neumann_modes(q.dim(), n_particles - 1 + basis_size);
    for (int b = 0; b < basis_size; ++b) {
      std::vector<std::vector<int>> pick(modes.begin(), modes.begin() + (n_particles - 1));
      pick.push_back(modes[static_cast<std::size_t>(n_particles - 1 + b)]);
      out.push_back(slater_determinant(pick, q));
      out.back().label = "slater_" + std::to_string(b);
    }
  } else if (family == "jastrow") {
    for (int p = 0; p < basis_size; ++p) out.push_back(jastrow(n_particles, q, jastrow_width * q.side(), p));
  } else {
    throw Error("unknown trial family '" + family + "' (expected slater, jastrow or constant)");
  }
  return out;
}

}  // namespace ltdiag
