#include "ltdiag/finite_difference.hpp"

#include <cmath>

namespace ltdiag {

std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int order) {
  const int n = static_cast<int>(nodes.size());
  if (order < 0 || n <= order) throw Error("fornberg_weights: need more nodes than the derivative order");
  // c[i][k]: weight of node i for derivative k
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(order + 1), 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      auto& ci = c[static_cast<std::size_t>(i)];
      auto& cj = c[static_cast<std::size_t>(j)];
      if (j == i - 1) {
        const auto& prev = c[static_cast<std::size_t>(i - 1)];
        for (int k = mn; k >= 1; --k) {
          ci[static_cast<std::size_t>(k)] = c1 * (k * prev[static_cast<std::size_t>(k - 1)] - c5 * prev[static_cast<std::size_t>(k)]) / c2;
        }
        ci[0] = -c1 * c5 * prev[0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        cj[static_cast<std::size_t>(k)] = (c4 * cj[static_cast<std::size_t>(k)] - k * cj[static_cast<std::size_t>(k - 1)]) / c3;
      }
      cj[0] = c4 * cj[0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(order)];
  return w;
}

std::vector<Stencil> derivative_stencils(int points, int order, double spacing, GridKind kind) {
  if (order < 0) throw Error("derivative order must be non-negative");
  std::vector<Stencil> out(static_cast<std::size_t>(points));
  if (order == 0) {
    for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = {i, {1.0}};
    return out;
  }
  const int radius = (order + 1) / 2;
  const int central = 2 * radius + 1;
  const int one_sided = order + 2;
  if (points < std::max(central, one_sided)) {
    throw Error("grid with " + std::to_string(points) + " points per axis is too coarse for derivatives of order " +
                std::to_string(order));
  }
  const double scale = std::pow(spacing, -order);
  auto make = [&](int start, int width, int i) {
    std::vector<double> x(static_cast<std::size_t>(width));
    for (int k = 0; k < width; ++k) x[static_cast<std::size_t>(k)] = start + k;
    auto w = fornberg_weights(i, x, order);
    for (auto& v : w) v *= scale;
    return Stencil{start, std::move(w)};
  };
  for (int i = 0; i < points; ++i) {
    if (kind == GridKind::periodic || (i - radius >= 0 && i + radius < points)) {
      out[static_cast<std::size_t>(i)] = make(i - radius, central, i);
    } else {
      const int start = std::clamp(i - one_sided / 2, 0, points - one_sided);
      out[static_cast<std::size_t>(i)] = make(start, one_sided, i);
    }
  }
  return out;
}

void apply_stencils(std::span<const cplx> in, std::span<cplx> out, int points, std::size_t stride,
                    const std::vector<Stencil>& stencils) {
  const std::size_t g = static_cast<std::size_t>(points);
  const std::size_t block = stride * g;
  for (std::size_t base = 0; base < in.size(); base += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t off = base + inner;
      for (int i = 0; i < points; ++i) {
        const Stencil& st = stencils[static_cast<std::size_t>(i)];
        cplx acc(0.0, 0.0);
        for (std::size_t k = 0; k < st.weights.size(); ++k) {
          int idx = st.start + static_cast<int>(k);
          idx = ((idx % points) + points) % points;
          acc += st.weights[k] * in[off + static_cast<std::size_t>(idx) * stride];
        }
        out[off + static_cast<std::size_t>(i) * stride] = acc;
      }
    }
  }
}

}  // namespace ltdiag
