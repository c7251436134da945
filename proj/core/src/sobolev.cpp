#include "ltdiag/sobolev.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <Eigen/Dense>

#include "ltdiag/finite_difference.hpp"
#include "ltdiag/parallel.hpp"
#include "ltdiag/special_functions.hpp"

namespace ltdiag {

namespace {

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Index bookkeeping for the variables of one particle inside the full grid.
struct ParticleSlicer {
  std::vector<std::size_t> own;    // flat offsets of the G^d own nodes
  std::vector<std::size_t> other;  // flat offsets of the other-particle configurations

  ParticleSlicer(const GridFunction& psi, int j) {
    const int d = psi.dim();
    const int g = psi.points();
    own.resize(ipow(static_cast<std::size_t>(g), d));
    MultiIndex mi(d, g);
    std::size_t k = 0;
    do {
      std::size_t off = 0;
      for (int c = 0; c < d; ++c) off += static_cast<std::size_t>(mi[static_cast<std::size_t>(c)]) * psi.stride(j * d + c);
      own[k++] = off;
    } while (mi.next());

    std::vector<int> axes;
    for (int a = 0; a < psi.n_axes(); ++a) {
      if (a / d != j) axes.push_back(a);
    }
    other.resize(ipow(static_cast<std::size_t>(g), static_cast<int>(axes.size())));
    if (axes.empty()) {
      other[0] = 0;
      return;
    }
    MultiIndex mo(static_cast<int>(axes.size()), g);
    k = 0;
    do {
      std::size_t off = 0;
      for (std::size_t t = 0; t < axes.size(); ++t) off += static_cast<std::size_t>(mo[t]) * psi.stride(axes[t]);
      other[k++] = off;
    } while (mo.next());
  }
};

double lattice_zeta_term(int d, double sigma) {
  // Z_d(d + 2 sigma - 2) / d; the missing diagonal mass is -h^{2-2 sigma} * this * |grad g|^2
  return epstein_zeta(d, d + 2.0 * sigma - 2.0) / d;
}

// One-particle evaluator: the seminorm of a d-dimensional slice over a node box.
class SliceSeminorm {
 public:
  SliceSeminorm(int d, int points, double side, GridKind kind, const FractionalOrder& order, const NodeBox& box,
                const SeminormOptions& opts)
      : d_(d), g_(points), kind_(kind), order_(order), box_(box), opts_(opts) {
    h_ = grid_spacing(side, points, kind);
    terms_ = multi_indices(d, order.m());
    for (const auto& t : terms_) {
      std::vector<std::vector<Stencil>> per_axis;
      for (int c = 0; c < d; ++c) {
        per_axis.push_back(derivative_stencils(points, t.alpha[static_cast<std::size_t>(c)], h_, kind));
      }
      stencils_.push_back(std::move(per_axis));
    }
    for (int c = 0; c < d; ++c) {
      weights_.push_back(restricted_weights(points, h_, kind, box.lo[static_cast<std::size_t>(c)],
                                            box.hi[static_cast<std::size_t>(c)]));
    }
    box_nodes_.clear();
    MultiIndex mi(d, points);
    do {
      bool inside = true;
      double w = 1.0;
      std::size_t flat = 0;
      for (int c = 0; c < d; ++c) {
        const int i = mi[static_cast<std::size_t>(c)];
        inside = inside && i >= box.lo[static_cast<std::size_t>(c)] && i <= box.hi[static_cast<std::size_t>(c)];
        w *= weights_[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
        flat = flat * static_cast<std::size_t>(points) + static_cast<std::size_t>(i);
      }
      if (inside) {
        box_nodes_.push_back(flat);
        box_weights_.push_back(w);
        box_index_.push_back(mi());
      }
    } while (mi.next());

    if (!order.is_integer()) {
      const double sigma = order.sigma();
      cds_ = gagliardo_constant(d, sigma);
      if (kind == GridKind::periodic && d != 1) {
        throw Error("periodic Gagliardo seminorm is implemented for d = 1 only");
      }
      // kernel by absolute index offset, row-major over the box extents
      std::vector<int> ext(static_cast<std::size_t>(d));
      for (int c = 0; c < d; ++c) ext[static_cast<std::size_t>(c)] = box.count(c);
      ext_ = ext;
      std::size_t total = 1;
      for (int e : ext) total *= static_cast<std::size_t>(e);
      kernel_.assign(total, 0.0);
      std::vector<int> off(static_cast<std::size_t>(d), 0);
      for (std::size_t k = 0; k < total; ++k) {
        std::size_t rem = k;
        long r2 = 0;
        for (int c = d - 1; c >= 0; --c) {
          off[static_cast<std::size_t>(c)] = static_cast<int>(rem % static_cast<std::size_t>(ext[static_cast<std::size_t>(c)]));
          rem /= static_cast<std::size_t>(ext[static_cast<std::size_t>(c)]);
          r2 += static_cast<long>(off[static_cast<std::size_t>(c)]) * off[static_cast<std::size_t>(c)];
        }
        if (r2 == 0) continue;
        if (kind == GridKind::periodic) {
          const double x = static_cast<double>(off[0]) / g_;
          const double L = h_ * g_;
          kernel_[k] = std::pow(L, -1.0 - 2.0 * sigma) *
                       (hurwitz_zeta(1.0 + 2.0 * sigma, x) + hurwitz_zeta(1.0 + 2.0 * sigma, 1.0 - x));
        } else {
          kernel_[k] = std::pow(h_ * h_ * static_cast<double>(r2), -0.5 * (d + 2.0 * sigma));
        }
      }
      if (opts.diagonal_correction) {
        correction_ = -std::pow(h_, 2.0 - 2.0 * sigma) * lattice_zeta_term(d, sigma);
        for (int c = 0; c < d; ++c) first_.push_back(derivative_stencils(points, 1, h_, kind));
      }
    }
  }

  // slice holds G^d values in row-major order
  double operator()(std::vector<cplx>& slice, std::vector<cplx>& work) const {
    double total = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      const std::vector<cplx>* g = &slice;
      if (order_.m() > 0) {
        work = slice;
        std::vector<cplx> tmp(work.size());
        for (int c = 0; c < d_; ++c) {
          if (terms_[t].alpha[static_cast<std::size_t>(c)] == 0) continue;
          apply_stencils(work, tmp, g_, ipow(static_cast<std::size_t>(g_), d_ - 1 - c), stencils_[t][static_cast<std::size_t>(c)]);
          work.swap(tmp);
        }
        g = &work;
      }
      const double part = order_.is_integer() ? integer_part(*g) : gagliardo_part(*g);
      total += static_cast<double>(terms_[t].weight) * part;
    }
    return std::max(total, 0.0);
  }

 private:
  double integer_part(const std::vector<cplx>& g) const {
    double s = 0.0;
    for (std::size_t k = 0; k < box_nodes_.size(); ++k) s += box_weights_[k] * std::norm(g[box_nodes_[k]]);
    return s;
  }

  double gagliardo_part(const std::vector<cplx>& g) const {
    const std::size_t n = box_nodes_.size();
    double s = 0.0;
    if (d_ == 1) {
      for (std::size_t a = 0; a < n; ++a) {
        const cplx ga = g[box_nodes_[a]];
        double row = 0.0;
        for (std::size_t b = a + 1; b < n; ++b) {
          row += box_weights_[b] * std::norm(ga - g[box_nodes_[b]]) * kernel_[b - a];
        }
        s += box_weights_[a] * row;
      }
    } else {
      for (std::size_t a = 0; a < n; ++a) {
        const cplx ga = g[box_nodes_[a]];
        double row = 0.0;
        for (std::size_t b = a + 1; b < n; ++b) {
          std::size_t k = 0;
          for (int c = 0; c < d_; ++c) {
            const int off = std::abs(box_index_[a][static_cast<std::size_t>(c)] - box_index_[b][static_cast<std::size_t>(c)]);
            k = k * static_cast<std::size_t>(ext_[static_cast<std::size_t>(c)]) + static_cast<std::size_t>(off);
          }
          row += box_weights_[b] * std::norm(ga - g[box_nodes_[b]]) * kernel_[k];
        }
        s += box_weights_[a] * row;
      }
    }
    s *= 2.0;  // both orderings of each pair
    if (correction_ != 0.0) {
      std::vector<cplx> grad(g.size());
      double gsq = 0.0;
      std::vector<double> acc(n, 0.0);
      for (int c = 0; c < d_; ++c) {
        apply_stencils(g, grad, g_, ipow(static_cast<std::size_t>(g_), d_ - 1 - c), first_[static_cast<std::size_t>(c)]);
        for (std::size_t k = 0; k < n; ++k) acc[k] += std::norm(grad[box_nodes_[k]]);
      }
      for (std::size_t k = 0; k < n; ++k) gsq += box_weights_[k] * acc[k];
      s += correction_ * gsq;
    }
    return cds_ * s;
  }

  int d_;
  int g_;
  GridKind kind_;
  FractionalOrder order_;
  NodeBox box_;
  SeminormOptions opts_;
  double h_ = 0.0;
  std::vector<MultiIndexTerm> terms_;
  std::vector<std::vector<std::vector<Stencil>>> stencils_;
  std::vector<std::vector<Stencil>> first_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::size_t> box_nodes_;
  std::vector<double> box_weights_;
  std::vector<std::vector<int>> box_index_;
  std::vector<int> ext_;
  std::vector<double> kernel_;
  double cds_ = 1.0;
  double correction_ = 0.0;
};

// weights over the other-particle configurations for a given per-axis weight vector
std::vector<double> other_weights(int n_other_axes, int points, const std::vector<std::vector<double>>& per_axis) {
  std::vector<double> w(ipow(static_cast<std::size_t>(points), n_other_axes), 1.0);
  if (n_other_axes == 0) return w;
  MultiIndex mi(n_other_axes, points);
  std::size_t k = 0;
  do {
    double p = 1.0;
    for (int a = 0; a < n_other_axes; ++a) {
      p *= per_axis[static_cast<std::size_t>(a)][static_cast<std::size_t>(mi[static_cast<std::size_t>(a)])];
    }
    w[k++] = p;
  } while (mi.next());
  return w;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// |c_p|^2 for the normalized DFT together with a callback for the multiplier
template <typename Multiplier>
double fourier_form(const GridFunction& psi, Multiplier&& mult) {
  if (psi.kind() != GridKind::periodic) throw Error("Fourier seminorm needs a periodic (torus) grid");
  const int axes = psi.n_axes();
  const int g = psi.points();
  const std::size_t n = psi.size();
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (buf == nullptr) throw Error("fftw_malloc failed");
  std::vector<int> dims(static_cast<std::size_t>(axes), g);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft(axes, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) {
    buf[i][0] = psi[i].real();
    buf[i][1] = psi[i].imag();
  }
  fftw_execute(plan);
  const double L = psi.domain().side();
  const double norm = 1.0 / static_cast<double>(n);
  std::vector<double> p(static_cast<std::size_t>(axes));
  MultiIndex mi(axes, g);
  double total = 0.0;
  std::size_t k = 0;
  do {
    for (int a = 0; a < axes; ++a) {
      const int i = mi[static_cast<std::size_t>(a)];
      const int freq = i <= g / 2 ? i : i - g;
      p[static_cast<std::size_t>(a)] = 2.0 * std::numbers::pi * freq / L;
    }
    const double c2 = (buf[k][0] * buf[k][0] + buf[k][1] * buf[k][1]) * norm * norm;
    if (c2 != 0.0) total += mult(p) * c2;
    ++k;
  } while (mi.next());
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return std::pow(L, axes) * total;
}

}  // namespace

nlohmann::json SeminormReport::to_json() const {
  return {{"value", value}, {"per_particle_terms", per_particle_terms}, {"s", order.s()}, {"domain", domain.to_json()}};
}

NodeBox snap_to_nodes(const CubeDomain& ambient, int points, GridKind kind, const CubeDomain& omega) {
  if (omega.dim() != ambient.dim()) throw Error("sub-cube dimension does not match the grid");
  if (!ambient.contains(omega, 1e-9)) throw Error("sub-cube is not inside the ambient cube");
  const double h = grid_spacing(ambient.side(), points, kind);
  NodeBox box;
  for (int c = 0; c < ambient.dim(); ++c) {
    if (kind == GridKind::periodic) {
      if (std::abs(omega.side() - ambient.side()) > 1e-9 * ambient.side()) {
        throw Error("periodic grids support only the full torus as the localization cube");
      }
      box.lo.push_back(0);
      box.hi.push_back(points - 1);
      continue;
    }
    const double tol = 1e-9 * h;
    const int lo = static_cast<int>(std::ceil((omega.corner(c) - ambient.corner(c) - tol) / h));
    const int hi = static_cast<int>(std::floor((omega.upper(c) - ambient.corner(c) + tol) / h));
    box.lo.push_back(std::clamp(lo, 0, points - 1));
    box.hi.push_back(std::clamp(hi, 0, points - 1));
    if (box.hi.back() - box.lo.back() < 1) throw Error("sub-cube contains fewer than two grid nodes per axis");
  }
  return box;
}

std::vector<double> restricted_weights(int points, double spacing, GridKind kind, int lo, int hi) {
  std::vector<double> w(static_cast<std::size_t>(points), 0.0);
  if (kind == GridKind::periodic && lo == 0 && hi == points - 1) {
    std::fill(w.begin(), w.end(), spacing);
    return w;
  }
  for (int i = lo; i <= hi; ++i) w[static_cast<std::size_t>(i)] = spacing;
  w[static_cast<std::size_t>(lo)] *= 0.5;
  w[static_cast<std::size_t>(hi)] *= 0.5;
  return w;
}

std::vector<MultiIndexTerm> multi_indices(int d, int m) {
  std::vector<MultiIndexTerm> out;
  std::vector<int> alpha(static_cast<std::size_t>(d), 0);
  auto fact = [](int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  // enumerate compositions of m into d non-negative parts in lexicographic order
  std::function<void(int, int)> rec = [&](int c, int left) {
    if (c == d - 1) {
      alpha[static_cast<std::size_t>(c)] = left;
      long long w = fact(m);
      for (int a : alpha) w /= fact(a);
      out.push_back({alpha, w});
      return;
    }
    for (int v = left; v >= 0; --v) {
      alpha[static_cast<std::size_t>(c)] = v;
      rec(c + 1, left - v);
    }
  };
  rec(0, m);
  return out;
}

std::vector<double> seminorm_per_variable(const GridFunction& psi, int j, const FractionalOrder& order,
                                          const CubeDomain& omega, const SeminormOptions& opts) {
  if (j < 0 || j >= psi.n_particles()) throw Error("particle index out of range");
  const NodeBox box = snap_to_nodes(psi.domain(), psi.points(), psi.kind(), omega);
  const SliceSeminorm eval(psi.dim(), psi.points(), psi.domain().side(), psi.kind(), order, box, opts);
  const ParticleSlicer slicer(psi, j);
  std::vector<double> out(slicer.other.size(), 0.0);
  const std::size_t n_own = slicer.own.size();
  const std::size_t chunks = std::min(out.size(), kReductionChunks);
  detail::strided_run(chunks, [&](std::size_t c) {
    std::vector<cplx> slice(n_own);
    std::vector<cplx> work;
    const std::size_t begin = out.size() * c / chunks;
    const std::size_t end = out.size() * (c + 1) / chunks;
    for (std::size_t o = begin; o < end; ++o) {
      const std::size_t base = slicer.other[o];
      bool zero = true;
      for (std::size_t k = 0; k < n_own; ++k) {
        slice[k] = psi[base + slicer.own[k]];
        zero = zero && slice[k] == cplx(0.0, 0.0);
      }
      out[o] = zero ? 0.0 : eval(slice, work);
    }
  });
  return out;
}

namespace {

SeminormReport integrate_terms(const GridFunction& psi, const FractionalOrder& order, const CubeDomain& omega,
                               const CubeDomain& outer, const SeminormOptions& opts) {
  const int d = psi.dim();
  const int n = psi.n_particles();
  const NodeBox outer_box = snap_to_nodes(psi.domain(), psi.points(), psi.kind(), outer);
  std::vector<std::vector<double>> axis_w;
  for (int a = 0; a < d * (n - 1); ++a) {
    const int c = a % d;
    axis_w.push_back(restricted_weights(psi.points(), psi.spacing(), psi.kind(), outer_box.lo[static_cast<std::size_t>(c)],
                                        outer_box.hi[static_cast<std::size_t>(c)]));
  }
  const auto w = other_weights(d * (n - 1), psi.points(), axis_w);
  SeminormReport rep;
  rep.order = order;
  rep.domain = omega;
  for (int j = 0; j < n; ++j) {
    const auto vals = seminorm_per_variable(psi, j, order, omega, opts);
    const double term = chunked_sum(vals.size(), [&](std::size_t b, std::size_t e) {
      double s = 0.0;
      for (std::size_t k = b; k < e; ++k) s += w[k] * vals[k];
      return s;
    });
    rep.per_particle_terms.push_back(term);
  }
  for (double t : rep.per_particle_terms) rep.value += t;
  return rep;
}

}  // namespace

SeminormReport seminorm_HsN(const GridFunction& psi, const FractionalOrder& order, const CubeDomain& omega,
                            const SeminormOptions& opts) {
  return integrate_terms(psi, order, omega, omega, opts);
}

double local_energy(const GridFunction& psi, const FractionalOrder& order, const CubeDomain& q_cube,
                    const SeminormOptions& opts) {
  if (!psi.domain().contains(q_cube, 1e-9)) throw Error("local_energy: cube Q is not inside the ambient domain");
  return integrate_terms(psi, order, q_cube, psi.domain(), opts).value;
}

double global_seminorm_fourier(const GridFunction& psi, const FractionalOrder& order) {
  const double s = order.s();
  return fourier_form(psi, [s](const std::vector<double>& p) {
    double p2 = 0.0;
    for (double v : p) p2 += v * v;
    return p2 == 0.0 ? 0.0 : std::pow(p2, s);
  });
}

double per_particle_seminorm_fourier(const GridFunction& psi, const FractionalOrder& order) {
  const double s = order.s();
  const int d = psi.dim();
  return fourier_form(psi, [s, d](const std::vector<double>& p) {
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); j += static_cast<std::size_t>(d)) {
      double p2 = 0.0;
      for (int c = 0; c < d; ++c) p2 += p[j + static_cast<std::size_t>(c)] * p[j + static_cast<std::size_t>(c)];
      if (p2 != 0.0) total += std::pow(p2, s);
    }
    return total;
  });
}

NormEquivalence norm_equivalence_check(const GridFunction& psi, const FractionalOrder& order, double tol) {
  NormEquivalence r;
  const double e = std::pow(static_cast<double>(psi.n_particles()), (1.0 - order.s()) / 2.0);
  r.c_lo = std::min(1.0, e);
  r.c_hi = std::max(1.0, e);
  const double full = global_seminorm_fourier(psi, order);
  const double per = per_particle_seminorm_fourier(psi, order);
  const double scale = std::max(1.0, std::abs(per));
  if (full <= 1e-14 * scale) return r;
  r.ratio = std::sqrt(per / full);
  r.ok = *r.ratio >= r.c_lo * (1.0 - tol) && *r.ratio <= r.c_hi * (1.0 + tol);
  return r;
}

double SparseRows::apply_row(int i, std::span<const double> x) const {
  double s = 0.0;
  for (const auto& [c, v] : rows[static_cast<std::size_t>(i)]) s += v * x[static_cast<std::size_t>(c)];
  return s;
}

SparseRows one_body_form(int d, const FractionalOrder& order, int points, double side, const SeminormOptions& opts) {
  const double h = side / (points - 1);
  const std::size_t n = ipow(static_cast<std::size_t>(points), d);
  if (n > 20000) throw Error("one_body_form: one-particle grid too large");
  const int m = order.m();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  auto binom = [](int a, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (a - k + i) / i;
    return r;
  };
  for (const auto& term : multi_indices(d, m)) {
    // forward difference operator D^alpha / h^m onto the shrunken grid
    std::vector<int> ext(static_cast<std::size_t>(d));
    std::size_t rows = 1;
    for (int c = 0; c < d; ++c) {
      ext[static_cast<std::size_t>(c)] = points - term.alpha[static_cast<std::size_t>(c)];
      rows *= static_cast<std::size_t>(ext[static_cast<std::size_t>(c)]);
    }
    if (rows == 0) throw Error("one_body_form: grid too coarse for the derivative order");
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
    std::vector<int> ci(static_cast<std::size_t>(d), 0);
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t rem = r;
      for (int c = d - 1; c >= 0; --c) {
        ci[static_cast<std::size_t>(c)] = static_cast<int>(rem % static_cast<std::size_t>(ext[static_cast<std::size_t>(c)]));
        rem /= static_cast<std::size_t>(ext[static_cast<std::size_t>(c)]);
      }
      // tensor product of 1-D forward differences
      std::vector<int> k(static_cast<std::size_t>(d), 0);
      for (;;) {
        double coef = 1.0;
        std::size_t col = 0;
        for (int c = 0; c < d; ++c) {
          const int a = term.alpha[static_cast<std::size_t>(c)];
          const int kc = k[static_cast<std::size_t>(c)];
          coef *= ((a - kc) % 2 == 0 ? 1.0 : -1.0) * binom(a, kc);
          col = col * static_cast<std::size_t>(points) + static_cast<std::size_t>(ci[static_cast<std::size_t>(c)] + kc);
        }
        D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) += coef * std::pow(h, -m);
        int c = d - 1;
        while (c >= 0 && ++k[static_cast<std::size_t>(c)] > term.alpha[static_cast<std::size_t>(c)]) k[static_cast<std::size_t>(c--)] = 0;
        if (c < 0) break;
      }
    }

    Eigen::MatrixXd M;
    if (order.is_integer()) {
      M = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows)) * std::pow(h, d);
    } else {
      const double sigma = order.sigma();
      const double cds = gagliardo_constant(d, sigma);
      std::vector<double> w(rows, 1.0);
      std::vector<std::vector<int>> idx(rows, std::vector<int>(static_cast<std::size_t>(d)));
      for (std::size_t r = 0; r < rows; ++r) {
        std::size_t rem = r;
        for (int c = d - 1; c >= 0; --c) {
          const int e = ext[static_cast<std::size_t>(c)];
          const int i = static_cast<int>(rem % static_cast<std::size_t>(e));
          rem /= static_cast<std::size_t>(e);
          idx[r][static_cast<std::size_t>(c)] = i;
          w[r] *= h * ((i == 0 || i == e - 1) ? 0.5 : 1.0);
        }
      }
      M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
      for (std::size_t a = 0; a < rows; ++a) {
        for (std::size_t b = a + 1; b < rows; ++b) {
          long r2 = 0;
          for (int c = 0; c < d; ++c) {
            const long dd = idx[a][static_cast<std::size_t>(c)] - idx[b][static_cast<std::size_t>(c)];
            r2 += dd * dd;
          }
          const double W = 2.0 * cds * w[a] * w[b] * std::pow(h * h * static_cast<double>(r2), -0.5 * (d + 2.0 * sigma));
          const auto ia = static_cast<Eigen::Index>(a);
          const auto ib = static_cast<Eigen::Index>(b);
          M(ia, ia) += W;
          M(ib, ib) += W;
          M(ia, ib) -= W;
          M(ib, ia) -= W;
        }
      }
      if (opts.diagonal_correction) {
        // edge form of |grad g|^2 times the lattice zeta coefficient (non-negative)
        const double corr = -cds * std::pow(h, 2.0 - 2.0 * sigma) * lattice_zeta_term(d, sigma);
        for (std::size_t a = 0; a < rows; ++a) {
          for (int c = 0; c < d; ++c) {
            if (idx[a][static_cast<std::size_t>(c)] + 1 >= ext[static_cast<std::size_t>(c)]) continue;
            std::size_t stride = 1;
            for (int e = c + 1; e < d; ++e) stride *= static_cast<std::size_t>(ext[static_cast<std::size_t>(e)]);
            const std::size_t b = a + stride;
            const double W = corr * std::pow(h, d - 2);
            const auto ia = static_cast<Eigen::Index>(a);
            const auto ib = static_cast<Eigen::Index>(b);
            M(ia, ia) += W;
            M(ib, ib) += W;
            M(ia, ib) -= W;
            M(ib, ia) -= W;
          }
        }
      }
    }
    A += static_cast<double>(term.weight) * (D.transpose() * M * D);
  }

  SparseRows out;
  out.n = static_cast<int>(n);
  out.rows.resize(n);
  const double tiny = 1e-14 * A.cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double v = 0.5 * (A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) +
                              A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)));
      if (std::abs(v) > tiny) out.rows[i].emplace_back(static_cast<int>(k), v);
    }
  }
  return out;
}

}  // namespace ltdiag
