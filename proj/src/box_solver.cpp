#include "torusrw/box_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "torusrw/errors.hpp"

namespace torusrw {

namespace {

// Conjugate gradients for the SPD operator `apply` (masked I - P). Entries outside
// the free set are zero in b, in every iterate and in every search direction.
template <class Apply>
SolveStats conjugate_gradient(const Apply& apply, const std::vector<double>& b, std::vector<double>& x,
                              const SolverOptions& opts, std::size_t default_max_iter) {
  const std::size_t n = b.size();
  const std::size_t max_iter = opts.max_iterations ? opts.max_iterations : default_max_iter;
  x.assign(n, 0.0);
  std::vector<double> r = b, p = b, ap(n, 0.0);

  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
  };

  SolveStats stats;
  double rr = 0.0;
  for (double e : r) rr += e * e;
  double rmax = max_abs(r);
  if (rmax <= opts.tolerance) {
    stats.residual = rmax;
    return stats;
  }
  int restarts = 0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    apply(p, ap);
    double pap = 0.0;
    for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0) || !std::isfinite(pap)) {
      throw SolverDiverged("conjugate gradient broke down (p.Ap = " + std::to_string(pap) + ")");
    }
    const double alpha = rr / pap;
    double rr_new = 0.0;
    rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rr_new += r[i] * r[i];
      rmax = std::max(rmax, std::abs(r[i]));
    }
    stats.iterations = it;
    if (rmax <= opts.tolerance) {
      // The recursive residual drifts from the true one; confirm before stopping.
      apply(x, ap);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
      rmax = max_abs(r);
      if (rmax <= opts.tolerance) {
        stats.residual = rmax;
        return stats;
      }
      if (++restarts > 20) break;
      p = r;
      rr = 0.0;
      for (double e : r) rr += e * e;
      continue;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  throw SolverDiverged("conjugate gradient did not reach residual " + std::to_string(opts.tolerance) +
                       " (last " + std::to_string(rmax) + ")");
}

// Box padded by one layer of zeros on each side; row-major, axis 0 most significant.
struct PaddedBox {
  LatticeBox box;
  std::vector<std::ptrdiff_t> strides;
  std::size_t size = 1;

  explicit PaddedBox(const LatticeBox& b) : box(b), strides(static_cast<std::size_t>(b.dim())) {
    for (int a = b.dim() - 1; a >= 0; --a) {
      strides[static_cast<std::size_t>(a)] = static_cast<std::ptrdiff_t>(size);
      size *= static_cast<std::size_t>(b.extent(a) + 2);
    }
  }
  std::size_t index(const Point& z) const {
    std::size_t idx = 0;
    for (int a = 0; a < box.dim(); ++a) {
      idx += static_cast<std::size_t>(z[a] - box.lo()[a] + 1) * static_cast<std::size_t>(strides[static_cast<std::size_t>(a)]);
    }
    return idx;
  }
};

template <int D>
void stencil_fixed(const std::vector<double>& p, std::vector<double>& out, const std::vector<double>& mask,
                   const std::vector<std::ptrdiff_t>& s, double inv) {
  std::array<std::ptrdiff_t, D> st{};
  for (int k = 0; k < D; ++k) st[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k)];
  const auto lo = static_cast<std::size_t>(st[0]);
  const std::size_t hi = p.size() - lo;
  const double* pp = p.data();
  for (std::size_t i = lo; i < hi; ++i) {
    double sum = 0.0;
    for (int k = 0; k < D; ++k) sum += pp[i + st[static_cast<std::size_t>(k)]] + pp[i - st[static_cast<std::size_t>(k)]];
    out[i] = mask[i] * (pp[i] - inv * sum);
  }
}

void stencil_generic(const std::vector<double>& p, std::vector<double>& out, const std::vector<double>& mask,
                     const std::vector<std::ptrdiff_t>& s, double inv) {
  const auto lo = static_cast<std::size_t>(s[0]);
  const std::size_t hi = p.size() - lo;
  for (std::size_t i = lo; i < hi; ++i) {
    double sum = 0.0;
    for (std::ptrdiff_t k : s) sum += p[i + static_cast<std::size_t>(k)] + p[i - static_cast<std::size_t>(k)];
    out[i] = mask[i] * (p[i] - inv * sum);
  }
}

// Solves the masked box system; `fixed_one` marks nodes pinned to 1, `source` adds a
// unit right-hand side. Returns the solution on the unpadded box.
LatticeField solve_box(const LatticeBox& box, const PointSet& ones, const std::optional<Point>& source,
                       const SolverOptions& opts, SolveStats* stats) {
  const int d = box.dim();
  const PaddedBox grid(box);
  const double inv = 1.0 / (2.0 * d);

  std::vector<double> mask(grid.size, 0.0);
  for (std::uint64_t i = 0; i < box.count(); ++i) mask[grid.index(box.point(i))] = 1.0;
  std::vector<std::size_t> pinned;
  for (const auto& a : ones) {
    if (!box.contains(a)) throw InvalidArgument("pinned point " + to_string(a) + " lies outside the box");
    const std::size_t i = grid.index(a);
    mask[i] = 0.0;
    pinned.push_back(i);
  }

  std::vector<double> b(grid.size, 0.0);
  for (std::size_t i : pinned) {
    for (std::ptrdiff_t s : grid.strides) {
      b[i + static_cast<std::size_t>(s)] += inv;
      b[i - static_cast<std::size_t>(s)] += inv;
    }
  }
  if (source) {
    if (!box.contains(*source)) throw InvalidArgument("source " + to_string(*source) + " lies outside the box");
    b[grid.index(*source)] += 1.0;
  }
  for (std::size_t i = 0; i < grid.size; ++i) b[i] *= mask[i];

  auto apply = [&](const std::vector<double>& p, std::vector<double>& out) {
    switch (d) {
      case 1: stencil_fixed<1>(p, out, mask, grid.strides, inv); break;
      case 2: stencil_fixed<2>(p, out, mask, grid.strides, inv); break;
      case 3: stencil_fixed<3>(p, out, mask, grid.strides, inv); break;
      case 4: stencil_fixed<4>(p, out, mask, grid.strides, inv); break;
      default: stencil_generic(p, out, mask, grid.strides, inv); break;
    }
  };

  Coord longest = 1;
  for (int a = 0; a < d; ++a) longest = std::max(longest, box.extent(a));
  std::vector<double> u;
  const SolveStats st = conjugate_gradient(apply, b, u, opts, static_cast<std::size_t>(200 * longest + 2000));
  if (stats) *stats = st;
  for (std::size_t i : pinned) u[i] = 1.0;

  LatticeField out(box);
  auto vals = out.values();
  for (std::uint64_t i = 0; i < box.count(); ++i) vals[i] = u[grid.index(box.point(i))];
  return out;
}

}  // namespace

LatticeField harmonic_extension(const PointSet& ones, const LatticeBox& box, const SolverOptions& opts,
                                SolveStats* stats) {
  return solve_box(box, ones, std::nullopt, opts, stats);
}

LatticeField killed_green(const Point& source, const LatticeBox& box, const SolverOptions& opts,
                          SolveStats* stats) {
  return solve_box(box, PointSet{}, source, opts, stats);
}

TorusField torus_hitting_times(const PointSet& target, const TorusGeometry& geom, const SolverOptions& opts,
                               SolveStats* stats) {
  if (target.empty()) throw EmptyTarget("hitting times of the empty set are infinite");
  const std::uint64_t vol = geom.volume();
  const int ports = geom.ports();
  std::vector<std::uint64_t> nbr(vol * static_cast<std::uint64_t>(ports));
  for (std::uint64_t i = 0; i < vol; ++i) {
    for (int p = 0; p < ports; ++p) nbr[i * static_cast<std::uint64_t>(ports) + static_cast<std::uint64_t>(p)] = geom.neighbor(i, p);
  }
  std::vector<double> mask(vol, 1.0);
  for (const auto& a : target) mask[geom.index(geom.canonical(a))] = 0.0;
  std::vector<double> b = mask;
  const double inv = 1.0 / ports;

  auto apply = [&](const std::vector<double>& p, std::vector<double>& out) {
    for (std::uint64_t i = 0; i < vol; ++i) {
      double sum = 0.0;
      const std::uint64_t* nb = &nbr[i * static_cast<std::uint64_t>(ports)];
      for (int k = 0; k < ports; ++k) sum += p[nb[k]];
      out[i] = mask[i] * (p[i] - inv * sum);
    }
  };
  std::vector<double> h;
  const SolveStats st =
      conjugate_gradient(apply, b, h, opts, static_cast<std::size_t>(50 * std::sqrt(static_cast<double>(vol)) * 40 + 5000));
  if (stats) *stats = st;
  return TorusField(geom, std::move(h));
}

}  // namespace torusrw
