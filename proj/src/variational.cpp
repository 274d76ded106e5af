#include "torusrw/variational.hpp"

#include <cmath>
#include <numbers>

#include "torusrw/errors.hpp"

namespace torusrw {

double dirichlet_form(const TorusField& f) {
  const TorusGeometry& g = f.geometry();
  double s = 0.0;
  for (std::uint64_t x = 0; x < g.volume(); ++x) {
    for (int a = 0; a < g.dim(); ++a) {
      const double diff = f[x] - f[g.neighbor(x, 2 * a)];
      s += diff * diff;
    }
  }
  return s / (2.0 * g.dim());
}

double dirichlet_form(const LatticeField& f) {
  const int d = f.dim();
  const LatticeBox region = f.box().grown(1);
  double s = 0.0;
  for (std::uint64_t i = 0; i < region.count(); ++i) {
    const Point z = region.point(i);
    const double fz = f.at(z);
    for (int a = 0; a < d; ++a) {
      if (z[a] == region.hi()[a]) continue;
      const double diff = fz - f.at(z + Point::unit(d, a));
      s += diff * diff;
    }
  }
  return s / (2.0 * d);
}

double flow_energy(const TorusFlow& flow) {
  double s = 0.0;
  for (double v : flow.edges()) s += v * v;
  return s * 2.0 * flow.geometry().dim();
}

double flow_energy(const LatticeFlow& flow) {
  double s = 0.0;
  flow.for_each_edge([&](const Point&, int, double v) { s += v * v; });
  return s * 2.0 * flow.dim();
}

double divergence(const TorusFlow& flow, const Point& x) {
  const TorusGeometry& g = flow.geometry();
  const std::uint64_t ix = g.index(g.canonical(x));
  double s = 0.0;
  for (int p = 0; p < g.ports(); ++p) s += flow.through(ix, p);
  return s;
}

double divergence(const LatticeFlow& flow, const Point& x) {
  double s = 0.0;
  for (int a = 0; a < flow.dim(); ++a) {
    s += flow.forward(x, a);
    s -= flow.forward(x - Point::unit(flow.dim(), a), a);
  }
  return s;
}

TorusField divergence_field(const TorusFlow& flow) {
  const TorusGeometry& g = flow.geometry();
  TorusField div(g);
  for (std::uint64_t x = 0; x < g.volume(); ++x) {
    for (int a = 0; a < g.dim(); ++a) {
      const double v = flow.forward(x, a);
      div[x] += v;
      div[g.neighbor(x, 2 * a)] -= v;
    }
  }
  return div;
}

double flow_out(const TorusFlow& flow, const PointSet& set) {
  double s = 0.0;
  for (const auto& x : set) s += divergence(flow, x);
  return s;
}

double flow_out(const LatticeFlow& flow, const PointSet& set) {
  double s = 0.0;
  for (const auto& x : set) s += divergence(flow, x);
  return s;
}

double expected_hitting_exact(const PointSet& set, const TorusGeometry& geom, const ExactHittingOptions& opts) {
  if (set.empty()) throw EmptyTarget("expected_hitting_exact: empty target");
  if (geom.volume() > opts.max_unknowns) throw TooLarge("expected_hitting_exact: N^d exceeds the solver limit");
  return torus_hitting_times(set, geom, opts.solver).mean();
}

double torus_dirichlet_value(const TorusField& f, const PointSet& set, double tolerance) {
  for (const auto& x : set) {
    const double v = std::abs(f.at(x) - 1.0);
    if (v > tolerance) throw ConstraintViolated("test function differs from 1 on the target", to_string(x), v);
  }
  const double m = f.mean();
  if (std::abs(m) > tolerance) throw ConstraintViolated("test function does not have zero mean", "nu", m);
  return dirichlet_form(f);
}

TorusField build_test_function(const std::vector<PlacedWindow>& windows, const Point& basepoint,
                               const TorusGeometry& geom) {
  TorusField g(geom);
  std::vector<int> owner(geom.volume(), -1);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    const Point anchor = box_bijection(geom.canonical(w.center), basepoint, geom);
    const LatticeBox& box = w.profile.box();
    const auto vals = w.profile.values();
    for (std::uint64_t k = 0; k < box.count(); ++k) {
      if (vals[k] == 0.0) continue;
      const Point y = anchor + box.point(k);
      // distance is negative outside T'
      if (distance_to_box_boundary(y, geom) < 1) {
        throw SupportsOverlap("window " + std::to_string(i) + " reaches the boundary of the box at " + to_string(y));
      }
      const std::uint64_t ix = geom.index(box_preimage(y, basepoint, geom));
      // The point itself and its neighbours must not belong to another window.
      for (int p = -1; p < geom.ports(); ++p) {
        const std::uint64_t q = p < 0 ? ix : geom.neighbor(ix, p);
        if (owner[q] >= 0 && owner[q] != static_cast<int>(i)) {
          throw SupportsOverlap("windows " + std::to_string(owner[q]) + " and " + std::to_string(i) +
                                " overlap or touch near " + to_string(geom.point(q)));
        }
      }
      owner[ix] = static_cast<int>(i);
      g[ix] += vals[k];
    }
  }
  const double m = g.mean();
  const double norm = 1.0 - m;
  if (!(norm > 0.5)) throw DegenerateNormalizer("test function normaliser 1 - nu(sum f_i) = " + std::to_string(norm));
  for (std::uint64_t x = 0; x < geom.volume(); ++x) g[x] = (g[x] - m) / norm;
  return g;
}

double test_function_closed_form(const std::vector<PlacedWindow>& windows, const TorusGeometry& geom) {
  double energy = 0.0, mass = 0.0;
  for (const auto& w : windows) {
    energy += dirichlet_form(w.profile);
    for (double v : w.profile.values()) mass += v;
  }
  const double norm = 1.0 - mass / static_cast<double>(geom.volume());
  return energy / (norm * norm);
}

double torus_thomson_value(const TorusFlow& flow, const PointSet& set, double tolerance) {
  const TorusGeometry& g = flow.geometry();
  const double vol = static_cast<double>(g.volume());
  const TorusField div = divergence_field(flow);
  std::vector<std::uint8_t> in_set(g.volume(), 0);
  double out = 0.0;
  for (const auto& x : set) {
    const std::uint64_t ix = g.index(g.canonical(x));
    if (!in_set[ix]) out += div[ix];
    in_set[ix] = 1;
  }
  double worst = 0.0;
  std::uint64_t worst_at = 0;
  for (std::uint64_t x = 0; x < g.volume(); ++x) {
    if (in_set[x]) continue;
    const double v = std::abs(div[x] + 1.0 / vol);
    if (v > worst) {
      worst = v;
      worst_at = x;
    }
  }
  if (worst > tolerance) {
    throw ConstraintViolated("divergence off the target differs from -N^{-d}", to_string(g.point(worst_at)), worst);
  }
  const double target_out = 1.0 - static_cast<double>(set.size()) / vol;
  if (std::abs(out - target_out) > tolerance) {
    throw ConstraintViolated("flow out of the target differs from 1 - |A| N^{-d}", "target", out - target_out);
  }
  return flow_energy(flow);
}

double spectral_gap(const TorusGeometry& geom) {
  return (1.0 - std::cos(2.0 * std::numbers::pi / static_cast<double>(geom.side()))) / geom.dim();
}

}  // namespace torusrw
