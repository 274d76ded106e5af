#include "torusrw/flows.hpp"

#include <cmath>

#include "torusrw/errors.hpp"
#include "torusrw/variational.hpp"

namespace torusrw {

TorusFlow restrict_flow(const LatticeFlow& flow, const TorusGeometry& geom, const Point& basepoint) {
  TorusFlow out(geom);
  const Coord n = geom.side();
  for (std::uint64_t x = 0; x < geom.volume(); ++x) {
    const Point y = box_bijection(geom.point(x), basepoint, geom);
    for (int a = 0; a < geom.dim(); ++a) {
      if (y[a] == n - 1) continue;  // wrap-around edge
      out.forward(x, a) = flow.forward(y, a);
    }
  }
  return out;
}

BoundaryCharge boundary_charge(const TorusFlow& restricted, const Point& basepoint) {
  const TorusGeometry& geom = restricted.geometry();
  BoundaryCharge g{divergence_field(restricted), 0.0};
  for (std::uint64_t x = 0; x < geom.volume(); ++x) {
    if (distance_to_box_boundary(box_bijection(geom.point(x), basepoint, geom), geom) >= 1) {
      g.values[x] = 0.0;
    } else {
      g.sup = std::max(g.sup, std::abs(g.values[x]));
    }
  }
  return g;
}

TorusFlow uniformize_flow(const TorusField& h) {
  const TorusGeometry& geom = h.geometry();
  const Coord n = geom.side();
  TorusFlow flow(geom);
  // Axis 0 first: along every fiber, prefix sums move h to its fiber mean. The
  // result is constant along axis 0, so the remaining passes act on the slices.
  std::vector<double> cur(h.values().begin(), h.values().end());
  for (int a = 0; a < geom.dim(); ++a) {
    const std::uint64_t stride = geom.stride(a);
    for (std::uint64_t x = 0; x < geom.volume(); ++x) {
      if (geom.coord(x, a) != 0) continue;
      double mean = 0.0;
      for (Coord j = 0; j < n; ++j) mean += cur[x + static_cast<std::uint64_t>(j) * stride];
      mean /= static_cast<double>(n);
      double prefix = 0.0;
      for (Coord j = 0; j + 1 < n; ++j) {
        const std::uint64_t p = x + static_cast<std::uint64_t>(j) * stride;
        prefix += mean - cur[p];
        flow.forward(p, a) += prefix;
      }
      for (Coord j = 0; j < n; ++j) cur[x + static_cast<std::uint64_t>(j) * stride] = mean;
    }
  }
  return flow;
}

void add_fiber_flow(TorusFlow& acc, double charge, const Fiber& fiber) {
  const TorusGeometry& geom = acc.geometry();
  const Coord n = fiber.length;
  const int port = 2 * fiber.axis + (fiber.sign > 0 ? 0 : 1);
  std::uint64_t p = geom.index(geom.canonical(fiber.base));
  for (Coord i = 0; i + 1 < n; ++i) {
    acc.add(p, port, -charge * static_cast<double>(n - (i + 1)) / static_cast<double>(n));
    p = geom.neighbor(p, port);
  }
}

TorusFlow fiber_flow(const Point& base, double charge, const Fiber& fiber, const TorusGeometry& geom) {
  if (geom.canonical(base) != geom.canonical(fiber.base)) throw InvalidArgument("fiber does not start at the base point");
  TorusFlow k(geom);
  add_fiber_flow(k, charge, fiber);
  return k;
}

RedirectingFlow redirecting_flow(const TorusFlow& restricted, const Point& basepoint) {
  const TorusGeometry& geom = restricted.geometry();
  if (geom.side() < 3) throw InvalidArgument("redirecting flow needs N >= 3 (the box interior is empty)");
  RedirectingFlow r{TorusFlow(geom), TorusFlow(geom), boundary_charge(restricted, basepoint), 0.0};
  const BoxPartition parts = boundary_sets(geom, basepoint);
  for (const auto& [x, fiber] : assign_fibers(parts.shell, basepoint, geom)) {
    const double c = r.charge.values.at(x);
    if (c != 0.0) add_fiber_flow(r.fibers, c, fiber);
  }
  TorusField h = divergence_field(r.fibers);
  for (std::uint64_t x = 0; x < geom.volume(); ++x) h[x] += r.charge.values[x];
  r.residual_charge_sup = h.sup_norm();
  r.flow = r.fibers + uniformize_flow(h);
  return r;
}

ThomsonCompetitor thomson_competitor(const PointSet& target, const TorusGeometry& geom, std::optional<Coord> radius,
                                     const SolverOptions& opts) {
  if (target.empty()) throw EmptyTarget("thomson_competitor: empty target");
  const int d = geom.dim();
  const Coord n = geom.side();
  std::vector<Point> centers(target.begin(), target.end());
  std::vector<PointSet> windows(centers.size(), PointSet({Point::zero(d)}));
  const BasepointChoice choice = choose_basepoint(centers, windows, geom);

  std::vector<Point> embedded;
  for (const auto& x : target) embedded.push_back(box_bijection(x, choice.basepoint, geom));
  const PointSet psi_b(std::move(embedded));

  const Coord r = radius.value_or(2 * n);
  const LatticeBox box = LatticeBox::centered(Point(std::vector<Coord>(static_cast<std::size_t>(d), (n - 1) / 2)), r);
  if (!box.contains(Point::zero(d)) || !box.contains(Point(std::vector<Coord>(static_cast<std::size_t>(d), n)))) {
    throw InvalidArgument("thomson_competitor: the flow box must contain the box T' with slack");
  }
  const OptimalFlow opt = optimal_flow(psi_b, box, opts);

  ThomsonCompetitor c{TorusFlow(geom), choice.basepoint, choice.margin, psi_b};
  c.box_capacity = opt.capacity;
  c.lattice_energy = flow_energy(opt.flow);
  const TorusFlow restricted = restrict_flow(opt.flow, geom, choice.basepoint);
  c.restricted_energy = flow_energy(restricted);
  RedirectingFlow j = redirecting_flow(restricted, choice.basepoint);
  c.redirect_energy = flow_energy(j.flow);
  c.redirect_sup = j.flow.sup_norm();
  c.charge_sup = j.charge.sup;
  for (double v : j.charge.values.values()) c.charge_total += v;
  const TorusField div_j = divergence_field(j.flow);
  const double uniform = 1.0 / static_cast<double>(geom.volume());
  for (std::uint64_t x = 0; x < geom.volume(); ++x) {
    c.identity_error = std::max(c.identity_error, std::abs(div_j[x] + j.charge.values[x] + uniform));
  }
  c.flow = restricted + j.flow;
  c.energy = torus_thomson_value(c.flow, target);
  return c;
}

}  // namespace torusrw
