#include "torusrw/potential.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <tuple>

#include "torusrw/errors.hpp"
#include "torusrw/variational.hpp"

namespace torusrw {

namespace {

void require_transient(int dim) {
  if (dim < 3) throw InvalidArgument("potential theory needs a transient walk (d >= 3)");
}

double decay(Coord r, int dim) { return std::pow(static_cast<double>(r), 2.0 - dim); }

// c such that v_small - v_large = c (small^{2-d} - large^{2-d}).
double decay_fit(double v_small, double v_large, Coord small, Coord large, int dim) {
  return (v_small - v_large) / (decay(small, dim) - decay(large, dim));
}

double box_capacity(const PointSet& set, Coord radius, CapacityMethod method, const SolverOptions& opts) {
  if (method == CapacityMethod::flow_energy_check) {
    return 1.0 / flow_energy(optimal_flow(set, capacity_box(set, radius), opts).flow);
  }
  const LatticeField phi = harmonic_extension(set, capacity_box(set, radius), opts);
  if (method == CapacityMethod::dirichlet_upper) return dirichlet_form(phi);
  return equilibrium_from_potential(set, phi).total();
}

}  // namespace

// ---- Green function ----------------------------------------------------

GreenTable::GreenTable(Coord radius, LatticeField values, LatticeField coarse, double c)
    : radius_(radius),
      values_(std::move(values)),
      coarse_(std::move(coarse)),
      decay_constant_(c),
      error_bound_(kTruncationSafety * c * decay(radius, values_.dim())) {}

GreenTable GreenTable::compute(int dim, Coord radius, const SolverOptions& opts) {
  require_transient(dim);
  if (radius < 2) throw InvalidArgument("Green table radius must be >= 2");
  const Point origin = Point::zero(dim);
  const Coord half = radius / 2;
  LatticeField fine = killed_green(origin, LatticeBox::centered(origin, radius), opts);
  LatticeField coarse = killed_green(origin, LatticeBox::centered(origin, half), opts);
  const double c = decay_fit(coarse.at(origin), fine.at(origin), half, radius, dim);
  return GreenTable(radius, std::move(fine), std::move(coarse), -c);
}

double GreenTable::extrapolated(const Point& x) const {
  const int d = dim();
  const Coord half = radius_ / 2;
  const double fine = values_.at(x), coarse = coarse_.at(x);
  return fine + (fine - coarse) * decay(radius_, d) / (decay(half, d) - decay(radius_, d));
}

BoundedValue green(const Point& x, Coord radius, const SolverOptions& opts) {
  if (x.linf() >= radius) throw InvalidArgument("green: |x|_inf must be below the box radius");
  const GreenTable t = GreenTable::compute(x.dim(), radius, opts);
  return {t.at(x), t.error_bound()};
}

double richardson(double at_r, double at_2r, int dim) {
  return at_2r + (at_2r - at_r) / (std::pow(2.0, dim - 2) - 1.0);
}

// ---- equilibrium measure and capacity ------------------------------------

double EquilibriumMeasure::total() const {
  double s = 0.0;
  for (const auto& [x, w] : weights) s += w;
  return s;
}

double EquilibriumMeasure::weight(const Point& x) const {
  auto it = weights.find(x);
  return it == weights.end() ? 0.0 : it->second;
}

LatticeBox capacity_box(const PointSet& set, Coord radius) {
  return LatticeBox::centered(LatticeBox::bounding(set).center(), radius);
}

Coord centred_radius(const PointSet& set) {
  if (set.empty()) return 0;
  const Point c = LatticeBox::bounding(set).center();
  Coord r = 0;
  for (const auto& p : set) r = std::max(r, (p - c).linf());
  return r;
}

EquilibriumMeasure equilibrium_from_potential(const PointSet& set, const LatticeField& phi) {
  EquilibriumMeasure m{set, {}, 0};
  const int d = phi.dim();
  const double inv = 1.0 / (2.0 * d);
  for (const auto& x : set) {
    double w = 0.0;
    for (int a = 0; a < d; ++a) {
      w += 1.0 - phi.at(x + Point::unit(d, a, 1));
      w += 1.0 - phi.at(x + Point::unit(d, a, -1));
    }
    m.weights[x] = w * inv;
  }
  return m;
}

EquilibriumMeasure equilibrium_measure(const PointSet& set, Coord radius, const SolverOptions& opts) {
  if (set.empty()) throw EmptyTarget("equilibrium measure of the empty set");
  require_transient(set.begin()->dim());
  if (radius <= 2 * centred_radius(set)) throw InvalidArgument("box radius must exceed twice the set radius");
  EquilibriumMeasure m = equilibrium_from_potential(set, harmonic_extension(set, capacity_box(set, radius), opts));
  m.radius = radius;
  return m;
}

std::string to_string(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::equilibrium:
      return "equilibrium";
    case CapacityMethod::dirichlet_upper:
      return "dirichlet_upper";
    case CapacityMethod::flow_energy_check:
      return "flow_energy_check";
  }
  return "unknown";
}

CapacityEstimate capacity(const PointSet& set, Coord radius, CapacityMethod method, const CapacityOptions& opts) {
  CapacityEstimate est{0.0, method, radius, 0.0, 0.0};
  if (set.empty()) return est;
  const int d = set.begin()->dim();
  require_transient(d);
  if (radius <= 2 * centred_radius(set)) throw InvalidArgument("box radius must exceed twice the set radius");
  est.value = box_capacity(set, radius, method, opts.solver);
  if (opts.calibrate) {
    const Coord half = radius / 2;
    const double coarse = box_capacity(set, half, method, opts.solver);
    const double c = decay_fit(coarse, est.value, half, radius, d);
    est.correction = std::max(0.0, c) * decay(radius, d);
    est.error_bound = kTruncationSafety * est.correction;
  }
  return est;
}

HittingIdentity hitting_identity_check(const Point& x, const PointSet& set, const GreenTable& table,
                                       const SolverOptions& opts) {
  if (set.empty()) throw EmptyTarget("hitting identity of the empty set");
  const LatticeBox box = LatticeBox::centered(Point::zero(table.dim()), table.radius());
  if (!box.contains(x)) throw InvalidArgument("point outside the Green table box");
  const LatticeField phi = harmonic_extension(set, box, opts);
  const EquilibriumMeasure e = equilibrium_from_potential(set, phi);

  HittingIdentity out;
  out.hitting = phi.at(x);
  double green_mass = 0.0;
  for (const auto& [y, w] : e.weights) {
    out.last_exit += table.at(x - y) * w;
    green_mass += table.at(x - y);
  }
  out.residual = std::abs(out.hitting - out.last_exit);
  // First-order propagation: Green values are low by at most err, and each escape
  // probability is high by at most err * cap^2.
  const double err = table.error_bound();
  const double cap = e.total();
  out.bound = err * cap + green_mass * err * cap * cap;
  return out;
}

// ---- optimal flow ------------------------------------------------------

OptimalFlow optimal_flow(const PointSet& set, const LatticeBox& box, const SolverOptions& opts) {
  if (set.empty()) throw EmptyTarget("optimal flow of the empty set");
  require_transient(set.begin()->dim());
  LatticeField phi = harmonic_extension(set, box, opts);
  const double cap = equilibrium_from_potential(set, phi).total();
  LatticeFlow flow(box);
  const double scale = 1.0 / (2.0 * box.dim() * cap);
  std::vector<std::tuple<Point, int, double>> edges;
  flow.for_each_edge([&](const Point& z, int a, double) {
    const double v = -(phi.at(z + Point::unit(box.dim(), a)) - phi.at(z)) * scale;
    if (v != 0.0) edges.emplace_back(z, a, v);
  });
  for (auto& [z, a, v] : edges) flow.set_forward(z, a, v);
  return {std::move(flow), cap, std::move(phi)};
}

OptimalFlow optimal_flow(const PointSet& set, Coord radius, const SolverOptions& opts) {
  if (set.empty()) throw EmptyTarget("optimal flow of the empty set");
  return optimal_flow(set, capacity_box(set, radius), opts);
}

Probability vacant_law(const PointSet& set, double u, Coord radius, const CapacityOptions& opts) {
  if (!(u >= 0.0)) throw InvalidArgument("vacant_law: level u must be >= 0");
  if (set.empty() || u == 0.0) return {};
  const CapacityEstimate c = capacity(set, radius, CapacityMethod::equilibrium, opts);
  return {std::exp(-u * c.extrapolated()), std::exp(-u * c.value), std::exp(-u * c.lower())};
}

}  // namespace torusrw
