#include <doctest.h>

#include <cmath>
#include <random>

#include "torusrw/errors.hpp"
#include "torusrw/flows.hpp"
#include "torusrw/variational.hpp"

using namespace torusrw;

namespace {

TorusField random_field(const TorusGeometry& g, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  TorusField h(g);
  for (std::uint64_t x = 0; x < g.volume(); ++x) h[x] = n(gen);
  return h;
}

}  // namespace

TEST_CASE("uniformizing flow, one dimension") {
  const TorusGeometry g(4, 1);
  const TorusField h(g, std::vector<double>{1, 0, 0, 0});
  const TorusFlow l = uniformize_flow(h);
  CHECK(l.at(Point{0}, Point{1}) == doctest::Approx(-0.75));
  CHECK(l.at(Point{1}, Point{2}) == doctest::Approx(-0.5));
  CHECK(l.at(Point{2}, Point{3}) == doctest::Approx(-0.25));
  CHECK(l.at(Point{3}, Point{0}) == 0.0);
  const TorusField div = divergence_field(l);
  for (std::uint64_t x = 0; x < 4; ++x) CHECK(div[x] + h[x] == doctest::Approx(0.25));

  const TorusFlow zero = uniformize_flow(TorusField(TorusGeometry(5, 2), 3.0));
  CHECK(zero.sup_norm() == 0.0);
}

TEST_CASE("uniformizing flow identity on random fields") {
  std::mt19937_64 gen(2024);
  for (int d = 1; d <= 3; ++d) {
    for (Coord n : {4, 8, 16}) {
      const TorusGeometry g(n, d);
      double worst_ratio = 0.0;
      for (int k = 0; k < 20; ++k) {
        const TorusField h = random_field(g, gen);
        const TorusFlow l = uniformize_flow(h);
        const TorusField div = divergence_field(l);
        const double nu = h.mean(), scale = static_cast<double>(n) * h.sup_norm();
        for (std::uint64_t x = 0; x < g.volume(); ++x) CHECK(std::abs(div[x] + h[x] - nu) <= 1e-12 * scale);
        worst_ratio = std::max(worst_ratio, l.sup_norm() / scale);
      }
      CHECK(worst_ratio <= 2.0 * d);
    }
  }
}

TEST_CASE("uniformizing layers have additive energy") {
  // The axis-0 layer and the slice layer live on disjoint edge sets.
  std::mt19937_64 gen(5);
  const TorusGeometry g(6, 2);
  const TorusField h = random_field(g, gen);
  const TorusFlow l = uniformize_flow(h);
  TorusFlow first(g), rest(g);
  for (std::uint64_t x = 0; x < g.volume(); ++x) {
    first.forward(x, 0) = l.forward(x, 0);
    rest.forward(x, 1) = l.forward(x, 1);
  }
  CHECK(flow_energy(l) == doctest::Approx(flow_energy(first) + flow_energy(rest)));
  CHECK(flow_energy(first) > 0.0);
}

TEST_CASE("fiber flow") {
  const TorusGeometry g(4, 2);
  const Fiber f{Point{0, 1}, 0, 1, 4};
  const TorusFlow k = fiber_flow(Point{0, 1}, 1.0, f, g);
  CHECK(k.at(Point{0, 1}, Point{1, 1}) == doctest::Approx(-0.75));
  CHECK(k.at(Point{1, 1}, Point{2, 1}) == doctest::Approx(-0.5));
  CHECK(k.at(Point{2, 1}, Point{3, 1}) == doctest::Approx(-0.25));
  CHECK(k.at(Point{3, 1}, Point{0, 1}) == 0.0);
  CHECK(k.sup_norm() <= 1.0);
  TorusField res = divergence_field(k);
  res.set(Point{0, 1}, res.at(Point{0, 1}) + 1.0);
  for (std::uint64_t x = 0; x < g.volume(); ++x) {
    const Point p = g.point(x);
    CHECK(res[x] == doctest::Approx(p[1] == 1 ? 0.25 : 0.0));
  }
  CHECK(fiber_flow(Point{0, 1}, 0.0, f, g).sup_norm() == 0.0);

  // negative direction
  const Fiber back{Point{3, 2}, 0, -1, 4};
  const TorusFlow kb = fiber_flow(Point{3, 2}, 2.0, back, g);
  CHECK(kb.at(Point{3, 2}, Point{2, 2}) == doctest::Approx(-1.5));
  CHECK(kb.at(Point{0, 2}, Point{3, 2}) == 0.0);
  CHECK_THROWS_AS(fiber_flow(Point{1, 1}, 1.0, f, g), InvalidArgument);
}

TEST_CASE("superposed fiber flows") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1, 1);
  const TorusGeometry g(6, 3);
  const Point base{2, 3, 4};
  const BoxPartition parts = boundary_sets(g, base);
  const auto fibers = assign_fibers(parts.shell, base, g);
  TorusFlow k(g);
  TorusField charge(g);
  double single_max = 0.0;
  for (const auto& [x, f] : fibers) {
    const double c = u(gen);
    charge.set(x, c);
    add_fiber_flow(k, c, f);
    single_max = std::max(single_max, fiber_flow(x, c, f, g).sup_norm());
  }
  CHECK(k.sup_norm() <= 2 * 3 * single_max + 1e-12);
  TorusField res = divergence_field(k);
  for (std::uint64_t x = 0; x < g.volume(); ++x) res[x] += charge[x];
  CHECK(res.sup_norm() <= 2 * 3 * charge.sup_norm() / 6.0 + 1e-12);
}

TEST_CASE("restriction of the lattice flow") {
  const TorusGeometry g(8, 3);
  const LatticeFlow zero(LatticeBox::centered(Point{3, 3, 3}, 16));
  CHECK(restrict_flow(zero, g, Point{0, 0, 0}).sup_norm() == 0.0);

  const PointSet b = PointSet::on_torus({Point{1, 1, 1}}, g);
  const Point base{5, 5, 5};  // psi(b) = (4,4,4)
  const PointSet psi_b({Point{4, 4, 4}});
  const OptimalFlow opt = optimal_flow(psi_b, LatticeBox::centered(Point{3, 3, 3}, 16), {1e-12, 0});
  const TorusFlow r = restrict_flow(opt.flow, g, base);
  CHECK(flow_energy(r) <= flow_energy(opt.flow));
  // interior divergence is preserved
  const BoxPartition parts = boundary_sets(g, base);
  for (const auto& x : parts.inner) {
    CHECK(divergence(r, x) == doctest::Approx(divergence(opt.flow, box_bijection(x, base, g))).epsilon(1e-12));
  }
  // wrap-around edges carry nothing
  CHECK(r.at(box_preimage(Point{7, 2, 2}, base, g), box_preimage(Point{0, 2, 2}, base, g)) == 0.0);

  const BoundaryCharge charge = boundary_charge(r, base);
  double total = 0.0;
  for (std::uint64_t x = 0; x < g.volume(); ++x) total += charge.values[x];
  CHECK(total == doctest::Approx(-1.0).epsilon(1e-9));
  for (const auto& x : parts.inner) CHECK(charge.values.at(x) == 0.0);
  CHECK(charge.sup == doctest::Approx(charge.values.sup_norm()));
}

TEST_CASE("redirecting flow identity") {
  const TorusGeometry g(8, 3);
  const Point base{5, 5, 5};
  const OptimalFlow opt = optimal_flow(PointSet({Point{4, 4, 4}}), LatticeBox::centered(Point{3, 3, 3}, 16), {1e-12, 0});
  const TorusFlow r = restrict_flow(opt.flow, g, base);
  const RedirectingFlow j = redirecting_flow(r, base);
  const TorusField div = divergence_field(j.flow);
  const double target = -1.0 / static_cast<double>(g.volume());
  for (std::uint64_t x = 0; x < g.volume(); ++x) CHECK(std::abs(div[x] + j.charge.values[x] - target) < 1e-10);
  CHECK(j.residual_charge_sup <= j.charge.sup);
  CHECK_THROWS_AS(redirecting_flow(TorusFlow(TorusGeometry(2, 3)), Point{0, 0, 0}), InvalidArgument);
}

TEST_CASE("thomson competitor pipeline") {
  const TorusGeometry g(12, 3);
  const PointSet b = PointSet::on_torus({Point{0, 0, 0}, Point{6, 6, 6}}, g);
  const ThomsonCompetitor c = thomson_competitor(b, g, std::nullopt, {1e-12, 0});
  const double exact = expected_hitting_exact(b, g) / static_cast<double>(g.volume());
  CHECK(c.energy >= exact - 1e-9);
  CHECK(c.identity_error < 1e-10);
  CHECK(c.charge_total == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(c.restricted_energy <= c.lattice_energy);
  CHECK(c.margin >= 1);
  // (a + b)^2 shape: sqrt(energy) <= sqrt((I*,I*)) + sqrt((J,J))
  CHECK(std::sqrt(c.energy) <= std::sqrt(c.restricted_energy) + std::sqrt(c.redirect_energy) + 1e-12);
  CHECK(c.lattice_energy == doctest::Approx(1.0 / c.box_capacity).epsilon(1e-8));

  // the bound approaches the exact value as N grows
  double previous = 1e9;
  for (Coord n : {8, 12, 16}) {
    const TorusGeometry gn(n, 3);
    const PointSet a = PointSet::on_torus({Point{0, 0, 0}}, gn);
    const ThomsonCompetitor t = thomson_competitor(a, gn, std::nullopt, {1e-12, 0});
    const double gap = t.energy - expected_hitting_exact(a, gn) / static_cast<double>(gn.volume());
    CHECK(gap >= -1e-9);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK_THROWS_AS(thomson_competitor(PointSet{}, g), EmptyTarget);
  CHECK_THROWS_AS(thomson_competitor(b, g, Coord{4}), InvalidArgument);
}
