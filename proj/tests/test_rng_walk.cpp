#include <doctest.h>

#include <cmath>
#include <sstream>

#include "torusrw/errors.hpp"
#include "torusrw/potential.hpp"
#include "torusrw/rng.hpp"
#include "torusrw/variational.hpp"
#include "torusrw/walk.hpp"

using namespace torusrw;

namespace {

struct Moments {
  std::uint64_t n = 0;
  double sum = 0.0, sum_sq = 0.0;
  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  void merge(const Moments& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double stderr_() const {
    const double m = mean();
    const double var = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
  }
};

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  WalkRng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool differ_stream = false, differ_seed = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differ_stream |= x != c();
    differ_seed |= x != d();
  }
  CHECK(differ_stream);
  CHECK(differ_seed);
}

TEST_CASE("rng bounded draws are uniform") {
  WalkRng rng(3, 0);
  const std::uint32_t k = 6;
  const int n = 600000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) ++counts[rng.below(k)];
  double chi2 = 0.0;
  const double expected = static_cast<double>(n) / k;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 25.0);  // 5 degrees of freedom, p ~ 1e-4

  Moments e;
  for (int i = 0; i < 200000; ++i) e.add(rng.exponential());
  CHECK(std::abs(e.mean() - 1.0) < 4 * e.stderr_());
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("hitting from inside the target") {
  const TorusGeometry g(6, 2);
  WalkRng rng(1, 0);
  const auto s = simulate_hitting(g, PointSet::on_torus({Point{2, 3}}, g), Point{2, 3}, 10, rng);
  CHECK(s.discrete_time == 0);
  CHECK(s.continuous_time == 0.0);
  CHECK(s.hit_point == Point{2, 3});
  CHECK(!s.truncated);
}

TEST_CASE("two-point cycle moves deterministically") {
  const TorusGeometry g(2, 1);
  WalkRng rng(5, 0);
  for (int i = 0; i < 20; ++i) {
    const auto s = simulate_hitting(g, PointSet::on_torus({Point{0}}, g), Point{1}, 10, rng, Clock::discrete);
    CHECK(s.discrete_time == 1);
  }
}

TEST_CASE("hitting errors and truncation") {
  const TorusGeometry g(8, 2);
  WalkRng rng(1, 0);
  CHECK_THROWS_AS(simulate_hitting(g, PointSet{}, UniformStart{}, 10, rng), EmptyTarget);
  CHECK_THROWS_AS(simulate_hitting(g, PointSet::on_torus({Point{0, 0}}, g), UniformStart{}, 0, rng), InvalidArgument);
  const auto s = simulate_hitting(g, PointSet::on_torus({Point{0, 0}}, g), Point{4, 4}, 3, rng);
  CHECK(s.truncated);
  CHECK(s.discrete_time == 3);
  CHECK(!s.hit_point);
}

TEST_CASE("mean hitting time on the 4-cycle") {
  // Oracle: h(1) = h(3) = 3, h(2) = 4 from the 3x3 system, so E_nu[H] = 10/4.
  const TorusGeometry g(4, 1);
  const TorusWalker w(g, {PointSet::on_torus({Point{0}}, g)});
  const auto acc = run_trials<Moments>(200000, 11, 1, [&](WalkRng& rng, Moments& m) {
    const auto s = w.hit(w.draw_start(UniformStart{}, rng), 100000, rng, Clock::poissonized);
    m.add(static_cast<double>(s.discrete_time));
  });
  CHECK(std::abs(acc.mean() - 2.5) < 3 * acc.stderr_());
}

TEST_CASE("mean hitting time against the exact solver, d=3") {
  const TorusGeometry g(8, 3);
  const PointSet a = PointSet::on_torus({Point{0, 0, 0}}, g);
  const double exact = expected_hitting_exact(a, g);
  const TorusWalker w(g, {a});
  struct Paired {
    Moments h, diff;
    void merge(const Paired& o) {
      h.merge(o.h);
      diff.merge(o.diff);
    }
  };
  const auto acc = run_trials<Paired>(20000, 12, 2, [&](WalkRng& rng, Paired& p) {
    const auto s = w.hit(w.draw_start(UniformStart{}, rng), 1u << 30, rng, Clock::poissonized);
    p.h.add(static_cast<double>(s.discrete_time));
    p.diff.add(s.continuous_time - static_cast<double>(s.discrete_time));
  });
  CHECK(std::abs(acc.h.mean() - exact) < 3.5 * acc.h.stderr_());
  // Poissonization keeps the mean: Hbar - H has mean zero on shared trajectories.
  CHECK(std::abs(acc.diff.mean()) < 4 * acc.diff.stderr_());
}

TEST_CASE("uniform start stays uniform") {
  const TorusGeometry g(5, 2);
  const TorusWalker w(g, {});
  std::vector<int> counts(g.volume(), 0);
  WalkRng rng(21, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    auto x = w.draw_start(UniformStart{}, rng);
    for (int k = 0; k < 7; ++k) x = w.step(x, rng);
    ++counts[x];
  }
  double chi2 = 0.0;
  const double e = static_cast<double>(n) / static_cast<double>(g.volume());
  for (int c : counts) chi2 += (c - e) * (c - e) / e;
  CHECK(chi2 < 60.0);  // 24 degrees of freedom
}

TEST_CASE("vacant window event equals the hitting event pathwise") {
  const TorusGeometry g(12, 3);
  const PointSet window({Point{0, 0, 0}, Point{1, 0, 0}});
  const Point center{3, 4, 5};
  const PointSet target = PointSet::on_torus({center, center + Point{1, 0, 0}}, g);
  const double t = 0.3 * static_cast<double>(g.volume());
  for (std::uint64_t k = 0; k < 300; ++k) {
    WalkRng r1(99, k), r2(99, k);
    const VacantWindow v = vacant_configuration(center, t, window, g, UniformStart{}, r1);
    const auto s = simulate_hitting(g, target, UniformStart{}, static_cast<std::uint64_t>(t), r2, Clock::discrete);
    CHECK(v.all_vacant() == s.truncated);
  }
}

TEST_CASE("vacant configuration at time zero") {
  const TorusGeometry g(6, 2);
  WalkRng rng(4, 0);
  const VisitRecord rec = record_visits(g, UniformStart{}, 0.0, rng);
  const PointSet window({Point{0, 0}, Point{1, 0}, Point{0, 1}});
  const Point center{2, 2};
  const VacantWindow v = vacant_configuration(center, window, rec);
  for (std::size_t i = 0; i < window.size(); ++i) {
    const Point y = g.canonical(window.points()[i] + center);
    CHECK(v.bits[i] == (y == rec.start ? 0 : 1));
  }
  const VacantWindow empty = vacant_configuration(center, PointSet{}, rec);
  CHECK(empty.all_vacant());
  CHECK(nlohmann::json(v).at("bits").size() == 3);
}

TEST_CASE("return or escape") {
  WalkRng rng(8, 0);
  std::vector<Point> star{Point{0, 0, 0}};
  for (int a = 0; a < 3; ++a) {
    star.push_back(Point::unit(3, a, 1));
    star.push_back(Point::unit(3, a, -1));
  }
  const PointSet cross(star);
  for (int i = 0; i < 50; ++i) CHECK(simulate_return_escape(cross, Point{0, 0, 0}, 5, rng) == Excursion::returned);
  CHECK_THROWS_AS(simulate_return_escape(cross, Point{0, 0, 0}, 1, rng), InvalidArgument);
  CHECK_THROWS_AS(simulate_return_escape(PointSet({Point{0, 0}}), Point{0, 0}, 5, rng), InvalidArgument);

  // The escape frequency from {0} out of [-R,R]^3 is exactly the box equilibrium weight.
  const PointSet origin({Point{0, 0, 0}});
  const Coord r = 12;
  const double weight = equilibrium_measure(origin, r).weight(Point{0, 0, 0});
  int escaped = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) escaped += simulate_return_escape(origin, Point{0, 0, 0}, r, rng) == Excursion::escaped;
  const double p = static_cast<double>(escaped) / n;
  CHECK(std::abs(p - weight) < 4 * std::sqrt(weight * (1 - weight) / n));
}

TEST_CASE("parallel runner is deterministic in (seed, workers)") {
  const TorusGeometry g(6, 3);
  const TorusWalker w(g, {PointSet::on_torus({Point{0, 0, 0}}, g)});
  auto run = [&](unsigned workers) {
    return run_trials<Moments>(5000, 77, workers, [&](WalkRng& rng, Moments& m) {
      m.add(w.hit(w.draw_start(UniformStart{}, rng), 1u << 20, rng, Clock::poissonized).continuous_time);
    });
  };
  const Moments a = run(3), b = run(3), c = run(1);
  CHECK(a.n == 5000);
  CHECK(a.sum == b.sum);
  CHECK(a.sum_sq == b.sum_sq);
  CHECK(c.n == 5000);
}

TEST_CASE("sample rows") {
  HittingSample s;
  s.start = Point{1, 2};
  s.discrete_time = 7;
  s.continuous_time = 6.5;
  std::ostringstream os;
  write_samples_header(os);
  write_sample_row(os, s);
  CHECK(os.str() == "start,H,Hbar,truncated\n1 2,7,6.5,0\n");
}
