#include "torusrw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "torusrw/errors.hpp"

namespace torusrw {

TorusWalker::TorusWalker(const TorusGeometry& geom, std::vector<PointSet> targets)
    : geom_(geom), targets_(std::move(targets)), ports_(static_cast<std::uint32_t>(geom.ports())) {
  if (targets_.size() > 32) throw InvalidArgument("at most 32 targets per walker");
  const std::uint64_t vol = geom.volume();
  if (vol >= std::numeric_limits<std::uint32_t>::max() || vol * ports_ > (std::uint64_t{1} << 30)) {
    throw TooLarge("torus too large for the walk neighbor table");
  }
  nbr_.resize(vol * ports_);
  for (std::uint64_t i = 0; i < vol; ++i) {
    for (std::uint32_t p = 0; p < ports_; ++p) {
      nbr_[i * ports_ + p] = static_cast<std::uint32_t>(geom.neighbor(i, static_cast<int>(p)));
    }
  }
  labels_.assign(vol, 0);
  for (std::size_t k = 0; k < targets_.size(); ++k) {
    const std::uint32_t bit = 1u << k;
    all_labels_ |= bit;
    for (const auto& p : targets_[k]) labels_[geom.index(geom.canonical(p))] |= bit;
  }
}

std::uint64_t TorusWalker::draw_start(const StartSpec& start, WalkRng& rng) const {
  if (const auto* p = std::get_if<Point>(&start)) return geom_.index(geom_.canonical(*p));
  const std::uint64_t vol = geom_.volume();
  if (vol <= std::numeric_limits<std::uint32_t>::max()) return rng.below(static_cast<std::uint32_t>(vol));
  return std::uniform_int_distribution<std::uint64_t>(0, vol - 1)(rng);
}

HittingSample TorusWalker::hit(std::uint64_t start, std::uint64_t step_cap, WalkRng& rng, Clock clock) const {
  HittingSample s;
  s.start = geom_.point(start);
  std::uint64_t pos = start;
  std::uint64_t n = 0;
  double t = 0.0;
  while (labels_[pos] == 0) {
    if (n == step_cap) {
      s.truncated = true;
      break;
    }
    pos = step(pos, rng);
    if (clock == Clock::poissonized) t += rng.exponential();
    ++n;
  }
  s.discrete_time = n;
  s.continuous_time = t;
  if (!s.truncated) s.hit_point = geom_.point(pos);
  return s;
}

std::vector<std::optional<std::uint64_t>> TorusWalker::entrances(std::uint64_t start, std::uint64_t step_cap,
                                                                 WalkRng& rng) const {
  std::vector<std::optional<std::uint64_t>> times(targets_.size());
  std::uint32_t seen = 0;
  std::uint64_t pos = start;
  for (std::uint64_t n = 0;; ++n) {
    std::uint32_t fresh = labels_[pos] & ~seen;
    if (fresh) {
      seen |= fresh;
      for (std::size_t k = 0; k < targets_.size(); ++k) {
        if (fresh & (1u << k)) times[k] = n;
      }
      if (seen == all_labels_) break;
    }
    if (n == step_cap) break;
    pos = step(pos, rng);
  }
  return times;
}

std::vector<std::uint8_t> TorusWalker::visits(std::uint64_t start, std::uint64_t steps, WalkRng& rng) const {
  std::vector<std::uint8_t> seen(geom_.volume(), 0);
  std::uint64_t pos = start;
  seen[pos] = 1;
  for (std::uint64_t n = 0; n < steps; ++n) {
    pos = step(pos, rng);
    seen[pos] = 1;
  }
  return seen;
}

HittingSample simulate_hitting(const TorusGeometry& geom, const PointSet& target, const StartSpec& start,
                               std::uint64_t step_cap, WalkRng& rng, Clock clock) {
  if (target.empty()) throw EmptyTarget("simulate_hitting: target set is empty");
  if (step_cap < 1) throw InvalidArgument("simulate_hitting: step_cap must be >= 1");
  TorusWalker walker(geom, {target});
  return walker.hit(walker.draw_start(start, rng), step_cap, rng, clock);
}

Excursion simulate_return_escape(const PointSet& target, const Point& start, Coord radius, WalkRng& rng) {
  const int d = start.dim();
  if (d < 3) throw InvalidArgument("return/escape needs a transient walk (d >= 3)");
  if (!target.contains(start)) throw InvalidArgument("start must lie in the target set");
  if (radius <= target.linf_radius()) throw InvalidArgument("escape radius must exceed the radius of the set");

  const LatticeBox hull = LatticeBox::bounding(target);
  Point x = start;
  const auto ports = static_cast<std::uint32_t>(2 * d);
  for (;;) {
    const std::uint32_t p = rng.below(ports);
    const int axis = static_cast<int>(p / 2);
    x[axis] += (p % 2 == 0) ? 1 : -1;
    if (x[axis] > radius || x[axis] < -radius) return Excursion::escaped;
    if (hull.contains(x) && target.contains(x)) return Excursion::returned;
  }
}

VisitRecord record_visits(const TorusGeometry& geom, const StartSpec& start, double t, WalkRng& rng) {
  if (!(t >= 0.0)) throw InvalidArgument("time horizon must be >= 0");
  TorusWalker walker(geom, {});
  const std::uint64_t x0 = walker.draw_start(start, rng);
  const auto steps = static_cast<std::uint64_t>(std::floor(t));
  return VisitRecord{geom, geom.point(x0), t, walker.visits(x0, steps, rng)};
}

bool VacantWindow::all_vacant() const {
  return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b == 1; });
}

VacantWindow vacant_configuration(const Point& center, const PointSet& window, const VisitRecord& record) {
  VacantWindow w{record.geom.canonical(center), record.horizon, window, {}};
  w.bits.reserve(window.size());
  for (const auto& z : window) {
    const Point y = record.geom.canonical(z + center);
    w.bits.push_back(record.visited[record.geom.index(y)] ? 0 : 1);
  }
  return w;
}

VacantWindow vacant_configuration(const Point& center, double t, const PointSet& window, const TorusGeometry& geom,
                                  const StartSpec& start, WalkRng& rng) {
  return vacant_configuration(center, window, record_visits(geom, start, t, rng));
}

void to_json(nlohmann::json& j, const VacantWindow& w) {
  j = nlohmann::json{{"center", w.center}, {"horizon", w.horizon}, {"window", w.window}, {"bits", w.bits}};
}

void write_samples_header(std::ostream& os) { os << "start,H,Hbar,truncated\n"; }

void write_sample_row(std::ostream& os, const HittingSample& s) {
  for (int a = 0; a < s.start.dim(); ++a) os << (a ? " " : "") << s.start[a];
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", s.continuous_time);
  os << ',' << s.discrete_time << ',' << buf << ',' << (s.truncated ? 1 : 0) << '\n';
}

}  // namespace torusrw
