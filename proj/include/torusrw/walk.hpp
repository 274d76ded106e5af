#pragma once

// Simple random walk on the torus and on Z^d.

#include <cstdint>
#include <optional>
#include <ostream>
#include <thread>
#include <variant>
#include <vector>

#include "torusrw/lattice.hpp"
#include "torusrw/rng.hpp"

namespace torusrw {

struct UniformStart {};
/// Either a fixed torus point or X_0 drawn from the uniform distribution.
using StartSpec = std::variant<UniformStart, Point>;

enum class Clock {
  discrete,     ///< only H_A
  poissonized,  ///< also accumulate one Exp(1) holding time per step
};

struct HittingSample {
  std::uint64_t discrete_time = 0;  ///< H_A, or the step cap when truncated
  double continuous_time = 0.0;     ///< sum of discrete_time Exp(1) increments
  Point start;
  std::optional<Point> hit_point;  ///< empty when truncated
  bool truncated = false;          ///< true iff X_0..X_cap all avoid A, i.e. H_A > cap
};

/// Walk engine for one torus: precomputed neighbor table plus up to 32 labelled targets.
class TorusWalker {
 public:
  TorusWalker(const TorusGeometry& geom, std::vector<PointSet> targets);

  const TorusGeometry& geometry() const { return geom_; }
  std::size_t target_count() const { return targets_.size(); }

  std::uint64_t draw_start(const StartSpec& start, WalkRng& rng) const;

  std::uint64_t step(std::uint64_t pos, WalkRng& rng) const {
    return nbr_[pos * ports_ + rng.below(ports_)];
  }

  /// First entrance into the union of all targets, checking X_0..X_step_cap.
  HittingSample hit(std::uint64_t start, std::uint64_t step_cap, WalkRng& rng, Clock clock) const;

  /// First entrance time of each target along one trajectory observed up to
  /// step_cap; stops early once every target has been entered.
  std::vector<std::optional<std::uint64_t>> entrances(std::uint64_t start, std::uint64_t step_cap,
                                                      WalkRng& rng) const;

  /// Indicator of the range X_0..X_steps.
  std::vector<std::uint8_t> visits(std::uint64_t start, std::uint64_t steps, WalkRng& rng) const;

 private:
  TorusGeometry geom_;
  std::vector<PointSet> targets_;
  std::uint32_t ports_;
  std::vector<std::uint32_t> nbr_;
  std::vector<std::uint32_t> labels_;
  std::uint32_t all_labels_ = 0;
};

/// One draw of (H_A, H-bar_A). Throws EmptyTarget for A empty.
HittingSample simulate_hitting(const TorusGeometry& geom, const PointSet& target, const StartSpec& start,
                               std::uint64_t step_cap, WalkRng& rng, Clock clock = Clock::poissonized);

enum class Excursion { returned, escaped };

/// Z^d walk from start (in A) until it re-enters A at some time n >= 1 or leaves the
/// l_inf ball of radius R around the origin.
Excursion simulate_return_escape(const PointSet& target, const Point& start, Coord radius, WalkRng& rng);

/// Range of one torus trajectory up to time floor(t).
struct VisitRecord {
  TorusGeometry geom;
  Point start;
  double horizon = 0.0;
  std::vector<std::uint8_t> visited;
};

VisitRecord record_visits(const TorusGeometry& geom, const StartSpec& start, double t, WalkRng& rng);

struct VacantWindow {
  Point center;
  double horizon = 0.0;
  PointSet window;
  std::vector<std::uint8_t> bits;  ///< aligned with window.points()

  bool all_vacant() const;
};

/// omega_{x,t}(w) = 1 iff project(w) + center was not visited up to floor(t).
VacantWindow vacant_configuration(const Point& center, const PointSet& window, const VisitRecord& record);
VacantWindow vacant_configuration(const Point& center, double t, const PointSet& window, const TorusGeometry& geom,
                                  const StartSpec& start, WalkRng& rng);

void to_json(nlohmann::json& j, const VacantWindow& w);

void write_samples_header(std::ostream& os);
void write_sample_row(std::ostream& os, const HittingSample& s);

/// Runs `trials` independent trials on `workers` streams of WalkRng(seed, w).
/// Worker w owns the contiguous block of trials [w*T/W, (w+1)*T/W); per-worker
/// accumulators are merged in worker order, so the result depends only on
/// (seed, workers).
template <class Acc, class Trial>
Acc run_trials(std::uint64_t trials, std::uint64_t seed, unsigned workers, const Trial& trial) {
  if (workers == 0) workers = 1;
  std::vector<Acc> partial(workers);
  auto body = [&](unsigned w) {
    WalkRng rng(seed, w);
    const std::uint64_t lo = trials * w / workers;
    const std::uint64_t hi = trials * (w + 1) / workers;
    for (std::uint64_t i = lo; i < hi; ++i) trial(rng, partial[w]);
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
  }
  Acc total{};
  for (auto& p : partial) total.merge(p);
  return total;
}

}  // namespace torusrw
