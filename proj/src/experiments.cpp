#include "torusrw/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "torusrw/errors.hpp"
#include "torusrw/flows.hpp"
#include "torusrw/potential.hpp"
#include "torusrw/variational.hpp"
#include "torusrw/walk.hpp"

namespace torusrw {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ExperimentReport start_report(const std::string& name, const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport r;
  r.experiment = name;
  r.metadata.seed = cfg.seed;
  r.metadata.workers = cfg.workers;
  r.metadata.version = version_string();
  return r;
}

double steps_for(double u, Coord side, int dim) {
  return std::floor(u * std::pow(static_cast<double>(side), dim));
}

struct Survivors {
  std::uint64_t n = 0, alive = 0;
  void merge(const Survivors& o) {
    n += o.n;
    alive += o.alive;
  }
};

struct Tails {
  std::vector<std::uint64_t> above;
  std::uint64_t n = 0, truncated = 0;
  void merge(const Tails& o) {
    if (above.size() < o.above.size()) above.resize(o.above.size(), 0);
    for (std::size_t k = 0; k < o.above.size(); ++k) above[k] += o.above[k];
    n += o.n;
    truncated += o.truncated;
  }
};

// Least-squares slope of log y against log x.
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::vector<double> exponentiality_grid() {
  std::vector<double> t;
  for (int k = 1; k <= 30; ++k) t.push_back(k / 10.0);
  return t;
}

double relaxation_time(const TorusGeometry& geom) { return 1.0 / spectral_gap(geom); }

double proportion_stderr(std::uint64_t k, std::uint64_t n) {
  if (n < 2) return 0.0;
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double var = p * (1.0 - p) * static_cast<double>(n) / static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

Covariance covariance(const PairCounts& c) {
  if (c.n == 0) return {};
  const double n = static_cast<double>(c.n);
  const double p1 = static_cast<double>(c.first) / n;
  const double p2 = static_cast<double>(c.second) / n;
  const double p12 = static_cast<double>(c.both) / n;
  // Influence function phi = V1 V2 - p2 V1 - p1 V2, using V_i^2 = V_i.
  const double mean_phi = p12 - 2.0 * p1 * p2;
  const double mean_phi2 = p12 * (1.0 - 2.0 * p1 - 2.0 * p2 + 2.0 * p1 * p2) + p2 * p2 * p1 + p1 * p1 * p2;
  const double var = std::max(0.0, mean_phi2 - mean_phi * mean_phi);
  return {p12 - p1 * p2, std::sqrt(var / n)};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, Coord side) {
  // splitmix64 finaliser over the combined input
  std::uint64_t z = seed ^ (tag * 0x9e3779b97f4a7c15ULL) ^ (static_cast<std::uint64_t>(side) << 32);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

VacancyTarget vacancy_target(const std::vector<PointSet>& windows, double u, Coord capacity_radius) {
  double sum = 0.0, lower = 0.0;
  for (const auto& k : windows) {
    const Coord r = std::max(capacity_radius, 2 * centred_radius(k) + 2);
    const CapacityEstimate c = capacity(k, r, CapacityMethod::equilibrium);
    sum += c.extrapolated();
    lower += std::max(0.0, c.lower());
  }
  // cap(K) lies in [lower, value] and extrapolated() sits inside it; the product law
  // moves by at most u (extrapolated - lower) in the exponent.
  const double value = std::exp(-u * sum);
  return {value, std::exp(-u * lower) - value};
}

ExperimentReport run_theorem1(const ExperimentConfig& cfg) {
  const Stopwatch clock;
  ExperimentReport rep = start_report("theorem1", cfg);
  if (cfg.dim < 3) throw ConfigError("theorem1 needs d >= 3");
  const VacancyTarget target = vacancy_target(cfg.windows, cfg.u, cfg.capacity_radius);

  std::vector<double> dev, se;
  for (Coord n : cfg.sides) {
    const TorusGeometry geom(n, cfg.dim);
    const TorusWalker walker(geom, {cfg.target_for(n)});
    const auto cap = static_cast<std::uint64_t>(steps_for(cfg.u, n, cfg.dim));
    const auto acc = run_trials<Survivors>(cfg.trials, derive_seed(cfg.seed, 1, n), cfg.workers,
                                           [&](WalkRng& rng, Survivors& s) {
                                             const auto x0 = walker.draw_start(UniformStart{}, rng);
                                             ++s.n;
                                             if (walker.hit(x0, cap, rng, Clock::discrete).truncated) ++s.alive;
                                           });
    const double p = static_cast<double>(acc.alive) / static_cast<double>(acc.n);
    const double s = proportion_stderr(acc.alive, acc.n);
    rep.rows.push_back(make_row("theorem1", "P[H_B > uN^d]", n, p, s, target.value, target.error, 0.0, Rule::info));
    dev.push_back(std::abs(p - target.value));
    se.push_back(s);
    rep.rows.push_back(make_row("theorem1", "deviation", n, dev.back(), s, 0.0, target.error, 0.0, Rule::info));
  }
  for (std::size_t k = 1; k < dev.size(); ++k) {
    rep.rows.push_back(make_row("theorem1", "deviation change from N=" + std::to_string(cfg.sides[k - 1]),
                                cfg.sides[k], dev[k] - dev[k - 1], std::hypot(se[k], se[k - 1]), 0.0, 0.0, 0.0,
                                Rule::upper));
  }
  if (dev.size() > 1) {
    rep.rows.push_back(make_row("theorem1", "deviation change first to last N", cfg.sides.back(),
                                dev.back() - dev.front(), std::hypot(se.back(), se.front()), 0.0, 0.0, 0.0,
                                Rule::below));
  }
  rep.rows.push_back(make_row("theorem1", "deviation at largest N", cfg.sides.back(), dev.back(), se.back(), 0.0,
                              target.error, cfg.threshold, Rule::upper));
  rep.metadata.wall_seconds = clock.seconds();
  return rep;
}

ExperimentReport run_exponentiality(const ExperimentConfig& cfg) {
  const Stopwatch clock;
  ExperimentReport rep = start_report("exponentiality", cfg);
  const std::vector<double> grid = exponentiality_grid();

  struct PerSide {
    Coord n;
    double expected, dev, se, tau;
  };
  std::vector<PerSide> results;
  for (Coord n : cfg.sides) {
    const TorusGeometry geom(n, cfg.dim);
    const Point center = cfg.centers_for(n).front();
    std::vector<Point> pts;
    for (const auto& w : cfg.windows.front()) pts.push_back(center + w);
    const PointSet a = PointSet::on_torus(pts, geom);
    const double eh = expected_hitting_exact(a, geom);
    const TorusWalker walker(geom, {a});
    // P[Hbar > 60 E[H]] is below e^{-50}: truncation only guards against runaway loops.
    const auto cap = static_cast<std::uint64_t>(std::ceil(60.0 * std::max(eh, 1.0)));
    const auto acc = run_trials<Tails>(cfg.trials, derive_seed(cfg.seed, 2, n), cfg.workers,
                                       [&](WalkRng& rng, Tails& t) {
                                         if (t.above.empty()) t.above.assign(grid.size(), 0);
                                         const auto x0 = walker.draw_start(UniformStart{}, rng);
                                         const HittingSample s = walker.hit(x0, cap, rng, Clock::poissonized);
                                         ++t.n;
                                         if (s.truncated) ++t.truncated;
                                         for (std::size_t k = 0; k < grid.size(); ++k) {
                                           if (s.truncated || s.continuous_time > grid[k] * eh) ++t.above[k];
                                         }
                                       });
    double dev = 0.0, se = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double p = static_cast<double>(acc.above[k]) / static_cast<double>(acc.n);
      const double d = std::abs(p - std::exp(-grid[k]));
      if (d >= dev) {
        dev = d;
        se = proportion_stderr(acc.above[k], acc.n);
      }
    }
    const double frac = static_cast<double>(acc.truncated) / static_cast<double>(acc.n);
    if (frac > 1e-3) {
      rep.notes.push_back("N=" + std::to_string(n) + ": " + std::to_string(frac) + " of trials truncated");
    }
    results.push_back({n, eh, dev, se, relaxation_time(geom)});
  }
  // Aldous-Brown: |P[Hbar > t E] - e^{-t}| <= tau_2 / E for reversible chains, which
  // pins the constant in the N^{2-d} rate over the tested range.
  double constant = 0.0;
  for (const auto& r : results) {
    constant = std::max(constant, r.tau * std::pow(static_cast<double>(r.n), cfg.dim - 2) / r.expected);
  }
  for (const auto& r : results) {
    const double scale = std::pow(static_cast<double>(r.n), cfg.dim - 2);
    const double n2 = static_cast<double>(r.n) * static_cast<double>(r.n);
    rep.rows.push_back(make_row("exponentiality", "E[H_A] exact", r.n, r.expected, 0.0, 0.0, 0.0, 0.0, Rule::info));
    rep.rows.push_back(make_row("exponentiality", "sup deviation", r.n, r.dev, r.se, 0.0, 0.0, 0.0, Rule::info));
    rep.rows.push_back(make_row("exponentiality", "sup deviation * E[H_A]/N^2", r.n, r.dev * r.expected / n2,
                                r.se * r.expected / n2, 0.0, 0.0, 0.0, Rule::info));
    rep.rows.push_back(make_row("exponentiality", "sup deviation * N^(d-2)", r.n, r.dev * scale, r.se * scale,
                                constant, 0.0, 0.0, Rule::upper));
  }
  rep.metadata.wall_seconds = clock.seconds();
  return rep;
}

ExperimentReport run_independence(const ExperimentConfig& cfg) {
  const Stopwatch clock;
  ExperimentReport rep = start_report("independence", cfg);
  if (cfg.window_count() != 2) throw ConfigError("independence needs exactly two windows");
  if (cfg.dim < 3) throw ConfigError("independence needs d >= 3");
  const VacancyTarget t1 = vacancy_target({cfg.windows[0]}, cfg.u, cfg.capacity_radius);
  const VacancyTarget t2 = vacancy_target({cfg.windows[1]}, cfg.u, cfg.capacity_radius);
  for (Coord n : cfg.sides) {
    const TorusGeometry geom(n, cfg.dim);
    const auto centers = cfg.centers_for(n);
    std::vector<PointSet> targets;
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<Point> pts;
      for (const auto& w : cfg.windows[i]) pts.push_back(centers[i] + w);
      targets.push_back(PointSet::on_torus(pts, geom));
    }
    const TorusWalker walker(geom, targets);
    const auto cap = static_cast<std::uint64_t>(steps_for(cfg.u, n, cfg.dim));
    const auto acc = run_trials<PairCounts>(cfg.trials, derive_seed(cfg.seed, 3, n), cfg.workers,
                                            [&](WalkRng& rng, PairCounts& c) {
                                              const auto x0 = walker.draw_start(UniformStart{}, rng);
                                              const auto e = walker.entrances(x0, cap, rng);
                                              ++c.n;
                                              if (!e[0]) ++c.first;
                                              if (!e[1]) ++c.second;
                                              if (!e[0] && !e[1]) ++c.both;
                                            });
    const double p1 = static_cast<double>(acc.first) / static_cast<double>(acc.n);
    const double p2 = static_cast<double>(acc.second) / static_cast<double>(acc.n);
    const double p12 = static_cast<double>(acc.both) / static_cast<double>(acc.n);
    rep.rows.push_back(make_row("independence", "P[window 1 vacant]", n, p1, proportion_stderr(acc.first, acc.n),
                                t1.value, t1.error, 0.0, Rule::info));
    rep.rows.push_back(make_row("independence", "P[window 2 vacant]", n, p2, proportion_stderr(acc.second, acc.n),
                                t2.value, t2.error, 0.0, Rule::info));
    rep.rows.push_back(make_row("independence", "P[both vacant]", n, p12, proportion_stderr(acc.both, acc.n),
                                t1.value * t2.value, t1.error + t2.error, 0.0, Rule::info));
    const Covariance cov = covariance(acc);
    rep.rows.push_back(make_row("independence", "joint - product", n, cov.value, cov.std_error, 0.0, 0.0,
                                cfg.threshold, Rule::within));
  }
  rep.metadata.wall_seconds = clock.seconds();
  return rep;
}

namespace {

// Dirichlet upper bound from the shifted window profiles. Profiles are harmonic
// extensions of 1_{K_i} on the widest box that keeps the placed supports apart and
// inside the box interior; the indicator profile is the fallback.
std::optional<double> dirichlet_bound(const ExperimentConfig& cfg, const TorusGeometry& geom, const PointSet& b) {
  const auto centers = cfg.centers_for(geom.side());
  BasepointChoice choice;
  try {
    choice = choose_basepoint(centers, cfg.windows, geom);
  } catch (const MarginTooSmall&) {
    return std::nullopt;
  }
  for (Coord rho = choice.margin - 1; rho >= 0; --rho) {
    std::vector<PlacedWindow> placed;
    bool fits = true;
    for (std::size_t i = 0; i < cfg.windows.size(); ++i) {
      const PointSet& k = cfg.windows[i];
      if (rho == 0) {
        LatticeField ind(LatticeBox::bounding(k));
        for (const auto& p : k) ind.set(p, 1.0);
        placed.push_back({std::move(ind), centers[i]});
        continue;
      }
      if (rho <= k.linf_radius()) {
        fits = false;
        break;
      }
      placed.push_back({harmonic_extension(k, LatticeBox::centered(Point::zero(cfg.dim), rho)), centers[i]});
    }
    if (!fits) continue;
    try {
      const TorusField f = build_test_function(placed, choice.basepoint, geom);
      return torus_dirichlet_value(f, b);
    } catch (const SupportsOverlap&) {
    } catch (const DegenerateNormalizer&) {
    }
  }
  return std::nullopt;
}

}  // namespace

ExperimentReport run_capacity_convergence(const ExperimentConfig& cfg) {
  const Stopwatch clock;
  ExperimentReport rep = start_report("capacity", cfg);
  if (cfg.dim < 3) throw ConfigError("capacity convergence needs d >= 3");
  double sum = 0.0, sum_err = 0.0;
  for (const auto& k : cfg.windows) {
    const CapacityEstimate c =
        capacity(k, std::max(cfg.capacity_radius, 2 * centred_radius(k) + 2), CapacityMethod::equilibrium);
    sum += c.extrapolated();
    sum_err += c.error_bound;
  }
  rep.rows.push_back(make_row("capacity", "sum cap(K_i)", 0, sum, 0.0, sum, sum_err, 0.0, Rule::info));
  for (Coord n : cfg.sides) {
    const TorusGeometry geom(n, cfg.dim);
    const PointSet b = cfg.target_for(n);
    const auto centers = cfg.centers_for(n);
    const BasepointChoice choice = choose_basepoint(centers, cfg.windows, geom);
    std::vector<Point> embedded;
    for (const auto& x : b) embedded.push_back(box_bijection(x, choice.basepoint, geom));
    const PointSet psi_b(std::move(embedded));
    const Coord r = std::max(cfg.capacity_radius, 2 * centred_radius(psi_b) + 2);
    const CapacityEstimate c = capacity(psi_b, r, CapacityMethod::equilibrium);
    const double gap_scale = std::pow(static_cast<double>(n), cfg.dim - 2);
    rep.rows.push_back(make_row("capacity", "cap(psi(B))", n, c.extrapolated(), 0.0, sum, c.error_bound + sum_err,
                                0.0, Rule::info));
    rep.rows.push_back(make_row("capacity", "(sum cap(K_i) - cap(psi(B))) * N^(d-2)", n,
                                (sum - c.extrapolated()) * gap_scale, 0.0, 0.0,
                                (c.error_bound + sum_err) * gap_scale, 0.0, Rule::info));
    const double exact = static_cast<double>(geom.volume()) / expected_hitting_exact(b, geom);
    rep.rows.push_back(make_row("capacity", "N^d / E[H_B]", n, exact, 0.0, sum, sum_err, 0.0, Rule::info));

    const ThomsonCompetitor tc = thomson_competitor(b, geom, std::nullopt, SolverOptions{1e-12, 0});
    rep.rows.push_back(
        make_row("capacity", "1 / thomson <= N^d / E[H_B]", n, 1.0 / tc.energy, 0.0, exact, 0.0, 1e-9, Rule::upper));
    if (const auto dir = dirichlet_bound(cfg, geom, b)) {
      rep.rows.push_back(
          make_row("capacity", "N^d / E[H_B] <= dirichlet", n, exact, 0.0, *dir, 0.0, 1e-9, Rule::upper));
    } else {
      rep.notes.push_back("N=" + std::to_string(n) + ": no admissible test function, Dirichlet bound skipped");
    }
  }
  rep.metadata.wall_seconds = clock.seconds();
  return rep;
}

ExperimentReport flows_check(const ExperimentConfig& cfg) {
  const Stopwatch clock;
  ExperimentReport rep = start_report("flows", cfg);
  if (cfg.dim < 3) throw ConfigError("flows check needs d >= 3");
  std::vector<double> sides, j_scaled, g_scaled;
  for (Coord n : cfg.sides) {
    const TorusGeometry geom(n, cfg.dim);
    const PointSet b = cfg.target_for(n);
    const ThomsonCompetitor tc = thomson_competitor(b, geom, std::nullopt, SolverOptions{1e-12, 0});
    const double scale = std::pow(static_cast<double>(n), cfg.dim - 1);
    rep.rows.push_back(make_row("flows", "max |div J + g + N^-d|", n, tc.identity_error, 0.0, 0.0, 0.0, 1e-10,
                                Rule::upper));
    rep.rows.push_back(make_row("flows", "sum_S g", n, tc.charge_total, 0.0, -1.0, 0.0, 1e-9, Rule::within));
    rep.rows.push_back(make_row("flows", "|g|_inf * N^(d-1)", n, tc.charge_sup * scale, 0.0, 0.0, 0.0, 0.0,
                                Rule::info));
    rep.rows.push_back(make_row("flows", "|J|_inf * N^(d-1)", n, tc.redirect_sup * scale, 0.0, 0.0, 0.0, 0.0,
                                Rule::info));
    rep.rows.push_back(make_row("flows", "(J,J) * N^(d-2)", n,
                                tc.redirect_energy * std::pow(static_cast<double>(n), cfg.dim - 2), 0.0, 0.0, 0.0,
                                0.0, Rule::info));
    rep.rows.push_back(make_row("flows", "(I*,I*) <= (I,I)", n, tc.restricted_energy, 0.0, tc.lattice_energy, 0.0,
                                1e-12, Rule::upper));
    const double exact = expected_hitting_exact(b, geom) / static_cast<double>(geom.volume());
    rep.rows.push_back(make_row("flows", "E[H_B] N^-d <= (I*+J, I*+J)", n, exact, 0.0, tc.energy, 0.0, 1e-9,
                                Rule::upper));
    sides.push_back(static_cast<double>(n));
    j_scaled.push_back(tc.redirect_sup * scale);
    g_scaled.push_back(tc.charge_sup * scale);
  }
  if (sides.size() > 1) {
    // A sequence bounded by a constant has no positive power-law growth; 0.25 absorbs
    // the curvature of the pre-asymptotic range.
    rep.rows.push_back(make_row("flows", "growth exponent of |J|_inf * N^(d-1)", 0, log_slope(sides, j_scaled), 0.0,
                                0.0, 0.0, 0.25, Rule::upper));
    rep.rows.push_back(make_row("flows", "growth exponent of |g|_inf * N^(d-1)", 0, log_slope(sides, g_scaled), 0.0,
                                0.0, 0.0, 0.25, Rule::upper));
    rep.rows.push_back(make_row("flows", "max |J|_inf * N^(d-1)", 0,
                                *std::max_element(j_scaled.begin(), j_scaled.end()), 0.0, 0.0, 0.0, 0.0, Rule::info));
  }

  // Uniformizing flow on random fields.
  WalkRng rng(derive_seed(cfg.seed, 5, 0), 0);
  for (Coord n : cfg.sides) {
    const TorusGeometry geom(n, cfg.dim);
    double worst_rel = 0.0, worst_ratio = 0.0;
    for (int rep_i = 0; rep_i < 10; ++rep_i) {
      TorusField h(geom);
      for (std::uint64_t x = 0; x < geom.volume(); ++x) h[x] = 2.0 * rng.uniform() - 1.0;
      const TorusFlow l = uniformize_flow(h);
      const TorusField div = divergence_field(l);
      const double nu = h.mean(), sup = h.sup_norm();
      for (std::uint64_t x = 0; x < geom.volume(); ++x) {
        worst_rel = std::max(worst_rel, std::abs(div[x] + h[x] - nu) / (static_cast<double>(n) * sup));
      }
      worst_ratio = std::max(worst_ratio, l.sup_norm() / (static_cast<double>(n) * sup));
    }
    rep.rows.push_back(make_row("flows", "max |div L + h - nu(h)| / (N |h|)", n, worst_rel, 0.0, 0.0, 0.0, 1e-10,
                                Rule::upper));
    rep.rows.push_back(make_row("flows", "max |L| / (N |h|)", n, worst_ratio, 0.0, 2.0 * cfg.dim, 0.0, 0.0,
                                Rule::upper));
  }
  rep.metadata.wall_seconds = clock.seconds();
  return rep;
}

}  // namespace torusrw
