// Acceptance suite: one PASS/FAIL line per criterion, with the measured numbers.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "torusrw/config.hpp"
#include "torusrw/experiments.hpp"
#include "torusrw/flows.hpp"
#include "torusrw/potential.hpp"
#include "torusrw/report.hpp"
#include "torusrw/variational.hpp"

using namespace torusrw;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const Point o{0, 0, 0};
const Point e1{1, 0, 0};

std::vector<Point> cube_points() {
  std::vector<Point> v;
  for (Coord x = 0; x < 2; ++x)
    for (Coord y = 0; y < 2; ++y)
      for (Coord z = 0; z < 2; ++z) v.push_back(Point{x, y, z});
  return v;
}

// Shared by criteria 4 and 5.
const GreenTable& green_table() {
  static const GreenTable t = GreenTable::compute(3, 64);
  return t;
}

std::vector<PointSet> one_and_two(Coord n) {
  return {PointSet({o}), PointSet({o, Point{n / 2, n / 2, n / 2}})};
}

std::string csv(const ExperimentReport& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

void print_failures(const ExperimentReport& r) {
  for (const auto& row : r.rows) {
    if (!row.pass) {
      std::printf("    failed row: %s N=%lld estimate=%.6g target=%.6g\n", row.label.c_str(),
                  static_cast<long long>(row.side), row.estimate, row.target);
    }
  }
}

const ReportRow* find_row(const ExperimentReport& r, const std::string& label, std::int64_t side) {
  for (const auto& row : r.rows) {
    if (row.label == label && row.side == side) return &row;
  }
  return nullptr;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome lemma_identity() {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_rel = 0.0, worst_ratio_over_d = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (Coord n : {4, 8, 16}) {
      const TorusGeometry g(n, d);
      for (int k = 0; k < 100; ++k) {
        TorusField h(g);
        for (std::uint64_t x = 0; x < g.volume(); ++x) h[x] = normal(gen);
        const TorusFlow l = uniformize_flow(h);
        const TorusField div = divergence_field(l);
        const double nu = h.mean(), scale = static_cast<double>(n) * h.sup_norm();
        for (std::uint64_t x = 0; x < g.volume(); ++x) {
          worst_rel = std::max(worst_rel, std::abs(div[x] + h[x] - nu) / scale);
        }
        worst_ratio_over_d = std::max(worst_ratio_over_d, l.sup_norm() / scale / (2.0 * d));
      }
    }
  }
  return {worst_rel <= 1e-10 && worst_ratio_over_d <= 1.0,
          "max relative residual " + fmt("%.2e", worst_rel) + ", max |L|/(2d N |h|) " + fmt("%.3f", worst_ratio_over_d)};
}

Outcome redirecting_identity() {
  bool pass = true;
  std::string detail;
  for (int m = 0; m < 2; ++m) {
    double worst = 0.0, constant = 0.0;
    std::vector<double> scaled;
    for (Coord n : {8, 12, 16}) {
      const TorusGeometry g(n, 3);
      const PointSet b = PointSet::on_torus(one_and_two(n)[static_cast<std::size_t>(m)].points(), g);
      const ThomsonCompetitor tc = thomson_competitor(b, g, std::nullopt, SolverOptions{1e-12, 0});
      worst = std::max(worst, tc.identity_error);
      scaled.push_back(tc.redirect_sup * static_cast<double>(n * n));
      constant = std::max(constant, scaled.back());
    }
    // a bounded sequence: the largest N may not exceed the smallest by more than noise
    const bool bounded = scaled.back() <= scaled.front() * 1.05;
    pass = pass && worst <= 1e-10 && bounded;
    detail += (m == 0 ? "one point: " : "; two points: ");
    detail += "residual " + fmt("%.2e", worst) + ", |J|N^2 =";
    for (double s : scaled) detail += " " + fmt("%.4f", s);
    detail += " (constant " + fmt("%.4f", constant) + ")";
  }
  return {pass, detail};
}

Outcome sandwich() {
  bool pass = true;
  std::string detail;
  for (std::size_t m = 0; m < 2; ++m) {
    ExperimentConfig cfg;
    cfg.sides = {8, 12};
    cfg.windows.assign(m + 1, PointSet({o}));
    cfg.capacity_radius = 16;
    const ExperimentReport r = run_capacity_convergence(cfg);
    for (Coord n : cfg.sides) {
      const ReportRow* lower = find_row(r, "1 / thomson <= N^d / E[H_B]", n);
      const ReportRow* upper = find_row(r, "N^d / E[H_B] <= dirichlet", n);
      if (!lower || !upper) {
        pass = false;
        detail += " missing bound at N=" + std::to_string(n);
        continue;
      }
      pass = pass && lower->pass && upper->pass;
      detail += (detail.empty() ? "" : "; ") + std::to_string(m + 1) + "pt N=" + std::to_string(n) + ": " +
                fmt("%.5f", lower->estimate) + " <= " + fmt("%.5f", lower->target) + " <= " +
                fmt("%.5f", upper->target);
    }
  }
  return {pass, detail};
}

Outcome capacity_cross_validation() {
  const std::vector<std::pair<std::string, PointSet>> corpus{
      {"singleton", PointSet({o})},
      {"pair", PointSet({o, e1})},
      {"L-tromino", PointSet({o, e1, Point{0, 1, 0}})},
      {"cube", PointSet(cube_points())}};
  const GreenTable& t = green_table();
  const double g00 = t.extrapolated(o), g01 = t.extrapolated(e1);
  bool pass = true;
  std::string detail = "g(0,0) ~ " + fmt("%.6f", g00);
  double single = 0.0, pair = 0.0;
  for (const auto& [name, set] : corpus) {
    const CapacityEstimate eq = capacity(set, 48, CapacityMethod::equilibrium);
    const CapacityEstimate dir = capacity(set, 48, CapacityMethod::dirichlet_upper);
    const double gap = std::abs(eq.value - dir.value);
    pass = pass && gap <= eq.error_bound + dir.error_bound;
    detail += "; " + name + " " + fmt("%.5f", eq.extrapolated()) + " (|eq-dir| " + fmt("%.1e", gap) + ")";
    if (name == "singleton") single = eq.extrapolated();
    if (name == "pair") pair = eq.extrapolated();
  }
  const double single_err = std::abs(single - 1.0 / g00);
  const double pair_err = std::abs(pair - 2.0 / (g00 + g01));
  pass = pass && single_err <= 1e-2 && pair_err <= 1e-3;
  detail += "; |cap{0} - 1/g| " + fmt("%.1e", single_err) + ", |cap pair - 2/(g00+g01)| " + fmt("%.1e", pair_err);
  return {pass, detail};
}

Outcome hitting_identity() {
  const GreenTable& t = green_table();
  const PointSet single({o}), pair({o, e1}), tromino({o, e1, Point{0, 1, 0}}), cube(cube_points());
  const std::vector<std::pair<Point, const PointSet*>> cases{
      {o, &single},          {Point{4, 0, 0}, &single},  {Point{1, 0, 0}, &pair}, {Point{0, 0, 5}, &pair},
      {Point{-3, 2, 1}, &pair}, {Point{1, 1, 0}, &tromino}, {Point{2, -2, 3}, &tromino},
      {Point{1, 1, 1}, &cube},  {Point{3, 0, 0}, &cube},    {Point{-6, 5, 4}, &cube}};
  double worst = 0.0, worst_bound = 0.0;
  bool within_bound = true;
  for (const auto& [x, set] : cases) {
    const HittingIdentity h = hitting_identity_check(x, *set, t);
    worst = std::max(worst, h.residual);
    worst_bound = std::max(worst_bound, h.bound);
    within_bound = within_bound && h.residual <= h.bound;
  }
  return {worst <= 1e-3 && within_bound,
          std::to_string(cases.size()) + " pairs, max residual " + fmt("%.2e", worst) + ", max bound " +
              fmt("%.2e", worst_bound)};
}

Outcome monte_carlo(const ExperimentReport& r, const std::string& headline_label) {
  print_failures(r);
  std::string detail;
  for (const auto& row : r.rows) {
    if (row.label == headline_label) {
      detail += (detail.empty() ? "" : ", ") + std::string("N=") + std::to_string(row.side) + " " +
                fmt("%.4f", row.estimate) + "+-" + fmt("%.4f", row.std_error);
    }
  }
  return {r.all_pass(), headline_label + ": " + detail};
}

Outcome theorem1() {
  ExperimentConfig cfg;
  cfg.trials = 100000;
  cfg.workers = workers();
  const ExperimentReport r = run_theorem1(cfg);
  Outcome out = monte_carlo(r, "deviation");
  if (const ReportRow* p = find_row(r, "P[H_B > uN^d]", 20)) out.detail += "; target " + fmt("%.4f", p->target);
  return out;
}

Outcome exponentiality() {
  ExperimentConfig cfg;
  cfg.sides = {8, 12, 16};
  cfg.trials = 1000000;
  cfg.workers = workers();
  return monte_carlo(run_exponentiality(cfg), "sup deviation * N^(d-2)");
}

Outcome independence() {
  ExperimentConfig cfg;
  cfg.sides = {20};
  cfg.windows = {PointSet({o}), PointSet({o})};
  cfg.threshold = 0.02;
  cfg.trials = 100000;
  cfg.workers = workers();
  return monte_carlo(run_independence(cfg), "joint - product");
}

Outcome spectral() {
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    for (Coord n = 2; n <= 8; ++n) {
      const TorusGeometry g(n, d);
      const auto vol = static_cast<Eigen::Index>(g.volume());
      Eigen::MatrixXd p = Eigen::MatrixXd::Zero(vol, vol);
      for (std::uint64_t x = 0; x < g.volume(); ++x)
        for (int port = 0; port < g.ports(); ++port)
          p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(g.neighbor(x, port))) += 1.0 / g.ports();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
      const double brute = 1.0 - es.eigenvalues()(vol - 2);
      const double closed = (1.0 - std::cos(2.0 * std::numbers::pi / static_cast<double>(n))) / d;
      worst = std::max({worst, std::abs(brute - closed), std::abs(spectral_gap(g) - closed)});
    }
  }
  return {worst <= 1e-10, "max |gap - (1 - cos(2pi/N))/d| " + fmt("%.2e", worst)};
}

Outcome determinism() {
  ExperimentConfig cfg;
  cfg.sides = {8, 12};
  cfg.trials = 20000;
  cfg.seed = 2024;
  cfg.workers = 3;
  bool pass = csv(run_theorem1(cfg)) == csv(run_theorem1(cfg));
  pass = pass && csv(run_exponentiality(cfg)) == csv(run_exponentiality(cfg));
  cfg.windows = {PointSet({o}), PointSet({o})};
  pass = pass && csv(run_independence(cfg)) == csv(run_independence(cfg));
  return {pass, "theorem1, exponentiality and independence reruns compared byte for byte"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"uniformizing flow identity", lemma_identity},
      {"redirecting flow identity", redirecting_identity},
      {"variational sandwich", sandwich},
      {"capacity cross-validation", capacity_cross_validation},
      {"hitting identity", hitting_identity},
      {"vacancy law trend", theorem1},
      {"exponential hitting time", exponentiality},
      {"window independence", independence},
      {"spectral gap", spectral},
      {"determinism", determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %zu: %s (%.1f s): %s\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), secs, out.detail.c_str());
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
