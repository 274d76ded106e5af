#pragma once

// Experiment drivers. Each returns a report whose rows carry their own verdicts.

#include <cstdint>
#include <vector>

#include "torusrw/config.hpp"
#include "torusrw/lattice.hpp"
#include "torusrw/report.hpp"

namespace torusrw {

/// P[H_B > u N^d] against prod_i exp(-u cap(K_i)), discrete clock, uniform start.
/// Trend rows: no consecutive increase of the deviation beyond 3 sigma, a significant
/// decrease from the first to the last N, and deviation <= threshold at the last N.
ExperimentReport run_theorem1(const ExperimentConfig& cfg);

/// sup_t |P[Hbar_A > t E[H_A]] - e^{-t}| over t = 0.1, ..., 3.0, with E[H_A] exact.
/// The deviation times N^{d-2} is held to the constant max_N tau_2 N^{d-2} / E[H_A].
ExperimentReport run_exponentiality(const ExperimentConfig& cfg);

/// Covariance of the two window vacancy events at time u N^d on shared trajectories.
ExperimentReport run_independence(const ExperimentConfig& cfg);

/// cap(psi(B)) and N^d / E[H_B] against sum_i cap(K_i), with the variational bracket.
ExperimentReport run_capacity_convergence(const ExperimentConfig& cfg);

/// Flow identities of the torus competitor construction and the uniformizing flow.
ExperimentReport flows_check(const ExperimentConfig& cfg);

/// t = 0.1, 0.2, ..., 3.0
std::vector<double> exponentiality_grid();

/// Relaxation time 1 / gap of the torus walk.
double relaxation_time(const TorusGeometry& geom);

/// prod_i exp(-u cap(K_i)) and a bound on its error from the capacity truncation.
struct VacancyTarget {
  double value = 1.0;
  double error = 0.0;
};
VacancyTarget vacancy_target(const std::vector<PointSet>& windows, double u, Coord capacity_radius);

/// Counts of the two vacancy events on n shared trajectories.
struct PairCounts {
  std::uint64_t n = 0, first = 0, second = 0, both = 0;
  void merge(const PairCounts& o) {
    n += o.n;
    first += o.first;
    second += o.second;
    both += o.both;
  }
};

struct Covariance {
  double value = 0.0;
  double std_error = 0.0;
};

/// joint - product, with the delta-method standard error.
Covariance covariance(const PairCounts& c);

/// Sample std / sqrt(n) for a proportion k / n.
double proportion_stderr(std::uint64_t k, std::uint64_t n);

/// Per-experiment seed derived from the configured seed, the experiment and N.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, Coord side);

}  // namespace torusrw
