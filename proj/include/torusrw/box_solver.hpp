#pragma once

// Iterative solves of the walk's Laplace equation (I - P) u = b on a box in Z^d
// with u = 0 outside the box, and on the torus.

#include <cstddef>
#include <optional>

#include "torusrw/fields.hpp"

namespace torusrw {

struct SolverOptions {
  /// max-norm bound on the final residual b - (I - P) u
  double tolerance = 1e-10;
  /// 0 picks a bound from the problem size
  std::size_t max_iterations = 0;
};

struct SolveStats {
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// phi = 1 on `ones`, discrete harmonic on the rest of the box, 0 outside.
/// phi(z) is the probability to hit `ones` before leaving the box.
LatticeField harmonic_extension(const PointSet& ones, const LatticeBox& box, const SolverOptions& opts = {},
                                SolveStats* stats = nullptr);

/// G(z) = expected visits to `source` before leaving the box, started at z:
/// G = 1{z = source} + P G inside the box, 0 outside.
LatticeField killed_green(const Point& source, const LatticeBox& box, const SolverOptions& opts = {},
                          SolveStats* stats = nullptr);

/// h = 0 on A, h = 1 + P h off A, on the whole torus. h(x) = E_x[H_A].
TorusField torus_hitting_times(const PointSet& target, const TorusGeometry& geom, const SolverOptions& opts = {},
                               SolveStats* stats = nullptr);

}  // namespace torusrw
