#pragma once

// Construction of an admissible flow for the torus Thomson principle out of the
// optimal Z^d flow of psi(B):
//
//   I*  = restriction of I^{psi(B)} to the edges of T' (wrap-around edges get 0)
//   g   = (div I*) 1_S, the charge I* leaves on the box boundary
//   K   = sum over x in S of fiber flows spreading g(x) evenly along a fiber
//   L^h = flow with div L^h + h = nu(h), built one coordinate at a time
//   J   = K + L^{div K + g}, so that div J + g = -N^{-d}
//
// I* + J is then a unit flow from B to the uniform distribution.

#include <map>
#include <optional>

#include "torusrw/fields.hpp"
#include "torusrw/lattice.hpp"
#include "torusrw/potential.hpp"

namespace torusrw {

/// I*_{x,x'} = I_{psi(x), psi(x')} when psi(x), psi(x') are neighbours in Z^d, else 0.
TorusFlow restrict_flow(const LatticeFlow& flow, const TorusGeometry& geom, const Point& basepoint);

struct BoundaryCharge {
  TorusField values;  ///< (div I*) on S, zero on C
  double sup = 0.0;   ///< max |values|
};

BoundaryCharge boundary_charge(const TorusFlow& restricted, const Point& basepoint);

/// L^h with (div L^h + h)(x) = nu(h) at every x.
TorusFlow uniformize_flow(const TorusField& h);

/// K^x: edge (x + i e, x + (i+1) e) carries -charge (N - (i+1)) / N for i = 0..N-2 and
/// the closing edge (x + (N-1) e, x) carries 0.
TorusFlow fiber_flow(const Point& base, double charge, const Fiber& fiber, const TorusGeometry& geom);

/// Adds K^x to an existing flow.
void add_fiber_flow(TorusFlow& acc, double charge, const Fiber& fiber);

struct RedirectingFlow {
  TorusFlow flow;  ///< J
  TorusFlow fibers;  ///< K
  BoundaryCharge charge;  ///< g
  double residual_charge_sup = 0.0;  ///< |div K + g|_inf
};

RedirectingFlow redirecting_flow(const TorusFlow& restricted, const Point& basepoint);

struct ThomsonCompetitor {
  TorusFlow flow;  ///< I* + J
  Point basepoint;
  Coord margin = 0;
  PointSet embedded;  ///< psi(B) in T'
  double box_capacity = 0.0;  ///< cap_R(psi(B)) = 1 / (I^{psi(B)}, I^{psi(B)}) over the box
  double lattice_energy = 0.0;  ///< (I^{psi(B)}, I^{psi(B)})_{Z^d}
  double restricted_energy = 0.0;  ///< (I*, I*)_T
  double redirect_energy = 0.0;  ///< (J, J)_T
  double redirect_sup = 0.0;  ///< |J|_inf
  double charge_sup = 0.0;  ///< |g|_inf
  double charge_total = 0.0;  ///< sum_S g
  double identity_error = 0.0;  ///< max_x |div J(x) + g(x) + N^{-d}|
  double energy = 0.0;  ///< (I* + J, I* + J)_T, validated; >= E[H_B] N^{-d}
};

/// Builds and validates I* + J for B (torus points). The Z^d flow is computed on the box
/// of the given radius (default 2N) around the centre of T'.
ThomsonCompetitor thomson_competitor(const PointSet& target, const TorusGeometry& geom,
                                     std::optional<Coord> radius = std::nullopt, const SolverOptions& opts = {});

}  // namespace torusrw
