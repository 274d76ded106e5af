#pragma once

// Potential theory of the simple random walk on Z^d, d >= 3, by finite-volume
// approximation: the walk is killed on leaving a box of radius R, every quantity
// below is the box version, and truncation errors are calibrated by comparing the
// radii R/2 and R against the c R^{2-d} decay of the Green function.

#include <map>
#include <string>
#include <vector>

#include "torusrw/box_solver.hpp"
#include "torusrw/fields.hpp"
#include "torusrw/lattice.hpp"

namespace torusrw {

struct BoundedValue {
  double value = 0.0;
  double error_bound = 0.0;
};

/// g(0, .) approximated by the Green function killed outside [-R, R]^d.
/// The box value increases to g as R grows; error_bound = kTruncationSafety c R^{2-d}
/// with c fitted from the radii R/2 and R at the origin.
class GreenTable {
 public:
  static GreenTable compute(int dim, Coord radius, const SolverOptions& opts = {});

  int dim() const { return values_.dim(); }
  Coord radius() const { return radius_; }
  /// G_R(0, x) = G_R(x, 0); zero outside the box.
  double at(const Point& x) const { return values_.at(x); }
  double error_bound() const { return error_bound_; }
  double decay_constant() const { return decay_constant_; }
  const LatticeField& values() const { return values_; }
  /// Richardson estimate of g(0, x) from the R/2 and R tables (valid for |x|_inf < R/2).
  double extrapolated(const Point& x) const;

 private:
  GreenTable(Coord radius, LatticeField values, LatticeField coarse, double c);

  Coord radius_;
  LatticeField values_;
  LatticeField coarse_;
  double decay_constant_;
  double error_bound_;
};

/// Single Green value with its truncation bound; builds a table.
BoundedValue green(const Point& x, Coord radius, const SolverOptions& opts = {});

/// Richardson step for a quantity whose error decays like R^{2-d}:
/// combines the values at radii r and 2r.
double richardson(double at_r, double at_2r, int dim);

struct EquilibriumMeasure {
  PointSet support;
  std::map<Point, double> weights;
  Coord radius = 0;

  double total() const;
  double weight(const Point& x) const;
};

/// Box centred on the (floored) midpoint of the bounding box of A.
LatticeBox capacity_box(const PointSet& set, Coord radius);
/// l_inf radius of A about the centre used by capacity_box.
Coord centred_radius(const PointSet& set);

/// e_A^{(R)}(x) = P_x[leave the box before returning to A], for x in A.
/// Decreases to e_A as R grows. Requires d >= 3 and R > 2 * centred_radius(A).
EquilibriumMeasure equilibrium_measure(const PointSet& set, Coord radius, const SolverOptions& opts = {});

/// Same measure, read off a precomputed hitting potential phi = harmonic_extension(A, box).
EquilibriumMeasure equilibrium_from_potential(const PointSet& set, const LatticeField& phi);

/// equilibrium: total mass of the box equilibrium measure; dirichlet_upper: Dirichlet
/// form of the harmonic extension; flow_energy_check: 1 / energy of the box flow I^A.
enum class CapacityMethod { equilibrium, dirichlet_upper, flow_energy_check };

/// Ratio between the certified truncation bound and the fitted c R^{2-d} term, which
/// leaves out the faster-decaying corrections.
inline constexpr double kTruncationSafety = 1.5;
std::string to_string(CapacityMethod m);

struct CapacityEstimate {
  double value = 0.0;  ///< box value, an upper bound on cap(A)
  CapacityMethod method = CapacityMethod::equilibrium;
  Coord radius = 0;
  double correction = 0.0;   ///< fitted c R^{2-d}
  double error_bound = 0.0;  ///< kTruncationSafety * correction; cap(A) in [lower(), value]

  double lower() const { return value - error_bound; }
  /// Richardson estimate of cap(A).
  double extrapolated() const { return value - correction; }
};

struct CapacityOptions {
  SolverOptions solver{};
  /// also solve at radius R/2 to calibrate error_bound
  bool calibrate = true;
};

CapacityEstimate capacity(const PointSet& set, Coord radius, CapacityMethod method, const CapacityOptions& opts = {});

struct HittingIdentity {
  double residual = 0.0;  ///< |phi_R(x) - sum_{x' in A} G(x - x') e_A(x')|
  double bound = 0.0;     ///< combined truncation bound of the inputs
  double hitting = 0.0;   ///< phi_R(x)
  double last_exit = 0.0; ///< the Green/equilibrium sum
};

/// Last-exit decomposition check. The box for phi is [-R, R]^d around the origin,
/// the same box as the Green table.
HittingIdentity hitting_identity_check(const Point& x, const PointSet& set, const GreenTable& table,
                                       const SolverOptions& opts = {});

struct OptimalFlow {
  LatticeFlow flow;
  double capacity = 0.0;  ///< box capacity used for normalisation
  LatticeField hitting;   ///< phi_R
};

/// I^A_{x,x'} = -(phi_R(x') - phi_R(x)) / (2d cap_R(A)) on every edge touching the box
/// of the given centre and radius. Unit flow out of A, divergence free in the box off A.
OptimalFlow optimal_flow(const PointSet& set, const LatticeBox& box, const SolverOptions& opts = {});
OptimalFlow optimal_flow(const PointSet& set, Coord radius, const SolverOptions& opts = {});

struct Probability {
  double value = 1.0;
  double lower = 1.0;
  double upper = 1.0;
};

/// Q_u[omega = 1 on K] = exp(-u cap(K)), with the capacity interval propagated.
Probability vacant_law(const PointSet& set, double u, Coord radius = 24, const CapacityOptions& opts = {});

}  // namespace torusrw
