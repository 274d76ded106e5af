#pragma once

// Dirichlet forms, flow energies and the torus variational characterisations of
// N^d / E[H_A]:
//   N^d / E[H_A] = inf { E_T(f,f) : f = 1 on A, nu(f) = 0 }
//                = sup { 1/(I,I)_T : I(A) = 1 - |A| N^{-d}, div I = -N^{-d} off A }.

#include <cstdint>
#include <vector>

#include "torusrw/box_solver.hpp"
#include "torusrw/fields.hpp"

namespace torusrw {

/// (1/2) sum_x sum_{x' ~ x} (f(x) - f(x'))^2 / (2d)
double dirichlet_form(const TorusField& f);
double dirichlet_form(const LatticeField& f);

/// (1/2) sum_x sum_{x'} I_{x,x'}^2 2d
double flow_energy(const TorusFlow& flow);
double flow_energy(const LatticeFlow& flow);

/// Net flow out of x.
double divergence(const TorusFlow& flow, const Point& x);
double divergence(const LatticeFlow& flow, const Point& x);
TorusField divergence_field(const TorusFlow& flow);

/// I(A) = sum_{x in A} div I(x)
double flow_out(const TorusFlow& flow, const PointSet& set);
double flow_out(const LatticeFlow& flow, const PointSet& set);

struct ExactHittingOptions {
  SolverOptions solver{};
  std::uint64_t max_unknowns = 1'000'000;
};

/// E_nu[H_A] by solving h = 0 on A, h = 1 + P h off A.
double expected_hitting_exact(const PointSet& set, const TorusGeometry& geom, const ExactHittingOptions& opts = {});

/// E_T(f,f) after checking f = 1 on A and nu(f) = 0 (ConstraintViolated otherwise).
/// Upper bound on N^d / E[H_A].
double torus_dirichlet_value(const TorusField& f, const PointSet& set, double tolerance = 1e-9);

/// One window function f_i, a finitely supported lattice function equal to 1 on K_i,
/// placed at the torus point `center`.
struct PlacedWindow {
  LatticeField profile;
  Point center;
};

/// f = (sum_i f_i o tau_{x_i} - nu(.)) / (1 - nu(.)), with tau_x(x') = psi(x') - psi(x).
/// Supports must sit in int T' with no two of them adjacent or overlapping
/// (SupportsOverlap), and the normaliser must exceed 1/2 (DegenerateNormalizer).
TorusField build_test_function(const std::vector<PlacedWindow>& windows, const Point& basepoint,
                               const TorusGeometry& geom);

/// (sum_i E_{Z^d}(f_i, f_i)) / (1 - nu(sum_i f_i o tau))^2, the value E_T(f,f) takes
/// when the placed supports do not interact.
double test_function_closed_form(const std::vector<PlacedWindow>& windows, const TorusGeometry& geom);

/// (I,I)_T after validating the constraints of the flow characterisation to
/// `tolerance` per point. Upper bound on E[H_A] N^{-d}.
double torus_thomson_value(const TorusFlow& flow, const PointSet& set, double tolerance = 1e-9);

/// (1 - cos(2 pi / N)) / d
double spectral_gap(const TorusGeometry& geom);

}  // namespace torusrw
