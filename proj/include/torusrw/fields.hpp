#pragma once

// Scalar fields and flows on the torus and on finite regions of Z^d.

#include <cstdint>
#include <span>
#include <vector>

#include "torusrw/lattice.hpp"

namespace torusrw {

/// Real function on all N^d torus points, indexed like TorusGeometry::index.
class TorusField {
 public:
  explicit TorusField(const TorusGeometry& geom, double fill = 0.0);
  TorusField(const TorusGeometry& geom, std::vector<double> values);

  const TorusGeometry& geometry() const { return geom_; }
  std::uint64_t size() const { return values_.size(); }
  double operator[](std::uint64_t i) const { return values_[i]; }
  double& operator[](std::uint64_t i) { return values_[i]; }
  double at(const Point& x) const { return values_[geom_.index(geom_.canonical(x))]; }
  void set(const Point& x, double v) { values_[geom_.index(geom_.canonical(x))] = v; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// nu(f), the uniform average
  double mean() const;
  double sup_norm() const;

 private:
  TorusGeometry geom_;
  std::vector<double> values_;
};

/// Finitely supported function on Z^d, stored densely on a box and zero outside it.
class LatticeField {
 public:
  explicit LatticeField(LatticeBox box);
  LatticeField(LatticeBox box, std::vector<double> values);

  const LatticeBox& box() const { return box_; }
  int dim() const { return box_.dim(); }
  double at(const Point& z) const { return box_.contains(z) ? values_[box_.index(z)] : 0.0; }
  void set(const Point& z, double v) { values_[box_.index(z)] = v; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  PointSet support() const;
  LatticeField translated(const Point& offset) const;

 private:
  LatticeBox box_;
  std::vector<double> values_;
};

/// Antisymmetric edge function on the torus. One value per (x, axis) for the edge
/// x -> x + e_axis; the reverse orientation is implied.
class TorusFlow {
 public:
  explicit TorusFlow(const TorusGeometry& geom);

  const TorusGeometry& geometry() const { return geom_; }

  /// I_{x, neighbor(x, port)}
  double through(std::uint64_t x, int port) const {
    const int axis = port / 2;
    if (port % 2 == 0) return edges_[x * dim_ + static_cast<std::uint64_t>(axis)];
    return -edges_[geom_.neighbor(x, port) * dim_ + static_cast<std::uint64_t>(axis)];
  }
  /// Adds v to I_{x, neighbor(x, port)} (and -v to the reverse orientation).
  void add(std::uint64_t x, int port, double v) {
    const int axis = port / 2;
    if (port % 2 == 0) {
      edges_[x * dim_ + static_cast<std::uint64_t>(axis)] += v;
    } else {
      edges_[geom_.neighbor(x, port) * dim_ + static_cast<std::uint64_t>(axis)] -= v;
    }
  }
  double forward(std::uint64_t x, int axis) const { return edges_[x * dim_ + static_cast<std::uint64_t>(axis)]; }
  double& forward(std::uint64_t x, int axis) { return edges_[x * dim_ + static_cast<std::uint64_t>(axis)]; }

  /// I_{x,y}; zero for non-adjacent pairs.
  double at(const Point& x, const Point& y) const;
  /// Sets I_{x,y} = v (and I_{y,x} = -v). Throws NonAdjacentEdge.
  void set(const Point& x, const Point& y, double v);

  double sup_norm() const;
  std::span<const double> edges() const { return edges_; }

  TorusFlow& operator+=(const TorusFlow& o);
  friend TorusFlow operator+(TorusFlow a, const TorusFlow& b) { return a += b; }

 private:
  TorusGeometry geom_;
  std::uint64_t dim_;
  std::vector<double> edges_;
};

/// Antisymmetric edge function on Z^d carrying every edge that touches a box.
/// Edges are stored for z, z+e_axis both inside box.grown(1); all others are zero.
class LatticeFlow {
 public:
  explicit LatticeFlow(LatticeBox box);

  const LatticeBox& box() const { return box_; }
  const LatticeBox& region() const { return region_; }
  int dim() const { return box_.dim(); }

  /// I_{z, z+e_axis}; zero outside the stored region.
  double forward(const Point& z, int axis) const;
  void set_forward(const Point& z, int axis, double v);

  double at(const Point& x, const Point& y) const;
  void set(const Point& x, const Point& y, double v);

  double sup_norm() const;
  /// Visits every stored edge as (z, axis, value).
  template <class F>
  void for_each_edge(F&& f) const {
    const auto d = static_cast<std::uint64_t>(dim());
    for (std::uint64_t i = 0; i < region_.count(); ++i) {
      const Point z = region_.point(i);
      for (int a = 0; a < dim(); ++a) {
        if (z[a] < region_.hi()[a]) f(z, a, edges_[i * d + static_cast<std::uint64_t>(a)]);
      }
    }
  }

 private:
  LatticeBox box_;
  LatticeBox region_;
  std::vector<double> edges_;
};

}  // namespace torusrw
