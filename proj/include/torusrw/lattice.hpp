#pragma once

// Geometry of Z^d and of the discrete torus (Z/NZ)^d.
//
// Torus points are always stored canonically, coordinates in {0,...,N-1}.
// The box T' = {0,...,N-1}^d is the image of the torus under the bijection
// psi(x) = (x - basepoint) mod N, read as a subset of Z^d.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace torusrw {

using Coord = std::int64_t;

struct Point {
  std::vector<Coord> coords;

  Point() = default;
  explicit Point(std::vector<Coord> c) : coords(std::move(c)) {}
  Point(std::initializer_list<Coord> c) : coords(c) {}

  static Point zero(int dim) { return Point(std::vector<Coord>(static_cast<std::size_t>(dim), 0)); }
  /// sign * e_axis
  static Point unit(int dim, int axis, int sign = 1);

  int dim() const { return static_cast<int>(coords.size()); }
  Coord& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }
  Coord operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator*(Coord k) const;
  Point operator-() const;

  Coord linf() const;
  Coord l1() const;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

std::string to_string(const Point& p);
bool adjacent(const Point& a, const Point& b);

void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);

class TorusGeometry {
 public:
  TorusGeometry(Coord side, int dim);

  Coord side() const { return side_; }
  int dim() const { return dim_; }
  std::uint64_t volume() const { return volume_; }
  /// Row-major, axis 0 most significant.
  std::uint64_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  Point canonical(const Point& z) const;
  std::uint64_t index(const Point& torus_point) const;
  Point point(std::uint64_t index) const;
  Coord coord(std::uint64_t index, int axis) const;

  /// Ports 2*axis and 2*axis+1 step along +e_axis and -e_axis.
  std::uint64_t neighbor(std::uint64_t index, int port) const;
  int ports() const { return 2 * dim_; }

  friend bool operator==(const TorusGeometry& a, const TorusGeometry& b) {
    return a.side_ == b.side_ && a.dim_ == b.dim_;
  }

 private:
  Coord side_;
  int dim_;
  std::uint64_t volume_;
  std::vector<std::uint64_t> strides_;
};

enum class Ambient { lattice, torus };

/// Finite set of points, kept sorted (lexicographic) and free of duplicates.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> pts);
  static PointSet on_torus(const std::vector<Point>& pts, const TorusGeometry& geom);

  Ambient ambient() const { return ambient_; }
  bool empty() const { return pts_.empty(); }
  std::size_t size() const { return pts_.size(); }
  const std::vector<Point>& points() const { return pts_; }
  auto begin() const { return pts_.begin(); }
  auto end() const { return pts_.end(); }

  bool contains(const Point& p) const;
  PointSet translated(const Point& offset) const;
  PointSet united(const PointSet& other) const;
  /// max |p|_inf over the set, 0 for the empty set
  Coord linf_radius() const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<Point> pts_;
  Ambient ambient_ = Ambient::lattice;
};

void to_json(nlohmann::json& j, const PointSet& s);

/// Inclusive axis-aligned box [lo, hi] in Z^d, indexed row-major.
class LatticeBox {
 public:
  LatticeBox() = default;
  LatticeBox(Point lo, Point hi);
  static LatticeBox centered(const Point& center, Coord radius);
  /// Smallest box containing the set (which must be nonempty).
  static LatticeBox bounding(const PointSet& s);

  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  int dim() const { return lo_.dim(); }
  Coord extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }
  std::uint64_t count() const;
  bool contains(const Point& p) const;
  std::uint64_t index(const Point& p) const;
  Point point(std::uint64_t index) const;
  LatticeBox grown(Coord k) const;
  /// Coordinate-wise floor of the midpoint.
  Point center() const;

 private:
  Point lo_, hi_;
};

// ---- operations -------------------------------------------------------

/// Canonical projection Z^d -> torus.
Point project(const Point& z, const TorusGeometry& geom);

/// psi(x): the representative of x - basepoint in T' = {0,...,N-1}^d.
Point box_bijection(const Point& x, const Point& basepoint, const TorusGeometry& geom);

/// Inverse of box_bijection: the torus point basepoint + y for y in T'.
Point box_preimage(const Point& y, const Point& basepoint, const TorusGeometry& geom);

/// l_inf distance from a point of T' to the interior boundary of T'.
Coord distance_to_box_boundary(const Point& y, const TorusGeometry& geom);

struct BasepointChoice {
  Point basepoint;
  Coord margin = 0;  ///< d(psi(B), interior boundary of T')
};

/// Picks x_* so that psi(B), B = U project(centers[i] + windows[i]), stays far from
/// the interior boundary of T'. Per axis the box seam is placed in the middle of the
/// largest cyclic gap of the occupied coordinates, which maximizes the margin.
BasepointChoice choose_basepoint(const std::vector<Point>& centers,
                                 const std::vector<PointSet>& windows,
                                 const TorusGeometry& geom);

struct BoxPartition {
  PointSet interior;  ///< int T'   (lattice points)
  PointSet boundary;  ///< interior boundary of T'
  PointSet inner;     ///< C = psi^{-1}(int T')   (torus points)
  PointSet shell;     ///< S = psi^{-1}(boundary)
};

BoxPartition boundary_sets(const TorusGeometry& geom, const Point& basepoint);

struct Fiber {
  Point base;  ///< torus point in S
  int axis = 0;
  int sign = 1;  ///< direction e(x) = sign * e_axis
  Coord length = 0;

  /// The N torus points base + k e(x), k = 0..N-1.
  std::vector<Point> points(const TorusGeometry& geom) const;
};

/// e(x): smallest axis on which psi(x) is extremal; +e_j at 0, -e_j at N-1.
std::map<Point, Fiber> assign_fibers(const PointSet& shell, const Point& basepoint,
                                     const TorusGeometry& geom);

}  // namespace torusrw
