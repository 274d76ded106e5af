#include "torusrw/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "torusrw/errors.hpp"

namespace torusrw {

namespace {

constexpr std::uint64_t kMaxTorusEdges = 10'000'000;

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Axis and orientation of the step x -> y on the torus, or -1 when not adjacent.
int torus_port(const TorusGeometry& geom, const Point& x, const Point& y) {
  const std::uint64_t ix = geom.index(geom.canonical(x));
  const std::uint64_t iy = geom.index(geom.canonical(y));
  for (int p = 0; p < geom.ports(); ++p) {
    if (geom.neighbor(ix, p) == iy) return p;
  }
  return -1;
}

}  // namespace

// ---- TorusField --------------------------------------------------------

TorusField::TorusField(const TorusGeometry& geom, double fill) : geom_(geom), values_(geom.volume(), fill) {}

TorusField::TorusField(const TorusGeometry& geom, std::vector<double> values)
    : geom_(geom), values_(std::move(values)) {
  if (values_.size() != geom.volume()) throw InvalidArgument("torus field size does not match N^d");
}

double TorusField::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double TorusField::sup_norm() const { return sup_abs(values_); }

// ---- LatticeField ------------------------------------------------------

LatticeField::LatticeField(LatticeBox box) : box_(std::move(box)), values_(box_.count(), 0.0) {}

LatticeField::LatticeField(LatticeBox box, std::vector<double> values)
    : box_(std::move(box)), values_(std::move(values)) {
  if (values_.size() != box_.count()) throw InvalidArgument("lattice field size does not match its box");
}

PointSet LatticeField::support() const {
  std::vector<Point> pts;
  for (std::uint64_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.0) pts.push_back(box_.point(i));
  }
  return PointSet(std::move(pts));
}

LatticeField LatticeField::translated(const Point& offset) const {
  return LatticeField(LatticeBox(box_.lo() + offset, box_.hi() + offset), values_);
}

// ---- TorusFlow ---------------------------------------------------------

TorusFlow::TorusFlow(const TorusGeometry& geom) : geom_(geom), dim_(static_cast<std::uint64_t>(geom.dim())) {
  if (geom.volume() > kMaxTorusEdges / dim_) throw TooLarge("torus flow would exceed the dense edge limit");
  edges_.assign(geom.volume() * dim_, 0.0);
}

double TorusFlow::at(const Point& x, const Point& y) const {
  const int p = torus_port(geom_, x, y);
  if (p < 0) return 0.0;
  return through(geom_.index(geom_.canonical(x)), p);
}

void TorusFlow::set(const Point& x, const Point& y, double v) {
  const int p = torus_port(geom_, x, y);
  if (p < 0) throw NonAdjacentEdge("torus flow: " + to_string(x) + " and " + to_string(y) + " are not neighbors");
  const std::uint64_t ix = geom_.index(geom_.canonical(x));
  add(ix, p, v - through(ix, p));
}

double TorusFlow::sup_norm() const { return sup_abs(edges_); }

TorusFlow& TorusFlow::operator+=(const TorusFlow& o) {
  if (!(geom_ == o.geom_)) throw InvalidArgument("adding flows on different tori");
  for (std::size_t i = 0; i < edges_.size(); ++i) edges_[i] += o.edges_[i];
  return *this;
}

// ---- LatticeFlow -------------------------------------------------------

LatticeFlow::LatticeFlow(LatticeBox box)
    : box_(std::move(box)),
      region_(box_.grown(1)),
      edges_(region_.count() * static_cast<std::uint64_t>(box_.dim()), 0.0) {}

double LatticeFlow::forward(const Point& z, int axis) const {
  if (!region_.contains(z) || z[axis] >= region_.hi()[axis]) return 0.0;
  return edges_[region_.index(z) * static_cast<std::uint64_t>(dim()) + static_cast<std::uint64_t>(axis)];
}

void LatticeFlow::set_forward(const Point& z, int axis, double v) {
  if (!region_.contains(z) || z[axis] >= region_.hi()[axis]) {
    throw InvalidArgument("lattice flow: edge at " + to_string(z) + " outside the stored region");
  }
  edges_[region_.index(z) * static_cast<std::uint64_t>(dim()) + static_cast<std::uint64_t>(axis)] = v;
}

double LatticeFlow::at(const Point& x, const Point& y) const {
  if (!adjacent(x, y)) return 0.0;
  for (int a = 0; a < dim(); ++a) {
    if (y[a] == x[a] + 1) return forward(x, a);
    if (y[a] == x[a] - 1) return -forward(y, a);
  }
  return 0.0;
}

void LatticeFlow::set(const Point& x, const Point& y, double v) {
  if (!adjacent(x, y)) {
    throw NonAdjacentEdge("lattice flow: " + to_string(x) + " and " + to_string(y) + " are not neighbors");
  }
  for (int a = 0; a < dim(); ++a) {
    if (y[a] == x[a] + 1) return set_forward(x, a, v);
    if (y[a] == x[a] - 1) return set_forward(y, a, -v);
  }
}

double LatticeFlow::sup_norm() const { return sup_abs(edges_); }

}  // namespace torusrw
