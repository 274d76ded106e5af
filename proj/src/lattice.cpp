#include "torusrw/lattice.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "torusrw/errors.hpp"

namespace torusrw {

namespace {

Coord mod(Coord a, Coord n) {
  Coord r = a % n;
  return r < 0 ? r + n : r;
}

void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument("dimension mismatch: " + to_string(a) + " vs " + to_string(b));
  }
}

}  // namespace

Point Point::unit(int dim, int axis, int sign) {
  Point p = zero(dim);
  p[axis] = sign;
  return p;
}

Point Point::operator+(const Point& o) const {
  require_same_dim(*this, o);
  Point r = *this;
  for (int i = 0; i < dim(); ++i) r[i] += o[i];
  return r;
}

Point Point::operator-(const Point& o) const {
  require_same_dim(*this, o);
  Point r = *this;
  for (int i = 0; i < dim(); ++i) r[i] -= o[i];
  return r;
}

Point Point::operator*(Coord k) const {
  Point r = *this;
  for (auto& c : r.coords) c *= k;
  return r;
}

Point Point::operator-() const { return *this * -1; }

Coord Point::linf() const {
  Coord m = 0;
  for (Coord c : coords) m = std::max(m, c < 0 ? -c : c);
  return m;
}

Coord Point::l1() const {
  Coord s = 0;
  for (Coord c : coords) s += c < 0 ? -c : c;
  return s;
}

std::string to_string(const Point& p) {
  std::string s = "(";
  for (int i = 0; i < p.dim(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

bool adjacent(const Point& a, const Point& b) { return a.dim() == b.dim() && (a - b).l1() == 1; }

void to_json(nlohmann::json& j, const Point& p) { j = p.coords; }
void from_json(const nlohmann::json& j, Point& p) { p.coords = j.get<std::vector<Coord>>(); }

// ---- TorusGeometry -----------------------------------------------------

TorusGeometry::TorusGeometry(Coord side, int dim) : side_(side), dim_(dim) {
  if (side < 2) throw InvalidArgument("torus side length must be >= 2");
  if (dim < 1) throw InvalidArgument("torus dimension must be >= 1");
  // N^d must fit a signed 63-bit count so that index arithmetic never wraps.
  constexpr std::uint64_t limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  std::uint64_t vol = 1;
  for (int i = 0; i < dim; ++i) {
    if (vol > limit / static_cast<std::uint64_t>(side)) {
      throw TooLarge("torus volume N^d overflows 64-bit index");
    }
    vol *= static_cast<std::uint64_t>(side);
  }
  volume_ = vol;
  strides_.assign(static_cast<std::size_t>(dim), 1);
  for (int a = dim - 2; a >= 0; --a) {
    strides_[static_cast<std::size_t>(a)] =
        strides_[static_cast<std::size_t>(a + 1)] * static_cast<std::uint64_t>(side);
  }
}

Point TorusGeometry::canonical(const Point& z) const {
  if (z.dim() != dim_) throw InvalidArgument("point dimension does not match torus");
  Point r = z;
  for (auto& c : r.coords) c = mod(c, side_);
  return r;
}

std::uint64_t TorusGeometry::index(const Point& p) const {
  if (p.dim() != dim_) throw InvalidArgument("point dimension does not match torus");
  std::uint64_t idx = 0;
  for (int a = 0; a < dim_; ++a) {
    Coord c = p[a];
    if (c < 0 || c >= side_) throw InvalidArgument("torus point not canonical: " + to_string(p));
    idx += static_cast<std::uint64_t>(c) * stride(a);
  }
  return idx;
}

Point TorusGeometry::point(std::uint64_t index) const {
  Point p = Point::zero(dim_);
  for (int a = 0; a < dim_; ++a) p[a] = coord(index, a);
  return p;
}

Coord TorusGeometry::coord(std::uint64_t index, int axis) const {
  return static_cast<Coord>((index / stride(axis)) % static_cast<std::uint64_t>(side_));
}

std::uint64_t TorusGeometry::neighbor(std::uint64_t index, int port) const {
  const int axis = port / 2;
  const auto n = static_cast<std::uint64_t>(side_);
  const std::uint64_t s = stride(axis);
  const std::uint64_t c = (index / s) % n;
  if (port % 2 == 0) return c + 1 == n ? index - c * s : index + s;
  return c == 0 ? index + (n - 1) * s : index - s;
}

// ---- PointSet ----------------------------------------------------------

PointSet::PointSet(std::vector<Point> pts) : pts_(std::move(pts)) {
  if (!pts_.empty()) {
    const int d = pts_.front().dim();
    for (const auto& p : pts_) {
      if (p.dim() != d) throw InvalidArgument("point set mixes dimensions");
    }
  }
  std::sort(pts_.begin(), pts_.end());
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
}

PointSet PointSet::on_torus(const std::vector<Point>& pts, const TorusGeometry& geom) {
  std::vector<Point> canon;
  canon.reserve(pts.size());
  for (const auto& p : pts) canon.push_back(geom.canonical(p));
  PointSet s(std::move(canon));
  s.ambient_ = Ambient::torus;
  return s;
}

bool PointSet::contains(const Point& p) const { return std::binary_search(pts_.begin(), pts_.end(), p); }

PointSet PointSet::translated(const Point& offset) const {
  std::vector<Point> out;
  out.reserve(pts_.size());
  for (const auto& p : pts_) out.push_back(p + offset);
  PointSet s(std::move(out));
  s.ambient_ = ambient_;
  return s;
}

PointSet PointSet::united(const PointSet& other) const {
  std::vector<Point> all = pts_;
  all.insert(all.end(), other.pts_.begin(), other.pts_.end());
  PointSet s(std::move(all));
  s.ambient_ = ambient_;
  return s;
}

Coord PointSet::linf_radius() const {
  Coord r = 0;
  for (const auto& p : pts_) r = std::max(r, p.linf());
  return r;
}

void to_json(nlohmann::json& j, const PointSet& s) {
  j = nlohmann::json::array();
  for (const auto& p : s) j.push_back(p);
}

// ---- LatticeBox --------------------------------------------------------

LatticeBox::LatticeBox(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  require_same_dim(lo_, hi_);
  for (int a = 0; a < lo_.dim(); ++a) {
    if (hi_[a] < lo_[a]) throw InvalidArgument("empty lattice box");
  }
}

LatticeBox LatticeBox::centered(const Point& center, Coord radius) {
  if (radius < 0) throw InvalidArgument("negative box radius");
  Point r = Point::zero(center.dim());
  for (auto& c : r.coords) c = radius;
  return LatticeBox(center - r, center + r);
}

LatticeBox LatticeBox::bounding(const PointSet& s) {
  if (s.empty()) throw InvalidArgument("bounding box of empty set");
  Point lo = *s.begin(), hi = *s.begin();
  for (const auto& p : s) {
    for (int a = 0; a < p.dim(); ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  return LatticeBox(lo, hi);
}

std::uint64_t LatticeBox::count() const {
  std::uint64_t n = 1;
  for (int a = 0; a < dim(); ++a) n *= static_cast<std::uint64_t>(extent(a));
  return n;
}

bool LatticeBox::contains(const Point& p) const {
  if (p.dim() != dim()) return false;
  for (int a = 0; a < dim(); ++a) {
    if (p[a] < lo_[a] || p[a] > hi_[a]) return false;
  }
  return true;
}

std::uint64_t LatticeBox::index(const Point& p) const {
  if (!contains(p)) throw InvalidArgument("point " + to_string(p) + " outside box");
  std::uint64_t idx = 0;
  for (int a = 0; a < dim(); ++a) {
    idx = idx * static_cast<std::uint64_t>(extent(a)) + static_cast<std::uint64_t>(p[a] - lo_[a]);
  }
  return idx;
}

Point LatticeBox::point(std::uint64_t index) const {
  Point p = Point::zero(dim());
  for (int a = dim() - 1; a >= 0; --a) {
    const auto e = static_cast<std::uint64_t>(extent(a));
    p[a] = lo_[a] + static_cast<Coord>(index % e);
    index /= e;
  }
  return p;
}

LatticeBox LatticeBox::grown(Coord k) const {
  Point lo = lo_, hi = hi_;
  for (int a = 0; a < dim(); ++a) {
    lo[a] -= k;
    hi[a] += k;
  }
  return LatticeBox(lo, hi);
}

Point LatticeBox::center() const {
  Point c = lo_;
  for (int a = 0; a < dim(); ++a) {
    const Coord s = lo_[a] + hi_[a];
    c[a] = s >= 0 ? s / 2 : -((-s + 1) / 2);
  }
  return c;
}

// ---- operations --------------------------------------------------------

Point project(const Point& z, const TorusGeometry& geom) { return geom.canonical(z); }

Point box_bijection(const Point& x, const Point& basepoint, const TorusGeometry& geom) {
  return geom.canonical(x - basepoint);
}

Point box_preimage(const Point& y, const Point& basepoint, const TorusGeometry& geom) {
  return geom.canonical(y + basepoint);
}

Coord distance_to_box_boundary(const Point& y, const TorusGeometry& geom) {
  Coord m = std::numeric_limits<Coord>::max();
  for (int a = 0; a < y.dim(); ++a) m = std::min({m, y[a], geom.side() - 1 - y[a]});
  return m;
}

BasepointChoice choose_basepoint(const std::vector<Point>& centers, const std::vector<PointSet>& windows,
                                 const TorusGeometry& geom) {
  if (centers.empty()) throw InvalidArgument("choose_basepoint needs at least one center");
  if (centers.size() != windows.size()) throw InvalidArgument("centers and windows differ in length");
  const Coord n = geom.side();
  const int d = geom.dim();

  BasepointChoice choice{Point::zero(d), std::numeric_limits<Coord>::max()};
  for (int a = 0; a < d; ++a) {
    std::set<Coord> occupied;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (windows[i].empty()) continue;
      for (const auto& w : windows[i]) occupied.insert(mod(centers[i][a] + w[a], n));
    }
    if (occupied.empty()) {
      // B is empty: nothing to keep away from the seam.
      choice.basepoint[a] = 0;
      choice.margin = std::min(choice.margin, (n - 1) / 2);
      continue;
    }
    // Largest cyclic gap (from occupied coordinate lo to the next one, lo + len).
    std::vector<Coord> occ(occupied.begin(), occupied.end());
    Coord best_len = -1, best_lo = 0;
    for (std::size_t k = 0; k < occ.size(); ++k) {
      const Coord next = k + 1 < occ.size() ? occ[k + 1] : occ.front() + n;
      if (next - occ[k] > best_len) {
        best_len = next - occ[k];
        best_lo = occ[k];
      }
    }
    // Seam between basepoint-1 and basepoint; occupied points end up at distance
    // b-lo-1 from N-1 and lo+len-b from 0.
    const Coord b = best_lo + (best_len + 1) / 2;
    choice.basepoint[a] = mod(b, n);
    choice.margin = std::min(choice.margin, (best_len - 1) / 2);
  }
  if (choice.margin < 1) {
    throw MarginTooSmall("no basepoint keeps the target at distance >= 1 from the box boundary (N=" +
                         std::to_string(n) + ")");
  }
  return choice;
}

BoxPartition boundary_sets(const TorusGeometry& geom, const Point& basepoint) {
  std::vector<Point> interior, boundary, inner, shell;
  for (std::uint64_t i = 0; i < geom.volume(); ++i) {
    Point y = geom.point(i);  // coordinates of T' in the same enumeration
    Point x = box_preimage(y, basepoint, geom);
    if (distance_to_box_boundary(y, geom) >= 1) {
      interior.push_back(std::move(y));
      inner.push_back(std::move(x));
    } else {
      boundary.push_back(std::move(y));
      shell.push_back(std::move(x));
    }
  }
  return {PointSet(std::move(interior)), PointSet(std::move(boundary)), PointSet::on_torus(inner, geom),
          PointSet::on_torus(shell, geom)};
}

std::vector<Point> Fiber::points(const TorusGeometry& geom) const {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(length));
  const Point step = Point::unit(base.dim(), axis, sign);
  for (Coord k = 0; k < length; ++k) pts.push_back(geom.canonical(base + step * k));
  return pts;
}

std::map<Point, Fiber> assign_fibers(const PointSet& shell, const Point& basepoint, const TorusGeometry& geom) {
  std::map<Point, Fiber> fibers;
  const Coord n = geom.side();
  for (const auto& x : shell) {
    const Point y = box_bijection(x, basepoint, geom);
    int axis = -1;
    for (int a = 0; a < y.dim(); ++a) {
      if (y[a] == 0 || y[a] == n - 1) {
        axis = a;
        break;
      }
    }
    if (axis < 0) throw InvalidArgument("point " + to_string(x) + " is not on the box boundary");
    fibers.emplace(x, Fiber{x, axis, y[axis] == 0 ? 1 : -1, n});
  }
  return fibers;
}

}  // namespace torusrw
