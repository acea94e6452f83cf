#include "circreg/geometry.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "circreg/error.hpp"

namespace circreg {

Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

double arg(Vec2 v) {
  require(v.x != 0 || v.y != 0, ErrorKind::InvalidParameter, "arg of the zero vector");
  double a = std::atan2(v.y, v.x);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a = 0;
  return a;
}

double wrap_pi(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double arg_near(Vec2 v, double ref) { return ref + wrap_pi(arg(v) - ref); }

double ccw_angle(Vec2 from, Vec2 to) {
  require((from.x != 0 || from.y != 0) && (to.x != 0 || to.y != 0), ErrorKind::InvalidParameter,
          "angle with the zero vector");
  double a = std::atan2(cross(from, to), dot(from, to));
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a = 0;
  return a;
}

double angle_between(Vec2 x, Vec2 y) {
  require((x.x != 0 || x.y != 0) && (y.x != 0 || y.y != 0), ErrorKind::InvalidParameter,
          "angle with the zero vector");
  return std::atan2(std::abs(cross(x, y)), dot(x, y));
}

Wedge Wedge::around(Vec2 v, double c, Vec2 apex) {
  require(c >= 0 && c < kPi, ErrorKind::InvalidParameter, "wedge half-width must lie in [0, pi)");
  return {arg(v), c, apex};
}

bool wedge_contains(const Wedge& w, Vec2 z) {
  const Vec2 d = z - w.apex;
  if (d.x == 0 && d.y == 0) return true;
  return angle_between(d, unit(w.center_arg)) <= w.half_width + kAngleTol;
}

Vec2 DirectedCones::axis(ConeSide side) const {
  return side == ConeSide::Forward ? perp(apex) : -perp(apex);
}

bool cone_contains(const DirectedCones& cones, ConeSide which, Vec2 w) {
  require(cones.apex.x != 0 || cones.apex.y != 0, ErrorKind::InvalidParameter, "cone apex must be nonzero");
  const Vec2 d = w - cones.apex;
  if (d.x == 0 && d.y == 0) return true;
  return angle_between(d, cones.axis(which)) <= cones.half_angle + kAngleTol;
}

SectorA::SectorA(Vec2 x_, Vec2 y_) : x(x_), y(y_) {
  require(norm(x) > 0 && norm(y) > 0, ErrorKind::InvalidParameter, "sector endpoints must be nonzero");
  require(width() > kAngleTol, ErrorKind::InvalidParameter, "sector must have positive width");
}

double SectorA::width() const { return ccw_angle(x, y); }

bool SectorA::contains(Vec2 z) const {
  if (z.x == 0 && z.y == 0) return true;
  const double a = ccw_angle(x, z);
  return a <= width() + kAngleTol || a >= kTwoPi - kAngleTol;
}

bool SectorA::contains_segment(Vec2 a, Vec2 b) const {
  if (!contains(a) || !contains(b)) return false;
  const double w = width();
  if (w <= kPi) return true;
  ConvexCone gap{{0, 0}, arg(y), kTwoPi - w};
  return !gap.meets_open(a, b, kAngleTol);
}

double triangle_area(Vec2 x, Vec2 y) { return 0.5 * std::abs(cross(x, y)); }

namespace {

// Feasible t in [lo, hi] for l0 + t (l1 - l0) >= 0.
void clip_linear(double l0, double l1, Span& s) {
  const double d = l1 - l0;
  if (d == 0) {
    if (l0 < 0) s = {1, 0};
    return;
  }
  const double root = -l0 / d;
  if (d > 0) {
    s.t0 = std::max(s.t0, root);
  } else {
    s.t1 = std::min(s.t1, root);
  }
}

}  // namespace

Span ConvexCone::clip(Vec2 a, Vec2 b, double expand) const {
  const double ap = aperture + 2 * expand;
  if (ap < 0) return {1, 0};
  const Vec2 ulo = unit(lo - expand), uhi = unit(lo - expand + ap);
  Span s{0, 1};
  clip_linear(cross(ulo, a - apex), cross(ulo, b - apex), s);
  clip_linear(cross(a - apex, uhi), cross(b - apex, uhi), s);
  return s;
}

bool ConvexCone::meets_open(Vec2 a, Vec2 b, double shrink) const {
  const double ap = aperture - 2 * shrink;
  if (ap <= 0) return false;
  const Vec2 ulo = unit(lo + shrink), uhi = unit(lo + shrink + ap);
  // min of two linear functions is concave: its maximum on [0, 1] sits at an
  // endpoint or at the crossing point.
  const double p0 = cross(ulo, a - apex), p1 = cross(ulo, b - apex);
  const double q0 = cross(a - apex, uhi), q1 = cross(b - apex, uhi);
  auto value = [&](double t) { return std::min(p0 + t * (p1 - p0), q0 + t * (q1 - q0)); };
  double best = std::max(value(0), value(1));
  const double denom = (p1 - p0) - (q1 - q0);
  if (denom != 0) {
    const double t = (q0 - p0) / denom;
    if (t > 0 && t < 1) best = std::max(best, value(t));
  }
  return best > 0;
}

bool ConvexCone::contains(Vec2 z, double expand) const {
  const double ap = aperture + 2 * expand;
  if (ap < 0) return false;
  const Vec2 ulo = unit(lo - expand), uhi = unit(lo - expand + ap);
  return cross(ulo, z - apex) >= 0 && cross(z - apex, uhi) >= 0;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  double t = len2 > 0 ? dot(p - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * d));
}

double segment_segment_distance(const Segment& s, const Segment& t) {
  auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
  const double d1 = orient(s.a, s.b, t.a), d2 = orient(s.a, s.b, t.b);
  const double d3 = orient(t.a, t.b, s.a), d4 = orient(t.a, t.b, s.b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
  return std::min({point_segment_distance(s.a, t.a, t.b), point_segment_distance(s.b, t.a, t.b),
                   point_segment_distance(t.a, s.a, s.b), point_segment_distance(t.b, s.a, s.b)});
}

SegmentSet::SegmentSet(std::vector<Segment> segments, double cell) : segments_(std::move(segments)) {
  if (segments_.empty()) return;
  lo_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  hi_ = {-lo_.x, -lo_.y};
  for (const auto& s : segments_) {
    lo_ = {std::min({lo_.x, s.a.x, s.b.x}), std::min({lo_.y, s.a.y, s.b.y})};
    hi_ = {std::max({hi_.x, s.a.x, s.b.x}), std::max({hi_.y, s.a.y, s.b.y})};
  }
  const double w = hi_.x - lo_.x, h = hi_.y - lo_.y;
  if (cell <= 0) {
    cell = std::max(w, h) / std::max(1.0, std::sqrt(static_cast<double>(segments_.size())));
    cell = std::max(cell, 1e-6);
  }
  cell_ = cell;
  nx_ = std::max(1, static_cast<int>(std::ceil(w / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil(h / cell_)));
  grid_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  auto cx = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - lo_.x) / cell_)), 0, nx_ - 1); };
  auto cy = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - lo_.y) / cell_)), 0, ny_ - 1); };
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    for (int gx = cx(std::min(s.a.x, s.b.x)); gx <= cx(std::max(s.a.x, s.b.x)); ++gx)
      for (int gy = cy(std::min(s.a.y, s.b.y)); gy <= cy(std::max(s.a.y, s.b.y)); ++gy)
        grid_[static_cast<std::size_t>(gy) * nx_ + gx].push_back(i);
  }
}

SegmentSet SegmentSet::closed_polyline(const std::vector<Vec2>& v) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < v.size(); ++i) segs.push_back({v[i], v[(i + 1) % v.size()]});
  return SegmentSet(std::move(segs));
}

double SegmentSet::distance(Vec2 p) const { return nearest(p).first; }

std::pair<double, std::size_t> SegmentSet::nearest(Vec2 p) const {
  require(!segments_.empty(), ErrorKind::InvalidParameter, "distance to an empty set");
  const Vec2 q{std::clamp(p.x, lo_.x, hi_.x), std::clamp(p.y, lo_.y, hi_.y)};
  const int px = std::clamp(static_cast<int>(std::floor((q.x - lo_.x) / cell_)), 0, nx_ - 1);
  const int py = std::clamp(static_cast<int>(std::floor((q.y - lo_.y) / cell_)), 0, ny_ - 1);
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  const int rmax = std::max(nx_, ny_);
  for (int r = 0; r <= rmax; ++r) {
    // Cells at Chebyshev ring r are at least (r - 1) * cell from the projection of p,
    // and the projection onto the bounding box is non-expansive.
    if (r >= 1 && (r - 1) * cell_ > best) break;
    for (int gy = py - r; gy <= py + r; ++gy) {
      if (gy < 0 || gy >= ny_) continue;
      const bool edge_row = gy == py - r || gy == py + r;
      for (int gx = px - r; gx <= px + r; gx += (edge_row ? 1 : 2 * r)) {
        if (gx >= 0 && gx < nx_) {
          for (std::size_t i : grid_[static_cast<std::size_t>(gy) * nx_ + gx]) {
            const double d = point_segment_distance(p, segments_[i].a, segments_[i].b);
            if (d < best || (d == best && i < arg)) {
              best = d;
              arg = i;
            }
          }
        }
        if (r == 0) break;
      }
    }
  }
  return {best, arg};
}

double directed_hausdorff(const SegmentSet& a, const SegmentSet& b, double tol) {
  require(!a.empty() && !b.empty(), ErrorKind::InvalidParameter, "Hausdorff distance of an empty set");
  // On a piece [t0, t1] of a segment, f = dist(., B) is 1-Lipschitz, and it is
  // at most the distance to any single segment of B, which is convex in t.
  struct Piece {
    double ub;
    std::size_t seg;
    double t0, t1, f0, f1;
    std::size_t j0, j1;
    bool operator<(const Piece& o) const { return ub < o.ub; }
  };
  const auto& bs = b.segments();
  auto dist_to = [&](Vec2 p, std::size_t j) { return point_segment_distance(p, bs[j].a, bs[j].b); };
  auto bound = [&](const Segment& s, double t0, double t1, double f0, double f1, std::size_t j0, std::size_t j1) {
    const Vec2 p0 = s.a + t0 * (s.b - s.a), p1 = s.a + t1 * (s.b - s.a);
    const double lip = 0.5 * (f0 + f1 + norm(p1 - p0));
    return std::min({lip, std::max(f0, dist_to(p1, j0)), std::max(dist_to(p0, j1), f1)});
  };
  std::priority_queue<Piece> queue;
  double best = 0;
  for (std::size_t i = 0; i < a.segments().size(); ++i) {
    const auto& s = a.segments()[i];
    const auto [f0, j0] = b.nearest(s.a);
    const auto [f1, j1] = b.nearest(s.b);
    best = std::max({best, f0, f1});
    queue.push({bound(s, 0.0, 1.0, f0, f1, j0, j1), i, 0.0, 1.0, f0, f1, j0, j1});
  }
  while (!queue.empty()) {
    Piece p = queue.top();
    queue.pop();
    if (p.ub <= best + tol) break;
    const auto& s = a.segments()[p.seg];
    const double tm = 0.5 * (p.t0 + p.t1);
    const auto [fm, jm] = b.nearest(s.a + tm * (s.b - s.a));
    best = std::max(best, fm);
    queue.push({bound(s, p.t0, tm, p.f0, fm, p.j0, jm), p.seg, p.t0, tm, p.f0, fm, p.j0, jm});
    queue.push({bound(s, tm, p.t1, fm, p.f1, jm, p.j1), p.seg, tm, p.t1, fm, p.f1, jm, p.j1});
  }
  return best;
}

double hausdorff_distance(const SegmentSet& a, const SegmentSet& b, double tol) {
  return std::max(directed_hausdorff(a, b, tol), directed_hausdorff(b, a, tol));
}

std::vector<Point> boundary_path(Vec2 u, PathSide side, int length) {
  require(u.x != 0 || u.y != 0, ErrorKind::InvalidParameter, "boundary path needs a nonzero direction");
  require(length >= 0, ErrorKind::InvalidParameter, "path length must be non-negative");
  int k;  // quarter turns taking u into arg [0, pi/2)
  if (u.x > 0 && u.y >= 0) {
    k = 0;
  } else if (u.x <= 0 && u.y > 0) {
    k = 1;
  } else if (u.x < 0 && u.y <= 0) {
    k = 2;
  } else {
    k = 3;
  }
  auto turn = [](Vec2 v, int times) {
    for (int i = 0; i < times; ++i) v = {-v.y, v.x};
    return v;
  };
  auto turn_point = [](Point v, int times) {
    for (int i = 0; i < times; ++i) v = {-v.y, v.x};
    return v;
  };
  const Vec2 w = turn(u, (4 - k) % 4);
  std::vector<Point> path{{0, 0}};
  Point cur{0, 0};
  for (int i = 0; i < length; ++i) {
    Point step;
    if (side == PathSide::Minus) {
      Point up{cur.x, cur.y + 1};
      step = cross(Vec2(up), w) >= 0 ? Point{0, 1} : Point{1, 0};  // arg(up) <= arg(w)
    } else {
      Point right{cur.x + 1, cur.y};
      step = cross(Vec2(right), w) <= 0 ? Point{1, 0} : Point{0, 1};  // arg(right) >= arg(w)
    }
    cur = cur + step;
    path.push_back(cur);
  }
  for (auto& p : path) p = turn_point(p, k);
  return path;
}

Separation well_separation(const LatticeBox& box, const EdgeSet& a, const EdgeSet& b, double m, double lambda) {
  require(lambda > 0, ErrorKind::InvalidParameter, "lambda must be positive");
  auto vertices = [&](const EdgeSet& s) {
    std::vector<Point> v;
    for (EdgeId e : s) {
      Edge ed = box.edge(e);
      v.push_back(ed.a);
      v.push_back(ed.b);
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto va = vertices(a), vb = vertices(b);
  Separation out;
  for (Point x : va)
    for (Point y : vb) {
      const double d = norm(Vec2(x) - Vec2(y));
      if (d >= m) out.kappa += std::exp(-lambda * d);
      if (d <= m) out.phi += 1;
    }
  out.disjoint = true;
  for (EdgeId e : a)
    if (b.contains(e)) out.disjoint = false;
  return out;
}

bool distang_check(Vec2 x, Vec2 y, double q0, double c0) {
  require(norm(x) > 0, ErrorKind::Precondition, "distang_check needs x != 0");
  if (x == y) return true;
  require(norm(y) > 0 && angle_between(x, y) <= c0 + kAngleTol, ErrorKind::Precondition,
          "distang_check: angle between x and y exceeds c0");
  const auto cones = DirectedCones::with_q0(x, q0);
  require(cone_contains(cones, ConeSide::Forward, y) || cone_contains(cones, ConeSide::Backward, y),
          ErrorKind::Precondition, "distang_check: y is not in the cones at x");
  const double bound = norm(x) * angle_between(x, y) / std::sin(q0 / 2);
  return norm(y - x) <= bound * (1 + 1e-12) + 1e-12;
}

}  // namespace circreg
