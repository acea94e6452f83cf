#include "circreg/wulff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "circreg/error.hpp"
#include "circreg/stats.hpp"

namespace circreg {

std::vector<XiEstimate> estimate_xi(const std::vector<DirectionalSeries>& series) {
  std::vector<XiEstimate> out;
  for (const auto& s : series) {
    require(s.distance.size() == s.probability.size(), ErrorKind::InvalidParameter, "series size mismatch");
    require(s.distance.size() >= 3, ErrorKind::InsufficientData, "need at least three distances per direction");
    std::vector<double> y;
    for (double p : s.probability) {
      require(p > 0 && std::isfinite(p), ErrorKind::InsufficientData, "connection probability estimate is not positive");
      y.push_back(-std::log(p));
    }
    const LinearFit fit = fit_line(s.distance, y);
    require(fit.slope > 0, ErrorKind::InsufficientData, "fitted decay rate is not positive");
    out.push_back({s.theta, fit.slope, fit.slope_stderr});
  }
  return out;
}

std::vector<DirectionalSeries> measure_directional_series(const FKParams& params, const LatticeBox& box,
                                                          const std::vector<double>& angles,
                                                          const std::vector<int>& ks, int buffer,
                                                          const SamplingOptions& options) {
  require(!angles.empty() && ks.size() >= 3, ErrorKind::InvalidParameter, "need angles and at least three distances");
  std::vector<Point> displacements;
  for (double a : angles)
    for (int k : ks) {
      const Vec2 u = unit(a);
      displacements.push_back({static_cast<int>(std::floor(k * u.x + 1e-9)), static_cast<int>(std::floor(k * u.y + 1e-9))});
    }
  const auto est = displacement_connectivity(params, box, displacements, buffer, options);
  std::vector<DirectionalSeries> out;
  std::size_t i = 0;
  for (double a : angles) {
    DirectionalSeries s{a, {}, {}};
    for (std::size_t j = 0; j < ks.size(); ++j, ++i) {
      s.distance.push_back(norm(Vec2(est[i].d)));
      s.probability.push_back(est[i].estimate);
    }
    out.push_back(std::move(s));
  }
  return out;
}

XiTable XiTable::from_function(const std::function<double(double)>& f, std::size_t m) {
  require(m >= 8, ErrorKind::InvalidParameter, "angular grid too coarse");
  XiTable t;
  for (std::size_t i = 0; i < m; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / static_cast<double>(m);
    t.theta.push_back(th);
    t.xi.push_back(f(th));
    t.stderr_.push_back(0.0);
  }
  return t;
}

XiTable make_xi_table(const std::vector<XiEstimate>& estimates, std::size_t m, bool symmetrize) {
  require(!estimates.empty(), ErrorKind::InsufficientData, "no xi estimates");
  std::map<long long, std::vector<std::pair<double, double>>> nodes;  // keyed by angle in units of 1e-9
  auto add = [&](double th, double xi, double se) {
    th = std::fmod(th, kTwoPi);
    if (th < 0) th += kTwoPi;
    long long key = std::llround(th * 1e9);
    if (key >= std::llround(kTwoPi * 1e9)) key = 0;
    nodes[key].push_back({xi, se});
  };
  for (const auto& e : estimates) {
    if (!symmetrize) {
      add(e.theta, e.xi, e.stderr_);
      continue;
    }
    for (int k = 0; k < 4; ++k) {
      add(e.theta + k * kPi / 2, e.xi, e.stderr_);
      add(-e.theta + k * kPi / 2, e.xi, e.stderr_);
    }
  }
  std::vector<double> th, xi, se;
  for (const auto& [key, vals] : nodes) {
    double sx = 0, ss = 0;
    for (auto [x, s] : vals) {
      sx += x;
      ss += s * s;
    }
    th.push_back(static_cast<double>(key) * 1e-9);
    xi.push_back(sx / static_cast<double>(vals.size()));
    se.push_back(std::sqrt(ss) / static_cast<double>(vals.size()));
  }
  XiTable t;
  const std::size_t k = th.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double a = kTwoPi * static_cast<double>(i) / static_cast<double>(m);
    t.theta.push_back(a);
    if (k == 1) {
      t.xi.push_back(xi[0]);
      t.stderr_.push_back(se[0]);
      continue;
    }
    std::size_t hi = static_cast<std::size_t>(std::upper_bound(th.begin(), th.end(), a) - th.begin());
    const std::size_t lo = hi == 0 ? k - 1 : hi - 1;
    hi %= k;
    double span = th[hi] - th[lo], off = a - th[lo];
    if (span <= 0) span += kTwoPi;
    if (off < 0) off += kTwoPi;
    const double w = off / span;
    t.xi.push_back((1 - w) * xi[lo] + w * xi[hi]);
    t.stderr_.push_back((1 - w) * se[lo] + w * se[hi]);
  }
  return t;
}

WulffShape::WulffShape(XiTable table, double lambda, std::vector<Vec2> polygon)
    : table_(std::move(table)), lambda_(lambda), polygon_(std::move(polygon)) {
  std::rotate(polygon_.begin(),
              std::min_element(polygon_.begin(), polygon_.end(),
                               [](Vec2 a, Vec2 b) { return arg(a) < arg(b); }),
              polygon_.end());
  for (Vec2 v : polygon_) vertex_args_.push_back(arg(v));
}

double WulffShape::area() const { return signed_area(polygon_); }

double WulffShape::diameter() const {
  double d = 0;
  for (std::size_t i = 0; i < polygon_.size(); ++i)
    for (std::size_t j = i + 1; j < polygon_.size(); ++j) d = std::max(d, norm(polygon_[i] - polygon_[j]));
  return d;
}

double WulffShape::min_radius() const {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < polygon_.size(); ++i)
    r = std::min(r, point_segment_distance({0, 0}, polygon_[i], polygon_[(i + 1) % polygon_.size()]));
  return r;
}

double WulffShape::max_radius() const {
  double r = 0;
  for (Vec2 v : polygon_) r = std::max(r, norm(v));
  return r;
}

double WulffShape::support(Vec2 u) const {
  double h = -std::numeric_limits<double>::infinity();
  for (Vec2 v : polygon_) h = std::max(h, dot(v, u));
  return h;
}

WulffShape::Hit WulffShape::boundary_hit(double angle) const {
  angle = std::fmod(angle, kTwoPi);
  if (angle < 0) angle += kTwoPi;
  const std::size_t k = polygon_.size();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(vertex_args_.begin(), vertex_args_.end(), angle) -
                                           vertex_args_.begin());
  i = i == 0 ? k - 1 : i - 1;
  const Vec2 a = polygon_[i], b = polygon_[(i + 1) % k], d = unit(angle), e = b - a;
  const double den = cross(d, e);
  double t = den != 0 ? cross(a, d) / den : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return {a + t * e, i, t};
}

std::vector<Vec2> WulffShape::dilated(double n, Vec2 z) const {
  std::vector<Vec2> out;
  out.reserve(polygon_.size());
  for (Vec2 v : polygon_) out.push_back(n * v + z);
  return out;
}

WulffShape build_wulff(const XiTable& table) {
  require(table.theta.size() == table.xi.size() && table.theta.size() >= 8, ErrorKind::InvalidParameter,
          "xi table must have matching sizes and at least eight directions");
  double top = 0;
  for (double x : table.xi) {
    require(x > 0 && std::isfinite(x), ErrorKind::InvalidParameter, "xi values must be positive");
    top = std::max(top, x);
  }
  const double r = 10 * top;
  std::vector<Vec2> poly{{-r, -r}, {r, -r}, {r, r}, {-r, r}};
  for (std::size_t i = 0; i < table.theta.size(); ++i) {
    const Vec2 u = unit(table.theta[i]);
    const double h = table.xi[i];
    std::vector<Vec2> next;
    for (std::size_t j = 0; j < poly.size(); ++j) {
      const Vec2 a = poly[j], b = poly[(j + 1) % poly.size()];
      const double fa = dot(a, u) - h, fb = dot(b, u) - h;
      if (fa <= 0) next.push_back(a);
      if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) next.push_back(a + (fa / (fa - fb)) * (b - a));
    }
    poly = std::move(next);
    require(poly.size() >= 3, ErrorKind::Internal, "half-plane intersection collapsed");
  }
  std::vector<Vec2> clean;
  for (Vec2 v : poly)
    if (clean.empty() || norm(v - clean.back()) > 1e-12) clean.push_back(v);
  while (clean.size() > 1 && norm(clean.front() - clean.back()) <= 1e-12) clean.pop_back();
  const double a = signed_area(clean);
  require(a > 0, ErrorKind::Internal, "Wulff polygon has no area");
  const double lambda = 1 / std::sqrt(a);
  for (auto& v : clean) v = lambda * v;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const Vec2 p = clean[i], q = clean[(i + 1) % clean.size()], s = clean[(i + 2) % clean.size()];
    require(cross(q - p, s - q) >= -1e-12, ErrorKind::Internal, "Wulff polygon is not convex; refine the grid");
  }
  return WulffShape(table, lambda, std::move(clean));
}

namespace {

double tangent_angle(const WulffShape& shape, double angle) {
  const auto hit = shape.boundary_hit(angle);
  const auto& poly = shape.polygon();
  const std::size_t k = poly.size();
  const Vec2 zp = perp(unit(angle));
  auto edge_angle = [&](std::size_t i) { return angle_between(poly[(i + 1) % k] - poly[i], zp); };
  double worst = edge_angle(hit.edge);
  if (hit.t < 1e-9) worst = std::max(worst, edge_angle((hit.edge + k - 1) % k));
  if (hit.t > 1 - 1e-9) worst = std::max(worst, edge_angle((hit.edge + 1) % k));
  return worst;
}

double chord_angle(Vec2 x, Vec2 y) { return angle_between(x - y, -perp(y)); }

}  // namespace

ShapeConstants choose_constants(const WulffShape& shape, std::size_t grid) {
  require(grid >= 8, ErrorKind::InvalidParameter, "grid too coarse");
  std::vector<Vec2> pts;
  double sup = 0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double a = kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
    sup = std::max(sup, tangent_angle(shape, a));
    pts.push_back(shape.boundary_point(a));
  }
  const double q0max = (kPi / 2 - sup) / 4;
  require(q0max > 0, ErrorKind::InvalidShape, "no positive q0 satisfies the tangent condition");
  ShapeConstants k;
  k.q0 = 0.9 * q0max;
  const double bound = kPi / 2 - 3 * k.q0;
  double cfeas = k.q0 / 2;
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t s = 1; s < grid; ++s) {
      const Vec2 x = pts[i], y = pts[(i + s) % grid];
      const double sep = angle_between(x, y);
      if (sep > 2 * cfeas) break;
      if (chord_angle(x, y) > bound) cfeas = std::min(cfeas, sep / 2);
    }
  require(cfeas > 0, ErrorKind::InvalidShape, "no positive c0 satisfies the chord condition");
  k.c0 = 0.9 * cfeas;
  return k;
}

ConstantsCheck verify_constants(const WulffShape& shape, const ShapeConstants& k, std::size_t grid) {
  ConstantsCheck out;
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < grid; ++i) {
    const double a = kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
    out.sup_angle = std::max(out.sup_angle, tangent_angle(shape, a));
    pts.push_back(shape.boundary_point(a));
  }
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t s = 1; s < grid; ++s) {
      const Vec2 x = pts[i], y = pts[(i + s) % grid];
      if (angle_between(x, y) > 2 * k.c0 + kAngleTol) break;
      out.worst_chord = std::max(out.worst_chord, chord_angle(x, y));
    }
  out.supang_ok = out.sup_angle <= kPi / 2 - 4 * k.q0 + kAngleTol;
  out.czercond_ok = out.worst_chord <= kPi / 2 - 3 * k.q0 + kAngleTol;
  return out;
}

namespace {

constexpr int kSupportDirections = 16;
constexpr double kTieTol = 1e-9;

struct DistortionSearch {
  const Circuit& circuit;
  const WulffShape& shape;
  int n;
  SegmentSet gamma;
  std::vector<Point> window;
  std::vector<double> lower;

  DistortionSearch(const Circuit& c, const WulffShape& s, int n_) : circuit(c), shape(s), n(n_) {
    require(n >= 1, ErrorKind::InvalidParameter, "n must be >= 1");
    gamma = c.segment_set();
    std::vector<Vec2> poly(c.vertices().begin(), c.vertices().end());
    double cx = 0, cy = 0, a = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
      const double w = cross(p, q);
      a += w;
      cx += (p.x + q.x) * w;
      cy += (p.y + q.y) * w;
    }
    cx /= 3 * a;
    cy /= 3 * a;
    double diam = 0;
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = i + 1; j < poly.size(); ++j) diam = std::max(diam, norm(poly[i] - poly[j]));
    const int r = static_cast<int>(std::ceil(diam + n * shape.diameter()));
    const int x0 = static_cast<int>(std::lround(cx)), y0 = static_cast<int>(std::lround(cy));
    double hg[kSupportDirections], hw[kSupportDirections];
    Vec2 dirs[kSupportDirections];
    for (int k = 0; k < kSupportDirections; ++k) {
      dirs[k] = unit(kTwoPi * k / kSupportDirections);
      hg[k] = -std::numeric_limits<double>::infinity();
      for (Vec2 p : poly) hg[k] = std::max(hg[k], dot(p, dirs[k]));
      hw[k] = n * shape.support(dirs[k]);
    }
    for (int y = y0 - r; y <= y0 + r; ++y)
      for (int x = x0 - r; x <= x0 + r; ++x) {
        window.push_back({x, y});
        double lb = 0;
        for (int k = 0; k < kSupportDirections; ++k)
          lb = std::max(lb, std::abs(hw[k] + dot(Vec2(Point{x, y}), dirs[k]) - hg[k]));
        lower.push_back(lb);
      }
  }

  double exact(Point z) const {
    const SegmentSet w = SegmentSet::closed_polyline(shape.dilated(n, Vec2(z)));
    return hausdorff_distance(w, gamma);
  }
};

Distortion pick(const std::vector<std::pair<double, Point>>& evaluated) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [d, z] : evaluated) best = std::min(best, d);
  Distortion out{best, {}};
  bool first = true;
  for (const auto& [d, z] : evaluated)
    if (d <= best + kTieTol && (first || z < out.cen)) {
      out.cen = z;
      first = false;
    }
  return out;
}

}  // namespace

double distortion_at(const Circuit& c, const WulffShape& shape, int n, Point z) {
  return hausdorff_distance(SegmentSet::closed_polyline(shape.dilated(n, Vec2(z))), c.segment_set());
}

Distortion global_distortion(const Circuit& c, const WulffShape& shape, int n) {
  DistortionSearch s(c, shape, n);
  std::vector<std::size_t> order(s.window.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.lower[a] != s.lower[b] ? s.lower[a] < s.lower[b] : s.window[a] < s.window[b];
  });
  std::vector<std::pair<double, Point>> evaluated;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i : order) {
    if (s.lower[i] > best + kTieTol) break;
    const double d = s.exact(s.window[i]);
    best = std::min(best, d);
    evaluated.push_back({d, s.window[i]});
  }
  return pick(evaluated);
}

Distortion brute_force_global_distortion(const Circuit& c, const WulffShape& shape, int n) {
  DistortionSearch s(c, shape, n);
  std::vector<std::pair<double, Point>> evaluated;
  for (Point z : s.window) evaluated.push_back({s.exact(z), z});
  return pick(evaluated);
}

AreaEventRecord area_event(const BondConfig& cfg, const WulffShape& shape, int n) {
  require(n >= 1, ErrorKind::InvalidParameter, "n must be >= 1");
  AreaEventRecord rec;
  const CircuitResult res = outermost_circuit(cfg);
  rec.status = res.status;
  if (res.status == CircuitStatus::None) return rec;
  rec.area = res.circuit->area();
  if (res.status == CircuitStatus::Censored) {
    rec.gd = std::numeric_limits<double>::quiet_NaN();
    return rec;
  }
  const Distortion d = global_distortion(*res.circuit, shape, n);
  rec.gd = d.gd;
  rec.cen = d.cen;
  rec.satisfies = rec.area >= static_cast<double>(n) * n && d.cen == Point{0, 0};
  return rec;
}

}  // namespace circreg
