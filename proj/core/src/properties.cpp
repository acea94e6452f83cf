#include "circreg/properties.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "circreg/geometry.hpp"

namespace circreg {

namespace {

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

void record(PropertyResult& r, bool ok, const std::string& what) {
  ++r.trials;
  if (ok) return;
  if (r.violations++ == 0) r.first_failure = what;
}

SegmentSet random_polyline(Rng& rng) {
  const std::size_t k = 3 + rng.below(6);
  const Vec2 c{uniform(rng, -3, 3), uniform(rng, -3, 3)};
  std::vector<Vec2> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(c + Vec2{uniform(rng, -4, 4), uniform(rng, -4, 4)});
  return SegmentSet::closed_polyline(v);
}

// Angular distance from the direction of z - apex to the wedge edges.
double edge_margin(const Wedge& w, Vec2 z) {
  const double a = arg(z - w.apex);
  const double d = std::abs(wrap_pi(a - w.center_arg));
  return std::abs(d - w.half_width);
}

// L-infinity distance from p to the ray {t u : t >= 0}; the objective is convex in t.
double ray_distance_inf(Vec2 p, Vec2 u) {
  auto f = [&](double t) { return std::max(std::abs(p.x - t * u.x), std::abs(p.y - t * u.y)); };
  double lo = 0, hi = (std::abs(p.x) + std::abs(p.y) + 1) / std::max(std::abs(u.x), std::abs(u.y));
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (f(m1) <= f(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return f((lo + hi) / 2);
}

}  // namespace

PropertyResult hausdorff_metric_axioms(Rng& rng, std::size_t trials) {
  PropertyResult r{"hausdorff_metric_axioms", 0, 0, {}};
  constexpr double tol = 1e-8;
  for (std::size_t i = 0; i < trials; ++i) {
    const SegmentSet a = random_polyline(rng), b = random_polyline(rng), c = random_polyline(rng);
    const double ab = hausdorff_distance(a, b), ba = hausdorff_distance(b, a);
    const double bc = hausdorff_distance(b, c), ac = hausdorff_distance(a, c);
    record(r, std::abs(ab - ba) <= tol, "asymmetric");
    record(r, hausdorff_distance(a, a) <= tol, "d(A, A) > 0");
    record(r, ab >= 0, "negative distance");
    record(r, ac <= ab + bc + tol, "triangle inequality");
  }
  return r;
}

PropertyResult wedge_rotation_invariance(Rng& rng, std::size_t trials) {
  PropertyResult r{"wedge_rotation_invariance", 0, 0, {}};
  while (r.trials < trials) {
    const Vec2 apex{uniform(rng, -5, 5), uniform(rng, -5, 5)};
    const Wedge w{uniform(rng, 0, kTwoPi), uniform(rng, 0.01, kPi / 2), apex};
    const Vec2 z{uniform(rng, -10, 10), uniform(rng, -10, 10)};
    if (norm(z - apex) < 1e-6 || edge_margin(w, z) < 1e-9) continue;
    const double t = uniform(rng, -kPi, kPi);
    const Wedge wr{w.center_arg + t, w.half_width, rotate(w.apex, t)};
    std::ostringstream os;
    os << "angle " << t;
    record(r, wedge_contains(w, z) == wedge_contains(wr, rotate(z, t)), os.str());
  }
  return r;
}

PropertyResult cone_rotation_scaling_invariance(Rng& rng, std::size_t trials) {
  PropertyResult r{"cone_rotation_scaling_invariance", 0, 0, {}};
  while (r.trials < trials) {
    const Vec2 v{uniform(rng, -10, 10), uniform(rng, -10, 10)};
    if (norm(v) < 1e-3) continue;
    const DirectedCones c{v, uniform(rng, 0.05, kPi / 2 - 0.05)};
    const Vec2 w{uniform(rng, -10, 10), uniform(rng, -10, 10)};
    const Vec2 d = w - v;
    if (norm(d) < 1e-6) continue;
    // Stay away from the cone edges, where rounding decides.
    const double m1 = std::abs(angle_between(d, c.axis(ConeSide::Forward)) - c.half_angle);
    const double m2 = std::abs(angle_between(d, c.axis(ConeSide::Backward)) - c.half_angle);
    if (std::min(m1, m2) < 1e-9) continue;
    const double t = uniform(rng, -kPi, kPi), s = std::exp(uniform(rng, -3, 3));
    const DirectedCones cr{rotate(v, t), c.half_angle};
    const Vec2 wr = rotate(v, t) + s * rotate(d, t);
    for (ConeSide side : {ConeSide::Forward, ConeSide::Backward})
      record(r, cone_contains(c, side, w) == cone_contains(cr, side, wr), "rotation or scaling changed membership");
  }
  return r;
}

PropertyResult boundary_path_shape(Rng& rng, std::size_t trials) {
  PropertyResult r{"boundary_path_shape", 0, 0, {}};
  for (std::size_t i = 0; i < trials; ++i) {
    const double a = uniform(rng, 0, kPi / 2);
    const Vec2 u = unit(a);
    const int length = 1 + static_cast<int>(rng.below(60));
    const PathSide side = rng.below(2) ? PathSide::Plus : PathSide::Minus;
    const auto path = boundary_path(u, side, length);
    record(r, path.size() == static_cast<std::size_t>(length) + 1, "wrong length");
    record(r, std::set<Point>(path.begin(), path.end()).size() == path.size(), "repeated vertex");
    bool monotone = true;
    double far = 0;
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k > 0) monotone = monotone && path[k].x >= path[k - 1].x && path[k].y >= path[k - 1].y;
      far = std::max(far, ray_distance_inf(path[k], u));
    }
    record(r, monotone, "not monotone in the first quadrant");
    record(r, far <= 2 + 1e-9, "path leaves the ray neighbourhood");
    // Quarter-turn conjugation: the path for I u is I applied to the path for u.
    if (a > 1e-6 && a < kPi / 2 - 1e-6) {
      const auto turned = boundary_path(perp(u), side, length);
      bool conj = turned.size() == path.size();
      for (std::size_t k = 0; conj && k < path.size(); ++k) conj = turned[k] == Point{-path[k].y, path[k].x};
      record(r, conj, "quarter-turn conjugation");
    }
  }
  return r;
}

PropertyResult distance_angle_bound(Rng& rng, std::size_t trials) {
  PropertyResult r{"distance_angle_bound", 0, 0, {}};
  while (r.trials < trials) {
    const double q0 = uniform(rng, 1e-3, kPi / 4);
    const double c0 = uniform(rng, 0, q0 / 2);
    const Vec2 x = std::exp(uniform(rng, -2, 4)) * unit(uniform(rng, 0, kTwoPi));
    // y: a direction within c0 of x, reached from x inside one of the cones.
    const double phi = uniform(rng, -c0, c0);
    const double alpha = uniform(rng, q0, kPi - q0);  // angle between y - x and -x
    const Vec2 dir = rotate(unit(arg(-x)), phi >= 0 ? -alpha : alpha);
    // Intersect the ray x + s dir with the ray at angle arg(x) + phi.
    const Vec2 target = unit(arg(x) + phi);
    const double den = cross(dir, target);
    if (std::abs(den) < 1e-12) continue;
    const double s = cross(target, x) / den;
    if (!(s > 0)) continue;
    const Vec2 y = x + s * dir;
    if (angle_between(x, y) > c0 || norm(y) < 1e-9) continue;
    const auto cones = DirectedCones::with_q0(x, q0);
    if (!cone_contains(cones, ConeSide::Forward, y) && !cone_contains(cones, ConeSide::Backward, y)) continue;
    record(r, distang_check(x, y, q0, c0), "bound violated");
  }
  return r;
}

std::vector<PropertyResult> geometry_property_suite(Rng& rng, std::size_t trials) {
  return {hausdorff_metric_axioms(rng, trials), wedge_rotation_invariance(rng, trials),
          cone_rotation_scaling_invariance(rng, trials), boundary_path_shape(rng, trials),
          distance_angle_bound(rng, trials)};
}

}  // namespace circreg
