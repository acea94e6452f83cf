#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "circreg/lattice.hpp"

namespace circreg {

// Absolute tolerance used by every angle comparison in the library.
inline constexpr double kAngleTol = 1e-12;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}
  constexpr Vec2(Point p) : x(p.x), y(p.y) {}  // NOLINT(google-explicit-constructor)
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }  // counterclockwise quarter turn
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
Vec2 rotate(Vec2 a, double angle);

// arg in [0, 2pi).
double arg(Vec2 v);
// arg on the branch (ref - pi, ref + pi].
double arg_near(Vec2 v, double ref);
// Signed representative of `a` modulo 2pi in (-pi, pi].
double wrap_pi(double a);
// Counterclockwise angular displacement from direction `from` to `to`, in [0, 2pi).
double ccw_angle(Vec2 from, Vec2 to);

double angle_between(Vec2 x, Vec2 y);

// W_{v,c}(apex): points whose direction from the apex is within c of center_arg.
struct Wedge {
  double center_arg = 0.0;
  double half_width = 0.0;
  Vec2 apex{0.0, 0.0};
  static Wedge around(Vec2 v, double c, Vec2 apex = {0.0, 0.0});
};
bool wedge_contains(const Wedge& w, Vec2 z);

enum class ConeSide { Forward, Backward };

// Cones at apex v with axis +v_perp (forward) or -v_perp (backward).
struct DirectedCones {
  Vec2 apex;
  double half_angle = 0.0;
  static DirectedCones with_q0(Vec2 v, double q0) { return {v, kPi / 2 - q0}; }
  Vec2 axis(ConeSide side) const;
};
bool cone_contains(const DirectedCones& cones, ConeSide which, Vec2 w);

// Closed sector A_{x,y} union {0}: directions from arg(x) counterclockwise to arg(y).
struct SectorA {
  Vec2 x, y;
  SectorA(Vec2 x_, Vec2 y_);
  double width() const;  // in (0, 2pi)
  double start() const { return arg(x); }
  bool contains(Vec2 z) const;
  bool contains_segment(Vec2 a, Vec2 b) const;
};

double triangle_area(Vec2 x, Vec2 y);

// Parameter interval [t0, t1] of a segment a + t (b - a), t in [0, 1].
struct Span {
  double t0 = 0.0;
  double t1 = 1.0;
  bool empty() const { return t0 > t1; }
};

// Convex cone at `apex` spanning directions lo (inclusive) counterclockwise
// to lo + aperture, aperture < pi. `expand` > 0 grows the cone by that angle
// on both sides, < 0 shrinks it; used to make membership closed or open.
struct ConvexCone {
  Vec2 apex;
  double lo = 0.0;
  double aperture = 0.0;
  Span clip(Vec2 a, Vec2 b, double expand) const;
  bool contains(Vec2 z, double expand) const;
  // True if the segment meets the open cone shrunk by `shrink` on both sides.
  bool meets_open(Vec2 a, Vec2 b, double shrink) const;
};

struct Segment {
  Vec2 a, b;
};

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double segment_segment_distance(const Segment& s, const Segment& t);

// Finite union of segments (points are degenerate segments) with a grid index
// for nearest-distance queries.
class SegmentSet {
 public:
  SegmentSet() = default;
  explicit SegmentSet(std::vector<Segment> segments, double cell = 0.0);
  static SegmentSet closed_polyline(const std::vector<Vec2>& vertices);

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  double distance(Vec2 p) const;
  // Distance and index of a closest segment (lowest index on ties).
  std::pair<double, std::size_t> nearest(Vec2 p) const;
  // Bounding box.
  Vec2 lo() const { return lo_; }
  Vec2 hi() const { return hi_; }

 private:
  std::vector<Segment> segments_;
  Vec2 lo_, hi_;
  double cell_ = 1.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<std::size_t>> grid_;
};

// sup over a in A of dist(a, B), exact for segments up to `tol`.
double directed_hausdorff(const SegmentSet& a, const SegmentSet& b, double tol = 1e-9);
double hausdorff_distance(const SegmentSet& a, const SegmentSet& b, double tol = 1e-9);

enum class PathSide { Minus, Plus };
std::vector<Point> boundary_path(Vec2 u, PathSide side, int length);

struct Separation {
  double kappa = 0.0;
  double phi = 0.0;
  bool disjoint = false;
  bool well_separated(double c, double c0) const { return disjoint && kappa <= 1.0 / (2.0 * c) && phi <= c0; }
};
Separation well_separation(const LatticeBox& box, const EdgeSet& a, const EdgeSet& b, double m, double lambda);

bool distang_check(Vec2 x, Vec2 y, double q0, double c0);

}  // namespace circreg
