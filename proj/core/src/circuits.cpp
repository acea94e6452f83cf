#include "circreg/circuits.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "circreg/error.hpp"

namespace circreg {

double signed_area(const std::vector<Vec2>& poly) {
  double s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * s;
}

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

namespace {

std::vector<Vec2> as_polygon(const std::vector<Point>& v) { return {v.begin(), v.end()}; }

bool unit_step(Point a, Point b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1; }

}  // namespace

Circuit Circuit::from_vertices(std::vector<Point> v) {
  require(v.size() >= 4, ErrorKind::InvalidParameter, "a circuit needs at least four vertices");
  std::set<Point> seen(v.begin(), v.end());
  require(seen.size() == v.size(), ErrorKind::InvalidParameter, "circuit revisits a vertex");
  for (std::size_t i = 0; i < v.size(); ++i)
    require(unit_step(v[i], v[(i + 1) % v.size()]), ErrorKind::InvalidParameter, "circuit steps must be unit edges");
  double a = signed_area(as_polygon(v));
  if (a < 0) {
    std::reverse(v.begin(), v.end());
    a = -a;
  }
  std::rotate(v.begin(), std::min_element(v.begin(), v.end()), v.end());
  return Circuit(std::move(v), a);
}

std::vector<Segment> Circuit::segments() const {
  std::vector<Segment> s;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    s.push_back({vertices_[i], vertices_[(i + 1) % vertices_.size()]});
  return s;
}

SegmentSet Circuit::segment_set() const { return SegmentSet(segments()); }

EdgeSet Circuit::edge_set(const LatticeBox& box) const {
  std::vector<EdgeId> ids;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    ids.push_back(box.edge_id(vertices_[i], vertices_[(i + 1) % vertices_.size()]));
  return EdgeSet(std::move(ids));
}

bool Circuit::has_edge(Point a, Point b) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    Point u = vertices_[i], w = vertices_[(i + 1) % vertices_.size()];
    if ((u == a && w == b) || (u == b && w == a)) return true;
  }
  return false;
}

bool Circuit::encloses(Vec2 p) const {
  for (const auto& s : segments())
    if (point_segment_distance(p, s.a, s.b) == 0) return false;
  return point_in_polygon(as_polygon(vertices_), p);
}

Circuit Circuit::translated(Point d) const {
  std::vector<Point> v = vertices_;
  for (auto& p : v) p = p + d;
  return Circuit(std::move(v), area_);
}

namespace {

CircuitResult classify(const LatticeBox& box, Circuit c) {
  bool censored = false;
  for (Point p : c.vertices()) censored = censored || box.on_interior_boundary(p);
  return {censored ? CircuitStatus::Censored : CircuitStatus::Found, std::move(c)};
}

}  // namespace

CircuitResult outermost_circuit(const BondConfig& cfg) { return outermost_circuit(cfg, nullptr); }

CircuitResult outermost_circuit(const BondConfig& cfg, std::vector<std::uint8_t>* enclosed) {
  const LatticeBox& box = cfg.box();
  const int n = box.half_width();
  const int w = 2 * n;  // faces per row
  const std::size_t faces = static_cast<std::size_t>(w) * w;
  const std::size_t horizontal = box.horizontal_count();
  if (enclosed) enclosed->assign(faces, 0);

  // Face f = (j + n) * w + (i + n) is the unit square with lower-left corner
  // (i, j). Sides in order bottom, top, left, right; tables cached per size.
  struct Tables {
    int n = -1;
    std::vector<std::array<EdgeId, 4>> edge;
    std::vector<std::array<int, 4>> next;  // -1 outside the box
  };
  thread_local Tables t;
  if (t.n != n) {
    t.n = n;
    t.edge.resize(faces);
    t.next.resize(faces);
    for (int f = 0; f < static_cast<int>(faces); ++f) {
      const int r = f / w, c = f % w;
      t.edge[f] = {static_cast<EdgeId>(r * w + c), static_cast<EdgeId>((r + 1) * w + c),
                   static_cast<EdgeId>(horizontal + r * (w + 1) + c),
                   static_cast<EdgeId>(horizontal + r * (w + 1) + c + 1)};
      t.next[f] = {r > 0 ? f - w : -1, r + 1 < w ? f + w : -1, c > 0 ? f - 1 : -1, c + 1 < w ? f + 1 : -1};
    }
  }
  auto side_edge = [&](int f, int k) { return t.edge[f][k]; };
  auto neighbour = [&](int f, int k) { return t.next[f][k]; };

  thread_local std::vector<std::uint8_t> reached, inq;
  thread_local std::vector<int> stack, q;
  reached.assign(faces, 0);
  stack.clear();
  for (int f = 0; f < static_cast<int>(faces); ++f)
    for (int k = 0; k < 4 && !reached[f]; ++k)
      if (neighbour(f, k) < 0 && !cfg.is_open(side_edge(f, k))) {
        reached[f] = 1;
        stack.push_back(f);
      }
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    for (int k = 0; k < 4; ++k) {
      const int g = neighbour(f, k);
      if (g < 0 || reached[g] || cfg.is_open(side_edge(f, k))) continue;
      reached[g] = 1;
      stack.push_back(g);
    }
  }
  const int origin = n * w + n;  // face (0, 0)
  for (int f : {origin - w - 1, origin - w, origin - 1, origin})
    if (reached[f]) return {};

  inq.assign(faces, 0);
  q.clear();
  stack.push_back(origin);
  inq[origin] = 1;
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    q.push_back(f);
    for (int k = 0; k < 4; ++k) {
      const int g = neighbour(f, k);
      if (g < 0 || reached[g] || inq[g]) continue;
      inq[g] = 1;
      stack.push_back(g);
    }
  }
  if (enclosed) *enclosed = inq;

  // Interface edges, as a degree-two graph on vertex ids.
  const int side = w + 1;
  thread_local std::vector<std::array<int, 2>> adj;
  thread_local std::vector<std::uint8_t> deg;
  adj.assign(static_cast<std::size_t>(side) * side, {-1, -1});
  deg.assign(static_cast<std::size_t>(side) * side, 0);
  std::size_t boundary_edges = 0;
  int start = -1;
  auto link = [&](int u, int v) {
    if (deg[u] >= 2 || deg[v] >= 2) fail(ErrorKind::Internal, "interface vertex without degree two");
    adj[u][deg[u]++] = v;
    adj[v][deg[v]++] = u;
  };
  for (int f : q) {
    const int r = f / w, c = f % w;
    const int ll = r * side + c;  // lower-left vertex
    for (int k = 0; k < 4; ++k) {
      const int g = neighbour(f, k);
      if (g >= 0 && inq[g]) continue;
      if (!cfg.is_open(side_edge(f, k))) fail(ErrorKind::Internal, "closed edge on the enclosing interface");
      switch (k) {
        case 0: link(ll, ll + 1); break;
        case 1: link(ll + side, ll + side + 1); break;
        case 2: link(ll, ll + side); break;
        default: link(ll + 1, ll + side + 1); break;
      }
      ++boundary_edges;
      if (start < 0 || ll < start) start = ll;
    }
  }
  for (int f : q) {
    const int r = f / w, c = f % w;
    const int ll = r * side + c;
    for (int v : {ll, ll + 1, ll + side, ll + side + 1})
      if (deg[v] == 1) fail(ErrorKind::Internal, "interface vertex without degree two");
  }
  while (deg[start] == 0) ++start;

  auto point = [&](int v) { return Point{v % side - n, v / side - n}; };
  std::vector<Point> cycle;
  cycle.reserve(boundary_edges);
  int prev = start, cur = adj[start][0];
  cycle.push_back(point(start));
  while (cur != start) {
    cycle.push_back(point(cur));
    const int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
    if (cycle.size() > boundary_edges) fail(ErrorKind::Internal, "interface trace does not close");
  }
  if (cycle.size() != boundary_edges) fail(ErrorKind::Internal, "interface is not a single cycle");
  return classify(box, Circuit::from_vertices(std::move(cycle)));
}

namespace {

// Simple cycles of the open subgraph, each reported once.
template <typename Visit>
void for_each_cycle(const BondConfig& cfg, std::size_t max_cycles, Visit&& visit) {
  const LatticeBox& box = cfg.box();
  const VertexId nv = static_cast<VertexId>(box.vertex_count());
  std::vector<std::uint8_t> on_path(nv, 0);
  std::vector<VertexId> path;
  std::size_t count = 0;
  std::function<void(VertexId, VertexId)> dfs = [&](VertexId s, VertexId v) {
    EdgeId inc[4];
    const int k = box.incident_edges(box.vertex(v), inc);
    for (int i = 0; i < k; ++i) {
      if (!cfg.is_open(inc[i])) continue;
      const Edge ed = box.edge(inc[i]);
      const VertexId w = box.vertex_id(ed.a == box.vertex(v) ? ed.b : ed.a);
      if (w == s && path.size() >= 4 && path[1] < path.back()) {
        if (++count > max_cycles) fail(ErrorKind::TooLarge, "cycle enumeration exceeded its guard");
        std::vector<Point> pts;
        for (VertexId u : path) pts.push_back(box.vertex(u));
        visit(std::move(pts));
      } else if (w > s && !on_path[w]) {
        on_path[w] = 1;
        path.push_back(w);
        dfs(s, w);
        path.pop_back();
        on_path[w] = 0;
      }
    }
  };
  for (VertexId s = 0; s < nv; ++s) {
    path.assign(1, s);
    on_path[s] = 1;
    dfs(s, s);
    on_path[s] = 0;
  }
}

std::vector<std::uint8_t> face_set(const LatticeBox& box, const Circuit& c) {
  const int n = box.half_width();
  std::vector<std::uint8_t> faces;
  const auto poly = as_polygon(c.vertices());
  for (int j = -n; j < n; ++j)
    for (int i = -n; i < n; ++i) faces.push_back(point_in_polygon(poly, {i + 0.5, j + 0.5}));
  return faces;
}

}  // namespace

std::vector<Circuit> enumerate_enclosing_circuits(const BondConfig& cfg, std::size_t max_cycles) {
  std::vector<Circuit> out;
  for_each_cycle(cfg, max_cycles, [&](std::vector<Point> pts) {
    if (std::find(pts.begin(), pts.end(), Point{0, 0}) != pts.end()) return;
    if (!point_in_polygon(as_polygon(pts), {0.0, 0.0})) return;
    out.push_back(Circuit::from_vertices(std::move(pts)));
  });
  return out;
}

CircuitResult brute_force_outermost(const BondConfig& cfg, std::size_t max_cycles) {
  const auto all = enumerate_enclosing_circuits(cfg, max_cycles);
  if (all.empty()) return {};
  std::size_t best = 0;
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i].area() > all[best].area()) best = i;
  const auto outer = face_set(cfg.box(), all[best]);
  for (const auto& c : all) {
    const auto f = face_set(cfg.box(), c);
    for (std::size_t k = 0; k < f.size(); ++k)
      if (f[k] && !outer[k]) fail(ErrorKind::Internal, "no circuit encloses all others");
  }
  return classify(cfg.box(), all[best]);
}

double interior_area(const Circuit& c) { return c.area(); }

double area_excess(const Circuit& c, int n) {
  const double n2 = static_cast<double>(n) * n;
  require(c.area() >= n2, ErrorKind::Precondition, "enclosed area is below n^2");
  return c.area() - n2;
}

double captured_area(const SectorPath& path) {
  std::vector<Vec2> poly{{0, 0}};
  for (Point p : path.vertices) poly.push_back(p);
  return std::abs(signed_area(poly));
}

double path_diameter(const SectorPath& path) {
  double d = 0;
  for (std::size_t i = 0; i < path.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < path.vertices.size(); ++j)
      d = std::max(d, norm(Vec2(path.vertices[i]) - Vec2(path.vertices[j])));
  return d;
}

EdgeSet sector_edges(const LatticeBox& box, const SectorA& sector) {
  std::vector<EdgeId> ids;
  for (EdgeId e = 0; e < box.edge_count(); ++e) {
    const Edge ed = box.edge(e);
    if (sector.contains_segment(ed.a, ed.b)) ids.push_back(e);
  }
  return EdgeSet(std::move(ids));
}

std::optional<SectorPath> outermost_open_path(const BondConfig& cfg, Point x, Point y) {
  const LatticeBox& box = cfg.box();
  require(box.contains(x) && box.contains(y), ErrorKind::InvalidParameter, "path endpoints outside the box");
  const SectorA sector(x, y);
  const EdgeSet region = sector_edges(box, sector);
  const Cluster comp = open_component(cfg, x, region);
  if (!comp.contains(y)) return std::nullopt;
  const auto mask = region.mask(box.edge_count());

  // Wall-following walk keeping the exterior on the right: at each vertex
  // take the smallest counterclockwise angle measured from the reversed
  // incoming direction, so backtracking is the last resort.
  std::vector<Point> walk{x};
  Point cur = x;
  Vec2 dir = (1.0 / norm(Vec2(x))) * Vec2(x);
  const std::size_t limit = 4 * comp.edges.size() + 8;
  while (cur != y) {
    EdgeId inc[4];
    const int k = box.incident_edges(cur, inc);
    double best = 10;
    Point next = cur;
    for (int i = 0; i < k; ++i) {
      if (!mask[inc[i]] || !cfg.is_open(inc[i])) continue;
      const Edge ed = box.edge(inc[i]);
      const Point w = ed.a == cur ? ed.b : ed.a;
      double phi = ccw_angle(-dir, Vec2(w - cur));
      if (phi < 1e-12) phi = kTwoPi;
      if (phi < best) {
        best = phi;
        next = w;
      }
    }
    if (next == cur) fail(ErrorKind::Internal, "open path walk is stuck");
    dir = Vec2(next - cur);
    cur = next;
    walk.push_back(cur);
    if (walk.size() > limit) fail(ErrorKind::Internal, "open path walk did not reach its target");
  }
  std::vector<Point> erased;
  std::map<Point, std::size_t> where;
  for (Point p : walk) {
    auto it = where.find(p);
    if (it != where.end()) {
      for (std::size_t i = it->second + 1; i < erased.size(); ++i) where.erase(erased[i]);
      erased.resize(it->second + 1);
    } else {
      where[p] = erased.size();
      erased.push_back(p);
    }
  }
  return SectorPath{x, y, std::move(erased)};
}

std::optional<SectorPath> brute_force_outermost_open_path(const BondConfig& cfg, Point x, Point y,
                                                          std::size_t max_paths) {
  const LatticeBox& box = cfg.box();
  const SectorA sector(x, y);
  const auto mask = sector_edges(box, sector).mask(box.edge_count());
  std::vector<std::uint8_t> on(box.vertex_count(), 0);
  std::vector<Point> path{x};
  on[box.vertex_id(x)] = 1;
  std::optional<SectorPath> best;
  double best_area = -1;
  std::size_t count = 0;
  std::function<void(Point)> dfs = [&](Point v) {
    if (v == y) {
      if (++count > max_paths) fail(ErrorKind::TooLarge, "path enumeration exceeded its guard");
      SectorPath cand{x, y, path};
      const double a = captured_area(cand);
      if (a > best_area + 1e-9) {
        best_area = a;
        best = cand;
      }
      return;
    }
    EdgeId inc[4];
    const int k = box.incident_edges(v, inc);
    for (int i = 0; i < k; ++i) {
      if (!mask[inc[i]] || !cfg.is_open(inc[i])) continue;
      const Edge ed = box.edge(inc[i]);
      const Point w = ed.a == v ? ed.b : ed.a;
      if (on[box.vertex_id(w)]) continue;
      on[box.vertex_id(w)] = 1;
      path.push_back(w);
      dfs(w);
      path.pop_back();
      on[box.vertex_id(w)] = 0;
    }
  };
  dfs(x);
  return best;
}

std::optional<Cluster> common_cluster(const BondConfig& cfg, Point x, Point y, const EdgeSet& region) {
  require(cfg.box().contains(x) && cfg.box().contains(y), ErrorKind::InvalidParameter, "points outside the box");
  Cluster c = open_component(cfg, x, region);
  if (!c.contains(y)) return std::nullopt;
  return c;
}

double fluctuation(const Cluster& gamma, Point x, Point y) {
  require(gamma.contains(x) && gamma.contains(y), ErrorKind::Precondition, "fluctuation: x and y must lie in the set");
  double m = 0;
  for (Point v : gamma.vertices) m = std::max(m, point_segment_distance(v, x, y));
  return m;
}

bool good_area_capture(const SectorPath& path, double eps) {
  const double d = norm(Vec2(path.x) - Vec2(path.y));
  require(d > 1, ErrorKind::InvalidParameter, "good area capture needs |x - y| > 1");
  if (path_diameter(path) > 2 * d) return false;
  const double t = triangle_area(path.x, path.y);
  return captured_area(path) >= t + eps * std::pow(d, 1.5) * std::sqrt(std::log(d));
}

void write_circuit_csv(std::ostream& os, const Circuit& c) {
  os << "index,x,y\n";
  for (std::size_t i = 0; i < c.vertices().size(); ++i)
    os << i << "," << c.vertices()[i].x << "," << c.vertices()[i].y << "\n";
}

void write_circuit_record(std::ostream& os, const Circuit& c,
                          const std::vector<std::pair<std::string, std::string>>& extra) {
  os << "length=" << c.length() << "\n";
  os << "area=" << c.area() << "\n";
  os << "start=" << c.vertices().front().x << "," << c.vertices().front().y << "\n";
  for (const auto& [k, v] : extra) os << k << "=" << v << "\n";
}

}  // namespace circreg
