#include "circreg/regeneration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <functional>
#include <queue>
#include <set>

#include "circreg/error.hpp"

namespace circreg {

LatticeGraph LatticeGraph::from_cluster(const LatticeBox& box, const Cluster& c) {
  LatticeGraph g;
  g.vertices = c.vertices;
  for (EdgeId e : c.edges) {
    const Edge ed = box.edge(e);
    g.edges.push_back({ed.a, ed.b});
  }
  return g;
}

LatticeGraph LatticeGraph::from_path(const std::vector<Point>& path) {
  LatticeGraph g;
  g.vertices = path;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) g.edges.push_back({path[i], path[i + 1]});
  std::sort(g.vertices.begin(), g.vertices.end());
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
  return g;
}

LatticeGraph LatticeGraph::from_circuit(const Circuit& c) {
  LatticeGraph g = from_path(c.vertices());
  g.edges.push_back({c.vertices().back(), c.vertices().front()});
  return g;
}

bool LatticeGraph::contains(Point p) const { return std::binary_search(vertices.begin(), vertices.end(), p); }

bool is_regeneration_site(const std::vector<Segment>& target, Point v, const ShapeConstants& k) {
  const double av = arg(Vec2(v));
  const ConvexCone wedge{{0, 0}, av - k.c0, 2 * k.c0};
  // The complement of the two closed cones is the open double cone of
  // half-angle q0 around the radial directions at v.
  const ConvexCone out1{Vec2(v), av - k.q0, 2 * k.q0};
  const ConvexCone out2{Vec2(v), av + kPi - k.q0, 2 * k.q0};
  for (const Segment& s : target) {
    const Span span = wedge.clip(s.a, s.b, kAngleTol);
    if (span.empty()) continue;
    const Vec2 e = s.b - s.a;
    const Vec2 a = s.a + span.t0 * e, b = s.a + span.t1 * e;
    if (out1.meets_open(a, b, kAngleTol) || out2.meets_open(a, b, kAngleTol)) return false;
  }
  return true;
}

bool is_regeneration_site(const Circuit& circuit, Point v, const ShapeConstants& k) {
  const auto& vs = circuit.vertices();
  require(std::find(vs.begin(), vs.end(), v) != vs.end(), ErrorKind::InvalidParameter,
          "regeneration candidate is not a circuit vertex");
  return is_regeneration_site(circuit.segments(), v, k);
}

double theta_rg_max(std::vector<double> args) {
  if (args.size() <= 1) return kTwoPi;
  std::sort(args.begin(), args.end());
  double best = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    double g = i + 1 < args.size() ? args[i + 1] - args[i] : args.front() + kTwoPi - args.back();
    best = std::max(best, g);
  }
  return best;
}

RegenReport make_regen_report(std::vector<Point> sites) {
  RegenReport r;
  std::sort(sites.begin(), sites.end(), [](Point a, Point b) {
    const double aa = arg(Vec2(a)), ab = arg(Vec2(b));
    if (aa != ab) return aa < ab;
    return norm(Vec2(a)) < norm(Vec2(b));
  });
  r.sites = std::move(sites);
  for (Point p : r.sites) r.args.push_back(arg(Vec2(p)));
  const std::size_t m = r.sites.size();
  for (std::size_t i = 0; i < m; ++i) {
    r.gaps.push_back(m == 1 ? kTwoPi : (i + 1 < m ? r.args[i + 1] - r.args[i] : r.args.front() + kTwoPi - r.args.back()));
  }
  r.sentinel = m <= 1;
  r.theta_max = theta_rg_max(r.args);
  return r;
}

RegenReport rg_set(const Circuit& circuit, const ShapeConstants& k, RegenMode mode, const BondConfig* cfg) {
  std::vector<Segment> target = circuit.segments();
  if (mode == RegenMode::Cluster) {
    require(cfg != nullptr, ErrorKind::InvalidParameter, "cluster mode needs the configuration");
    const Cluster cl = open_component(*cfg, circuit.vertices().front());
    target.clear();
    for (EdgeId e : cl.edges) {
      const Edge ed = cfg->box().edge(e);
      target.push_back({ed.a, ed.b});
    }
  }
  std::vector<Point> sites;
  for (Point v : circuit.vertices())
    if (is_regeneration_site(target, v, k)) sites.push_back(v);
  return make_regen_report(std::move(sites));
}

namespace {

// Parameters t in [0, 1] where |a + t e - c| = r, for unit-length e.
std::vector<double> circle_hits(Vec2 a, Vec2 b, Vec2 c, double r) {
  const Vec2 e = b - a, w = a - c;
  const double A = dot(e, e), B = 2 * dot(w, e), C = dot(w, w) - r * r;
  const double disc = B * B - 4 * A * C;
  std::vector<double> out;
  if (disc < 0 || A == 0) return out;
  const double s = std::sqrt(disc);
  for (double t : {(-B - s) / (2 * A), (-B + s) / (2 * A)})
    if (t >= -1e-12 && t <= 1 + 1e-12) out.push_back(std::clamp(t, 0.0, 1.0));
  return out;
}

bool segment_hits_arc(Vec2 a, Vec2 b, double radius, const Wedge& w) {
  for (double t : circle_hits(a, b, {0, 0}, radius))
    if (wedge_contains(w, a + t * (b - a))) return true;
  return false;
}

bool in_star(Vec2 a, Vec2 b, double k) { return point_segment_distance({0, 0}, a, b) <= k + 1e-12; }

}  // namespace

int default_crossing_radius(Vec2 d, double delta, int max_k) {
  require(norm(d) > 0, ErrorKind::InvalidParameter, "direction must be nonzero");
  const Wedge fwd = Wedge::around(d, delta), bwd = Wedge::around(-d, delta);
  for (int k = 1; k <= max_k; ++k) {
    bool hf = false, hb = false;
    for (int y = -k - 1; y <= k + 1; ++y)
      for (int x = -k - 1; x <= k + 1; ++x)
        for (Point step : {Point{1, 0}, Point{0, 1}}) {
          const Vec2 a = Point{x, y}, b = Point{x + step.x, y + step.y};
          if (!in_star(a, b, k)) continue;
          hf = hf || segment_hits_arc(a, b, k, fwd);
          hb = hb || segment_hits_arc(a, b, k, bwd);
        }
    if (hf && hb) return k;
  }
  fail(ErrorKind::Precondition, "no crossing radius up to " + std::to_string(max_k) + " for this aperture");
}

CRGReport connection_regeneration(const LatticeGraph& gamma, Point x, Point y, double delta, int K, const Pattern& phi) {
  require(gamma.contains(x) && gamma.contains(y), ErrorKind::Precondition, "x and y must lie in gamma");
  require(x != y, ErrorKind::Precondition, "x and y must differ");
  require(delta > 0 && delta < kPi / 2, ErrorKind::InvalidParameter, "delta must lie in (0, pi/2)");
  require(K >= 1, ErrorKind::InvalidParameter, "K must be >= 1");
  const Vec2 d = Vec2(y) - Vec2(x);
  CRGReport rep;
  rep.K = K;

  std::vector<std::pair<Point, Point>> want;
  if (phi) {
    for (auto [a, b] : *phi) want.push_back(b < a ? std::pair{b, a} : std::pair{a, b});
    std::sort(want.begin(), want.end());
  }

  std::vector<Point> sites;
  for (Point v : gamma.vertices) {
    const Vec2 vv(v);
    const Wedge wf = Wedge::around(d, delta, vv), wb = Wedge::around(-d, delta, vv);
    bool ok = true;
    for (auto [pa, pb] : gamma.edges) {
      const Vec2 a(pa), b(pb);
      std::vector<std::pair<double, double>> outside;
      const auto hits = circle_hits(a, b, vv, K);
      const bool a_out = norm(a - vv) > K + 1e-12;
      const bool b_out = norm(b - vv) > K + 1e-12;
      if (hits.empty()) {
        if (a_out) outside.push_back({0, 1});
      } else {
        if (a_out) outside.push_back({0, hits.front()});
        if (b_out) outside.push_back({hits.back(), 1});
      }
      for (auto [t0, t1] : outside) {
        const Vec2 p = a + t0 * (b - a), q = a + t1 * (b - a);
        const bool in_f = wedge_contains(wf, p) && wedge_contains(wf, q);
        const bool in_b = wedge_contains(wb, p) && wedge_contains(wb, q);
        if (!in_f && !in_b) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) continue;

    std::vector<std::pair<Point, Point>> local;
    for (auto [pa, pb] : gamma.edges) {
      if (!in_star(Vec2(pa) - vv, Vec2(pb) - vv, K)) continue;
      Point a = pa - v, b = pb - v;
      local.push_back(b < a ? std::pair{b, a} : std::pair{a, b});
    }
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    if (phi) {
      if (local != want) continue;
    } else {
      // Admissible: connected, contains 0, and meets both boundary arcs.
      if (local.empty()) continue;
      std::map<Point, Point> parent;
      std::function<Point(Point)> find = [&](Point p) {
        auto it = parent.find(p);
        if (it == parent.end()) return parent[p] = p;
        if (it->second == p) return p;
        return it->second = find(it->second);
      };
      bool has0 = false, hf = false, hb = false;
      const Wedge f0 = Wedge::around(d, delta), b0 = Wedge::around(-d, delta);
      for (auto [a, b] : local) {
        parent[find(a)] = find(b);
        has0 = has0 || a == Point{0, 0} || b == Point{0, 0};
        hf = hf || segment_hits_arc(a, b, K, f0);
        hb = hb || segment_hits_arc(a, b, K, b0);
      }
      const Point root = find(local.front().first);
      bool connected = true;
      for (auto [a, b] : local) connected = connected && find(a) == root;
      if (!(connected && has0 && hf && hb)) continue;
    }
    sites.push_back(v);
  }
  std::sort(sites.begin(), sites.end(), [&](Point a, Point b) {
    return dot(Vec2(a), d) != dot(Vec2(b), d) ? dot(Vec2(a), d) < dot(Vec2(b), d) : a < b;
  });
  rep.sites = sites;
  std::vector<Point> sorted_sites = sites;
  std::sort(sorted_sites.begin(), sorted_sites.end());
  auto is_site = [&](Point p) { return std::binary_search(sorted_sites.begin(), sorted_sites.end(), p); };

  // Pieces: each edge, glued at non-site vertices.
  const std::size_t m = gamma.edges.size();
  UnionFind uf(m + gamma.vertices.size());
  auto vid = [&](Point p) {
    return m + static_cast<std::size_t>(std::lower_bound(gamma.vertices.begin(), gamma.vertices.end(), p) -
                                        gamma.vertices.begin());
  };
  for (std::size_t i = 0; i < m; ++i)
    for (Point p : {gamma.edges[i].first, gamma.edges[i].second})
      if (!is_site(p)) uf.unite(i, vid(p));
  std::map<std::size_t, CRGCluster> groups;
  for (std::size_t i = 0; i < m; ++i) {
    auto& c = groups[uf.find(i)];
    c.edges.push_back(gamma.edges[i]);
    for (Point p : {gamma.edges[i].first, gamma.edges[i].second})
      if (is_site(p)) c.boundary_sites.push_back(p);
  }
  for (Point p : gamma.vertices) {
    if (is_site(p)) continue;
    auto& c = groups[uf.find(vid(p))];
    c.vertices.push_back(p);
    c.has_x = c.has_x || p == x;
    c.has_y = c.has_y || p == y;
  }
  for (auto& [root, c] : groups) {
    std::sort(c.boundary_sites.begin(), c.boundary_sites.end());
    c.boundary_sites.erase(std::unique(c.boundary_sites.begin(), c.boundary_sites.end()), c.boundary_sites.end());
    auto by_projection = [&](Point a, Point b) { return dot(Vec2(a), d) < dot(Vec2(b), d); };
    if (!c.boundary_sites.empty()) {
      c.f = *std::min_element(c.boundary_sites.begin(), c.boundary_sites.end(), by_projection);
      c.b = *std::max_element(c.boundary_sites.begin(), c.boundary_sites.end(), by_projection);
    }
    if (c.has_x && c.has_y) {
      c.displacement = d;
    } else if (c.has_x) {
      c.displacement = c.b ? Vec2(*c.b) - Vec2(x) : d;
      if (c.boundary_sites.size() != 1) ++rep.irregular_clusters;
    } else if (c.has_y) {
      c.displacement = c.f ? Vec2(y) - Vec2(*c.f) : d;
      if (c.boundary_sites.size() != 1) ++rep.irregular_clusters;
    } else {
      c.displacement = c.f ? Vec2(*c.b) - Vec2(*c.f) : Vec2{0, 0};
      if (c.boundary_sites.size() != 2) ++rep.irregular_clusters;
    }
    rep.maxreg = std::max(rep.maxreg, norm(c.displacement));
    rep.clusters.push_back(std::move(c));
  }
  return rep;
}

namespace {

std::size_t site_index(const RegenReport& rg, Point p) {
  auto it = std::find(rg.sites.begin(), rg.sites.end(), p);
  require(it != rg.sites.end(), ErrorKind::Precondition, "point is not a regeneration site");
  return static_cast<std::size_t>(it - rg.sites.begin());
}

long long cross_ll(Point a, Point b) { return static_cast<long long>(a.x) * b.y - static_cast<long long>(a.y) * b.x; }

bool well_aligned(const ShapeConstants& k, Point u, Point v) {
  const double half = kPi / 2 - 2 * k.q0;
  return cone_contains({Vec2(v), half}, ConeSide::Backward, Vec2(u)) ||
         cone_contains({Vec2(u), half}, ConeSide::Forward, Vec2(v));
}

// Sites in A_{u,v} but outside the closed triangle 0, u, v (exact for lattice points).
bool outward_facing(const RegenReport& rg, Point u, Point v) {
  const SectorA sector{Vec2(u), Vec2(v)};
  const long long orient = cross_ll(u, v);
  for (Point s : rg.sites) {
    if (s == u || s == v) continue;
    if (!sector.contains(Vec2(s))) continue;
    if (orient > 0) {
      if (cross_ll(u, s) < 0 || cross_ll(s, v) < 0) continue;  // outside the sector
      if (cross_ll(v - u, s - u) < 0) return false;
    } else {
      // Sector of width >= pi: the triangle is degenerate or reflex, so any
      // site in the sector beyond the segment [u, v] counts.
      if (orient == 0 || cross_ll(v - u, s - u) < 0) return false;
    }
  }
  return true;
}

}  // namespace

PairPredicates pair_predicates(const RegenReport& rg, const ShapeConstants& k, Point u, Point v) {
  site_index(rg, u);
  site_index(rg, v);
  return {well_aligned(k, u, v), outward_facing(rg, u, v)};
}

SweepResult sweep(const RegenReport& rg, const ShapeConstants& k, std::size_t from, bool ccw) {
  SweepResult out;
  const Point x = rg.sites.at(from);
  const Vec2 xv(x);
  const double ax = arg(xv);
  const double alpha = kPi / 2 - 2 * k.q0;
  const Vec2 ldir = ccw ? unit(ax + kPi - 2 * k.q0) : unit(ax - kPi + 2 * k.q0);
  const double origin_side = cross(ldir, -xv);
  const DirectedCones cones{xv, alpha};
  const std::size_t m = rg.sites.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    if (i == from) continue;
    const Vec2 z(rg.sites[i]);
    const double disp = ccw ? ccw_angle(xv, z) : ccw_angle(z, xv);
    if (disp <= kAngleTol || disp >= kPi) continue;
    const double side = cross(ldir, z - xv);
    const bool beyond = origin_side > 0 ? side <= 0 : side >= 0;
    if (!beyond) continue;
    if (disp < best - kAngleTol ||
        (std::abs(disp - best) <= kAngleTol && out.next && norm(z) < norm(Vec2(rg.sites[*out.next])))) {
      best = std::min(best, disp);
      out.next = i;
    }
  }
  if (out.next) {
    out.good = cone_contains(cones, ccw ? ConeSide::Forward : ConeSide::Backward, Vec2(rg.sites[*out.next]));
  }
  return out;
}

SearchTrace search(const RegenReport& rg, const ShapeConstants& k, double u_angle) {
  SearchTrace t;
  const std::size_t m = rg.sites.size();
  if (m == 0) {
    t.failure = "no regeneration sites";
    return t;
  }
  const Vec2 u = unit(u_angle);
  std::size_t cur = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double cw = ccw_angle(Vec2(rg.sites[i]), u);
    const double cwv = cw >= kTwoPi - kAngleTol ? 0.0 : cw;
    if (cwv < best - kAngleTol) {
      best = cwv;
      cur = i;
    }
  }
  std::vector<std::size_t> seq{cur};
  t.visits.push_back(rg.sites[cur]);
  // Cumulative angles on a continuous branch; the visited arc must grow
  // strictly at the end the sweep moves toward.
  double pos = arg(Vec2(rg.sites[cur]));
  double lo = pos, hi = pos;
  bool ccw = true;
  for (std::size_t step = 0; step <= m; ++step) {
    const SweepResult s = sweep(rg, k, cur, ccw);
    if (!s.next) {
      t.failure = ccw ? "counterclockwise sweep found no site" : "clockwise sweep found no site";
      return t;
    }
    const std::size_t nxt = *s.next;
    if (std::find(seq.begin(), seq.end(), nxt) != seq.end()) t.distinct = false;
    const Vec2 a(rg.sites[cur]), b(rg.sites[nxt]);
    if (ccw) {
      pos += ccw_angle(a, b);
      if (!(pos > hi)) t.nested = false;
      hi = std::max(hi, pos);
    } else {
      pos -= ccw_angle(b, a);
      if (!(pos < lo)) t.nested = false;
      lo = std::min(lo, pos);
    }
    if (hi - lo >= kTwoPi) t.nested = false;
    seq.push_back(nxt);
    t.visits.push_back(rg.sites[nxt]);
    t.good.push_back(s.good);
    if (!t.distinct) {
      t.failure = "sweep revisited a site";
      return t;
    }
    if (s.good) {
      t.success = true;
      t.pair = ccw ? std::pair{rg.sites[cur], rg.sites[nxt]} : std::pair{rg.sites[nxt], rg.sites[cur]};
      return t;
    }
    cur = nxt;
    ccw = !ccw;
  }
  t.failure = "iteration cap reached";
  return t;
}

std::optional<std::pair<Point, Point>> pertinent_pair(const RegenReport& rg, const ShapeConstants& k) {
  const std::size_t m = rg.sites.size();
  if (m < 2) return std::nullopt;
  std::size_t g = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (rg.gaps[i] > rg.gaps[g] + kAngleTol) g = i;
  if (rg.gaps[g] >= kPi) return std::nullopt;
  // Widen cw from v by i sites and ccw from w by j sites, smallest width first.
  struct Cand {
    double width;
    std::size_t i, j;
    bool operator>(const Cand& o) const { return width != o.width ? width > o.width : (i != o.i ? i > o.i : j > o.j); }
  };
  auto width = [&](std::size_t i, std::size_t j) {
    const Point x = rg.sites[(g + m - i) % m], y = rg.sites[(g + 1 + j) % m];
    return ccw_angle(Vec2(x), Vec2(y));
  };
  std::priority_queue<Cand, std::vector<Cand>, std::greater<>> pq;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  pq.push({width(0, 0), 0, 0});
  seen.insert({0, 0});
  while (!pq.empty()) {
    const Cand c = pq.top();
    pq.pop();
    if (c.width >= kPi) break;
    const Point x = rg.sites[(g + m - c.i) % m], y = rg.sites[(g + 1 + c.j) % m];
    if (well_aligned(k, x, y) && outward_facing(rg, x, y)) return std::pair{x, y};
    for (auto [ni, nj] : {std::pair{c.i + 1, c.j}, std::pair{c.i, c.j + 1}}) {
      if (ni + nj + 2 > m || seen.count({ni, nj})) continue;
      seen.insert({ni, nj});
      pq.push({width(ni, nj), ni, nj});
    }
  }
  return std::nullopt;
}

PertinentSearch search_pertinent_pair(const Circuit&, const ShapeConstants& k, const RegenReport& rg, double u_angle) {
  return {search(rg, k, u_angle), pertinent_pair(rg, k)};
}

}  // namespace circreg
