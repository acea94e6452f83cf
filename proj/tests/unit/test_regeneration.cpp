#include <cmath>

#include "doctest.h"
#include "circreg/error.hpp"
#include "circreg/regeneration.hpp"
#include "circreg/rng.hpp"
#include "regen_oracles.hpp"

using namespace circreg;

namespace {

std::vector<Point> square(int r) {
  std::vector<Point> v;
  for (int x = -r; x < r; ++x) v.push_back({x, -r});
  for (int y = -r; y < r; ++y) v.push_back({r, y});
  for (int x = r; x > -r; --x) v.push_back({x, r});
  for (int y = r; y > -r; --y) v.push_back({-r, y});
  return v;
}

// Square of half-side 10 with a two-wide spike (10,0)->(13,0)->(13,1)->(10,1).
std::vector<Point> spiked_square() {
  std::vector<Point> out;
  for (Point p : square(10)) {
    out.push_back(p);
    if (p == Point{10, 0}) {
      for (Point q : {Point{11, 0}, Point{12, 0}, Point{13, 0}, Point{13, 1}, Point{12, 1}, Point{11, 1}})
        out.push_back(q);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("regeneration") {

TEST_CASE("square circuit sites") {
  const Circuit c = Circuit::from_vertices(square(10));
  const ShapeConstants small{0.2, 0.05};
  CHECK(is_regeneration_site(c, {10, 0}, small));
  const ShapeConstants wide{1.0, 0.05};
  CHECK_FALSE(is_regeneration_site(c, {10, 10}, wide));
  CHECK_THROWS_AS(is_regeneration_site(c, {0, 0}, small), Error);

  // With half-angle pi/2 - 1 the vertical side fits the cones while
  // |y| / 10 <= tan(pi/2 - 1), i.e. |y| <= 6.
  std::vector<Point> expected;
  for (int t = -6; t <= 6; ++t)
    for (Point p : {Point{10, t}, Point{-10, t}, Point{t, 10}, Point{t, -10}}) expected.push_back(p);
  const RegenReport rg = rg_set(c, wide, RegenMode::Circuit);
  std::vector<Point> got = rg.sites;
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  CHECK(got == expected);
  for (Point v : c.vertices()) CHECK(is_regeneration_site(c, v, wide) == oracle::sampled_site(c.segments(), v, wide));
}

TEST_CASE("cluster mode equals circuit mode on a bare circuit") {
  LatticeBox box(12);
  BondConfig cfg(box);
  const auto v = square(10);
  for (std::size_t i = 0; i < v.size(); ++i) cfg.set(v[i], v[(i + 1) % v.size()], true);
  const Circuit c = Circuit::from_vertices(v);
  const ShapeConstants k{1.0, 0.05};
  const RegenReport a = rg_set(c, k, RegenMode::Circuit);
  const RegenReport b = rg_set(c, k, RegenMode::Cluster, &cfg);
  CHECK(a.sites == b.sites);

  // A radial dangling edge inside the wedge of (10, 3) removes that site only.
  cfg.set({10, 3}, {11, 3}, true);
  const RegenReport d = rg_set(c, k, RegenMode::Cluster, &cfg);
  CHECK(std::find(d.sites.begin(), d.sites.end(), Point{10, 3}) == d.sites.end());
  CHECK(d.sites.size() + 1 == a.sites.size());
  CHECK_THROWS_AS(rg_set(c, k, RegenMode::Cluster, nullptr), Error);
}

TEST_CASE("a radial spike kills the sites that see it") {
  const Circuit c = Circuit::from_vertices(spiked_square());
  const ShapeConstants k{0.2, 0.05};
  for (Point v : {Point{10, 0}, Point{10, 1}, Point{11, 0}, Point{13, 0}, Point{13, 1}})
    CHECK_FALSE(is_regeneration_site(c, v, k));
  CHECK(is_regeneration_site(c, {10, 5}, k));
  CHECK(is_regeneration_site(c, {10, -3}, k));
  for (Point v : c.vertices()) CHECK(is_regeneration_site(c, v, k) == oracle::sampled_site(c.segments(), v, k));
}

TEST_CASE("exact site test agrees with dense sampling on random circuits") {
  Rng rng(8);
  LatticeBox box(7);
  const ShapeConstants k{0.25, 0.1};
  std::size_t tested = 0, disagree = 0;
  for (int t = 0; t < 200 && tested < 2000; ++t) {
    BondConfig cfg(box);
    for (EdgeId e = 0; e < box.edge_count(); ++e) cfg.set(e, rng.bernoulli(0.55));
    const auto r = outermost_circuit(cfg);
    if (!r.circuit) continue;
    const auto segs = r.circuit->segments();
    for (Point v : r.circuit->vertices()) {
      const bool exact = is_regeneration_site(segs, v, k);
      const bool sampled = oracle::sampled_site(segs, v, k);
      // Sampling can only miss violations, never invent them.
      CHECK((!exact || sampled));
      disagree += exact != sampled;
      ++tested;
    }
  }
  CHECK(tested > 500);
  CHECK(static_cast<double>(disagree) < 0.01 * static_cast<double>(tested));
}

TEST_CASE("theta max") {
  CHECK(theta_rg_max({0.0, kPi}) == doctest::Approx(kPi));
  CHECK(theta_rg_max({0.0, kPi / 2, kPi, 3 * kPi / 2}) == doctest::Approx(kPi / 2));
  CHECK(theta_rg_max({1.0}) == kTwoPi);
  CHECK(theta_rg_max({}) == kTwoPi);
  const RegenReport one = make_regen_report({{3, 4}});
  CHECK(one.sentinel);
  CHECK(one.theta_max == kTwoPi);
  CHECK(oracle::grid_theta_max(one.args) == kTwoPi);

  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<Point> sites;
    const int m = 2 + static_cast<int>(rng.below(10));
    for (int i = 0; i < m; ++i)
      sites.push_back({static_cast<int>(rng.below(41)) - 20, static_cast<int>(rng.below(41)) - 20});
    sites.erase(std::remove(sites.begin(), sites.end(), Point{0, 0}), sites.end());
    const RegenReport rg = make_regen_report(sites);
    CHECK(std::abs(rg.theta_max - oracle::grid_theta_max(rg.args)) < 1e-3);
    double sum = 0;
    for (double g : rg.gaps) sum += g;
    if (rg.sites.size() > 1) CHECK(sum == doctest::Approx(kTwoPi));
  }
}

TEST_CASE("connection regeneration on a straight segment") {
  std::vector<Point> path;
  for (int x = 0; x <= 20; ++x) path.push_back({x, 0});
  const auto g = LatticeGraph::from_path(path);
  const CRGReport rep = connection_regeneration(g, {0, 0}, {20, 0}, 0.3, 2);
  REQUIRE(rep.sites.size() == 17);
  CHECK(rep.sites.front() == Point{2, 0});
  CHECK(rep.sites.back() == Point{18, 0});
  CHECK(rep.maxreg <= 3);
  CHECK(rep.irregular_clusters == 0);

  // The straight crossing of the closed 2-ball has six edges; the two
  // vertices next to the ends lack its outer edge.
  std::vector<std::pair<Point, Point>> straight;
  for (int x = -3; x < 3; ++x) straight.push_back({{x, 0}, {x + 1, 0}});
  const CRGReport pat = connection_regeneration(g, {0, 0}, {20, 0}, 0.3, 2, straight);
  CHECK(pat.sites == std::vector<Point>(rep.sites.begin() + 1, rep.sites.end() - 1));

  CHECK_THROWS_AS(connection_regeneration(g, {0, 0}, {0, 0}, 0.3, 2), Error);
  CHECK_THROWS_AS(connection_regeneration(g, {0, 0}, {0, 5}, 0.3, 2), Error);
}

TEST_CASE("connection regeneration around a bump") {
  std::vector<Point> path;
  for (int x = 0; x <= 8; ++x) path.push_back({x, 0});
  for (Point p : {Point{8, 1}, Point{8, 2}, Point{8, 3}, Point{9, 3}, Point{10, 3}, Point{10, 2}, Point{10, 1}})
    path.push_back(p);
  for (int x = 10; x <= 20; ++x) path.push_back({x, 0});
  const auto g = LatticeGraph::from_path(path);
  const CRGReport rep = connection_regeneration(g, {0, 0}, {20, 0}, 0.3, 2);
  for (Point s : rep.sites) CHECK_FALSE((s.x >= 8 && s.x <= 10 && s.y > 0));
  CHECK(rep.maxreg >= 2);
}

TEST_CASE("crossing radius") {
  CHECK(default_crossing_radius({1, 0}, 0.3) >= 1);
  CHECK(default_crossing_radius({1, 1}, 0.2) >= default_crossing_radius({1, 0}, 0.2) - 1);
  CHECK_THROWS_AS(default_crossing_radius({0, 0}, 0.3), Error);
}

TEST_CASE("pair predicates") {
  const ShapeConstants k{0.2, 0.1};
  RegenReport rg = make_regen_report({{10, 0}, {10, 1}});
  auto pp = pair_predicates(rg, k, {10, 0}, {10, 1});
  CHECK(pp.well_aligned);
  CHECK(pp.outward_facing);
  rg = make_regen_report({{10, 0}, {10, 1}, {5, 0}});
  CHECK(pair_predicates(rg, k, {10, 0}, {10, 1}).outward_facing);
  rg = make_regen_report({{10, 0}, {10, 1}, {20, 1}});
  CHECK_FALSE(pair_predicates(rg, k, {10, 0}, {10, 1}).outward_facing);
  // The chord meets both cone axes at 45 degrees: inside for q0 = 0.2,
  // outside once the half-angle pi/2 - 2 q0 drops below pi/4.
  rg = make_regen_report({{10, 0}, {0, 10}});
  CHECK(pair_predicates(rg, k, {10, 0}, {0, 10}).well_aligned);
  CHECK_FALSE(pair_predicates(rg, ShapeConstants{0.5, 0.1}, {10, 0}, {0, 10}).well_aligned);
  CHECK_THROWS_AS(pair_predicates(rg, k, {10, 0}, {3, 3}), Error);
}

TEST_CASE("search on a round set of sites") {
  std::vector<Point> sites;
  for (int i = 0; i < 72; ++i) {
    const Vec2 p = 20.0 * unit(kTwoPi * i / 72);
    sites.push_back({static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))});
  }
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  const RegenReport rg = make_regen_report(sites);
  const ShapeConstants k{0.2, 0.1};
  for (int a = 0; a < 16; ++a) {
    const double u = kTwoPi * a / 16 + 0.01;
    const SearchTrace t = search(rg, k, u);
    REQUIRE(t.success);
    CHECK(t.distinct);
    CHECK(t.nested);
    CHECK(t.good.back());
    const auto pp = pair_predicates(rg, k, t.pair->first, t.pair->second);
    CHECK(pp.well_aligned);
    CHECK(pp.outward_facing);
  }
  const auto per = pertinent_pair(rg, k);
  REQUIRE(per);
  const auto pp = pair_predicates(rg, k, per->first, per->second);
  CHECK(pp.well_aligned);
  CHECK(pp.outward_facing);
}

TEST_CASE("search fails cleanly when sites bunch together") {
  const RegenReport rg = make_regen_report({{20, 0}, {20, 1}, {20, 2}});
  const ShapeConstants k{0.2, 0.1};
  const SearchTrace t = search(rg, k, kPi);
  CHECK(t.distinct);
  CHECK(t.nested);
  if (!t.success) CHECK_FALSE(t.failure.empty());
  CHECK_FALSE(pertinent_pair(make_regen_report({}), k));
  CHECK(search(make_regen_report({}), k, 0).failure == "no regeneration sites");
}

}
