#include <sstream>

#include "doctest.h"
#include "circreg/circuits.hpp"
#include "circreg/error.hpp"
#include "circreg/rng.hpp"

using namespace circreg;

namespace {

std::vector<Point> square(int r, Point c = {0, 0}) {
  std::vector<Point> v;
  for (int x = -r; x < r; ++x) v.push_back(Point{x, -r} + c);
  for (int y = -r; y < r; ++y) v.push_back(Point{r, y} + c);
  for (int x = r; x > -r; --x) v.push_back(Point{x, r} + c);
  for (int y = r; y > -r; --y) v.push_back(Point{-r, y} + c);
  return v;
}

void open_cycle(BondConfig& cfg, const std::vector<Point>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) cfg.set(v[i], v[(i + 1) % v.size()], true);
}

void open_path(BondConfig& cfg, const std::vector<Point>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) cfg.set(v[i], v[i + 1], true);
}

}  // namespace

TEST_SUITE("circuits") {

TEST_CASE("circuit construction normalises orientation and start") {
  std::vector<Point> cw{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  const Circuit c = Circuit::from_vertices(cw);
  CHECK(c.vertices().front() == Point{0, 0});
  CHECK(c.area() == 1);
  CHECK(signed_area({c.vertices().begin(), c.vertices().end()}) > 0);
  CHECK_THROWS_AS(Circuit::from_vertices({{0, 0}, {1, 0}, {2, 0}, {1, 0}}), Error);
  CHECK_THROWS_AS(Circuit::from_vertices({{0, 0}, {2, 0}, {2, 2}, {0, 2}}), Error);
}

TEST_CASE("areas") {
  CHECK(interior_area(Circuit::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == 1);
  CHECK(interior_area(Circuit::from_vertices(square(1))) == 4);
  const Circuit l = Circuit::from_vertices({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}, {0, 1}});
  CHECK(l.area() == 3);
  const Circuit s4 = Circuit::from_vertices(square(2));
  CHECK(area_excess(s4, 4) == 0);
  std::vector<Point> v;
  for (int x = -2; x < 3; ++x) v.push_back({x, -2});
  for (int y = -2; y < 2; ++y) v.push_back({3, y});
  for (int x = 3; x > -2; --x) v.push_back({x, 2});
  for (int y = 2; y > -2; --y) v.push_back({-2, y});
  const Circuit r = Circuit::from_vertices(v);
  CHECK(r.area() == 20);
  CHECK(area_excess(r, 4) == 4);
  CHECK_THROWS_AS(area_excess(s4, 5), Error);
}

TEST_CASE("enclosure and translation") {
  const Circuit c = Circuit::from_vertices(square(2));
  CHECK(c.encloses({0, 0}));
  CHECK(c.encloses({1.5, -1.5}));
  CHECK_FALSE(c.encloses({2, 0}));
  CHECK_FALSE(c.encloses({3, 0}));
  CHECK(c.translated({3, 0}).encloses({3, 0}));
  CHECK(c.has_edge({2, 0}, {2, 1}));
  CHECK_FALSE(c.has_edge({0, 0}, {1, 0}));
}

TEST_CASE("outermost circuit fixed cases") {
  LatticeBox box(4);
  BondConfig cfg(box);
  CHECK(outermost_circuit(cfg).status == CircuitStatus::None);

  open_cycle(cfg, square(1));
  auto r = outermost_circuit(cfg);
  REQUIRE(r.found());
  CHECK(r.circuit->length() == 8);
  CHECK(r.circuit->area() == 4);
  CHECK(brute_force_outermost(cfg).circuit == r.circuit);

  open_cycle(cfg, square(2));
  r = outermost_circuit(cfg);
  REQUIRE(r.found());
  CHECK(r.circuit->area() == 16);
  CHECK(brute_force_outermost(cfg).circuit == r.circuit);

  BondConfig off(box);
  open_cycle(off, square(1, {3, 0}));
  CHECK(outermost_circuit(off).status == CircuitStatus::None);
  CHECK(brute_force_outermost(off).status == CircuitStatus::None);

  BondConfig edge(box);
  open_cycle(edge, square(4));
  r = outermost_circuit(edge);
  CHECK(r.status == CircuitStatus::Censored);
  CHECK(r.circuit->area() == 64);
}

TEST_CASE("outermost circuit with a dangling edge and a shared side") {
  LatticeBox box(4);
  BondConfig cfg(box);
  open_cycle(cfg, square(1));
  open_cycle(cfg, square(1, {2, 0}));
  cfg.set({-1, 1}, {-1, 2}, true);
  const auto r = outermost_circuit(cfg);
  REQUIRE(r.found());
  // The two squares share a side, so their union is a 4 x 2 rectangle.
  CHECK(r.circuit->area() == 8);
  CHECK(brute_force_outermost(cfg).circuit == r.circuit);
  CHECK(enumerate_enclosing_circuits(cfg).size() == 2);
}

TEST_CASE("outermost circuit agrees with brute force on random boxes") {
  Rng rng(123);
  for (int n : {1, 2}) {
    LatticeBox box(n);
    for (int t = 0; t < 500; ++t) {
      BondConfig cfg(box);
      const double p = 0.4 + 0.5 * rng.uniform();
      for (EdgeId e = 0; e < box.edge_count(); ++e) cfg.set(e, rng.bernoulli(p));
      const auto a = outermost_circuit(cfg);
      const auto b = brute_force_outermost(cfg);
      CHECK(a.status == b.status);
      CHECK(a.circuit == b.circuit);
    }
  }
}

TEST_CASE("brute force guard") {
  const BondConfig all = BondConfig::from_mask(LatticeBox(2), (1ull << 40) - 1);
  CHECK_THROWS_AS(brute_force_outermost(all, 10), Error);
}

TEST_CASE("outermost open path") {
  LatticeBox box(6);
  BondConfig cfg(box);
  open_path(cfg, {{4, 0}, {4, 1}, {4, 2}, {3, 2}, {2, 2}, {2, 3}, {2, 4}});
  auto p = outermost_open_path(cfg, {4, 0}, {2, 4});
  REQUIRE(p);
  CHECK(p->vertices.size() == 7);

  // A second arc further out wins.
  open_path(cfg, {{4, 0}, {5, 0}, {5, 1}, {5, 2}, {5, 3}, {5, 4}, {4, 4}, {3, 4}, {2, 4}});
  p = outermost_open_path(cfg, {4, 0}, {2, 4});
  REQUIRE(p);
  CHECK(p->vertices.size() == 9);
  CHECK(captured_area(*p) > captured_area({{4, 0}, {2, 4}, {{4, 0}, {4, 1}, {4, 2}, {3, 2}, {2, 2}, {2, 3}, {2, 4}}}));
  CHECK(brute_force_outermost_open_path(cfg, {4, 0}, {2, 4})->vertices == p->vertices);

  BondConfig split(box);
  split.set({4, 0}, {4, 1}, true);
  split.set({2, 3}, {2, 4}, true);
  CHECK_FALSE(outermost_open_path(split, {4, 0}, {2, 4}));
}

TEST_CASE("outermost open path matches brute force on random sectors") {
  Rng rng(77);
  LatticeBox box(3);
  int compared = 0;
  for (int t = 0; t < 400; ++t) {
    BondConfig cfg(box);
    for (EdgeId e = 0; e < box.edge_count(); ++e) cfg.set(e, rng.bernoulli(0.7));
    const Point x{3, 0}, y{1, 3};
    const auto a = outermost_open_path(cfg, x, y);
    const auto b = brute_force_outermost_open_path(cfg, x, y);
    CHECK(a.has_value() == b.has_value());
    if (a && b) {
      CHECK(captured_area(*a) == doctest::Approx(captured_area(*b)));
      ++compared;
    }
  }
  CHECK(compared > 50);
}

TEST_CASE("common cluster and fluctuation") {
  LatticeBox box(5);
  BondConfig cfg(box);
  open_path(cfg, {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  std::vector<EdgeId> all(box.edge_count());
  for (EdgeId e = 0; e < all.size(); ++e) all[e] = e;
  const EdgeSet region(all);
  auto c = common_cluster(cfg, {0, 0}, {3, 0}, region);
  REQUIRE(c);
  CHECK(c->edges.size() == 3);
  CHECK(fluctuation(*c, {0, 0}, {3, 0}) == 0);
  cfg.set({1, 0}, {1, 1}, true);
  c = common_cluster(cfg, {0, 0}, {3, 0}, region);
  CHECK(c->contains({1, 1}));
  CHECK_FALSE(common_cluster(cfg, {0, 0}, {0, 3}, region));

  BondConfig stair(box);
  open_path(stair, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 1}, {3, 0}, {4, 0}});
  const Cluster s = open_component(stair, {0, 0});
  CHECK(fluctuation(s, {0, 0}, {4, 0}) == doctest::Approx(1));

  BondConfig unit_edge(box);
  unit_edge.set({0, 0}, {1, 0}, true);
  CHECK(fluctuation(open_component(unit_edge, {0, 0}), {0, 0}, {0, 0}) == doctest::Approx(1));
  CHECK_THROWS_AS(fluctuation(s, {0, 0}, {5, 5}), Error);
}

TEST_CASE("good area capture") {
  // Straight path along the chord captures exactly the triangle.
  SectorPath flat{{4, 0}, {0, 4}, {{4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}}};
  CHECK_FALSE(good_area_capture(flat, 0.1));
  // Far bulge with a large diameter.
  SectorPath far{{4, 0}, {0, 4}, {{4, 0}, {40, 0}, {40, 40}, {0, 40}, {0, 4}}};
  CHECK_FALSE(good_area_capture(far, 0.1));
  // A moderate bulge: |I| = 16 - 8 + 16 ... evaluated directly.
  SectorPath bulge{{4, 0}, {0, 4}, {{4, 0}, {5, 0}, {5, 5}, {0, 5}, {0, 4}}};
  const double d = std::sqrt(32.0);
  const double captured = 25.0;
  CHECK(captured_area(bulge) == doctest::Approx(captured));
  CHECK(good_area_capture(bulge, 0.1) == (captured >= 8 + 0.1 * std::pow(d, 1.5) * std::sqrt(std::log(d))));
  SectorPath tiny{{1, 0}, {1, 1}, {{1, 0}, {1, 1}}};
  CHECK_THROWS_AS(good_area_capture(tiny, 0.1), Error);
}

TEST_CASE("circuit output formats") {
  const Circuit c = Circuit::from_vertices(square(1));
  std::ostringstream csv, rec;
  write_circuit_csv(csv, c);
  CHECK(csv.str().rfind("index,x,y\n0,-1,-1\n", 0) == 0);
  write_circuit_record(rec, c, {{"n", "3"}});
  CHECK(rec.str() == "length=8\narea=4\nstart=-1,-1\nn=3\n");
}

}
