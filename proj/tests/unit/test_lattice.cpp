#include <sstream>

#include "doctest.h"
#include "circreg/error.hpp"
#include "circreg/lattice.hpp"
#include "circreg/rng.hpp"
#include "oracles.hpp"

using namespace circreg;

TEST_SUITE("lattice") {

TEST_CASE("box counts") {
  LatticeBox b1(1);
  CHECK(b1.vertex_count() == 9);
  CHECK(b1.edge_count() == 12);
  CHECK(b1.interior_boundary().size() == 8);
  LatticeBox b2(2);
  CHECK(b2.vertex_count() == 25);
  CHECK(b2.edge_count() == 40);
  CHECK(b2.interior_boundary().size() == 16);
}

TEST_CASE("edge ids round trip and ordering") {
  LatticeBox box(2);
  for (EdgeId e = 0; e < box.edge_count(); ++e) {
    const Edge ed = box.edge(e);
    CHECK(box.edge_id(ed.a, ed.b) == e);
    CHECK(box.edge_id(ed.b, ed.a) == e);
    CHECK(ed.horizontal() == (e < box.horizontal_count()));
  }
  CHECK_FALSE(box.find_edge({0, 0}, {1, 1}));
  CHECK_FALSE(box.find_edge({2, 0}, {3, 0}));
  CHECK_THROWS_AS(box.edge_id({0, 0}, {2, 0}), Error);
}

TEST_CASE("incident edges") {
  LatticeBox box(1);
  EdgeId out[4];
  CHECK(box.incident_edges({0, 0}, out) == 4);
  CHECK(box.incident_edges({1, 1}, out) == 2);
  CHECK(box.incident_edges({1, 0}, out) == 3);
}

TEST_CASE("cluster counts on fixed configurations") {
  LatticeBox b1(1);
  BondConfig closed(b1);
  CHECK(cluster_count(closed, BoundaryCondition::Free) == 9);
  CHECK(cluster_count(closed, BoundaryCondition::Wired) == 9);
  BondConfig open = BondConfig::from_mask(b1, (1u << 12) - 1);
  CHECK(cluster_count(open, BoundaryCondition::Free) == 1);
  CHECK(cluster_count(open, BoundaryCondition::Wired) == 0);

  LatticeBox b2(2);
  BondConfig one(b2);
  one.set({0, 0}, {1, 0}, true);
  CHECK(cluster_count(one, BoundaryCondition::Free) == 24);
}

TEST_CASE("cluster counts agree with a depth-first oracle") {
  Rng rng(11);
  for (int n : {1, 2, 3}) {
    LatticeBox box(n);
    for (int t = 0; t < 300; ++t) {
      BondConfig cfg(box);
      const double p = rng.uniform();
      for (EdgeId e = 0; e < box.edge_count(); ++e) cfg.set(e, rng.bernoulli(p));
      for (auto bc : {BoundaryCondition::Free, BoundaryCondition::Wired})
        CHECK(static_cast<int>(cluster_count(cfg, bc)) == oracle::dfs_cluster_count(cfg, bc));
    }
  }
}

TEST_CASE("open components") {
  LatticeBox box(3);
  BondConfig cfg(box);
  Cluster c = open_component(cfg, {0, 0});
  CHECK(c.vertices == std::vector<Point>{{0, 0}});
  CHECK(c.edges.empty());

  cfg.set({0, 0}, {1, 0}, true);
  cfg.set({1, 0}, {1, 1}, true);
  c = open_component(cfg, {0, 0});
  CHECK(c.vertices.size() == 3);
  CHECK(c.edges.size() == 2);

  BondConfig split(box);
  split.set({0, 0}, {1, 0}, true);
  split.set({2, 0}, {3, 0}, true);
  c = open_component(split, {0, 0});
  CHECK_FALSE(c.contains({2, 0}));
  CHECK(c.edges.size() == 1);

  EdgeSet region({box.edge_id({0, 0}, {1, 0})});
  c = open_component(cfg, {0, 0}, region);
  CHECK(c.vertices.size() == 2);
}

TEST_CASE("edge sets are sorted and unique") {
  EdgeSet s({5, 1, 3, 1});
  CHECK(s.ids() == std::vector<EdgeId>{1, 3, 5});
  s.insert(2);
  s.insert(3);
  CHECK(s.ids() == std::vector<EdgeId>{1, 2, 3, 5});
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(4));
  const auto m = s.mask(6);
  CHECK(m == std::vector<std::uint8_t>{0, 1, 1, 1, 0, 1});
}

TEST_CASE("masks and hex serialization round trip") {
  LatticeBox box(2);
  Rng rng(3);
  std::vector<BondConfig> cfgs;
  for (int t = 0; t < 20; ++t) {
    BondConfig cfg(box);
    for (EdgeId e = 0; e < box.edge_count(); ++e) cfg.set(e, rng.bernoulli(0.5));
    CHECK(BondConfig::from_mask(box, cfg.to_mask()) == cfg);
    CHECK(decode_hex(box, encode_hex(cfg)) == cfg);
    cfgs.push_back(cfg);
  }
  std::stringstream ss;
  write_configs(ss, BoundaryCondition::Wired, cfgs);
  const ConfigFile back = read_configs(ss);
  CHECK(back.box == box);
  CHECK(back.bc == BoundaryCondition::Wired);
  CHECK(back.configs == cfgs);
}

TEST_CASE("hex layout puts edge 0 in the low bit") {
  LatticeBox box(1);
  BondConfig cfg(box);
  cfg.set(0, true);
  cfg.set(9, true);
  CHECK(encode_hex(cfg) == "0102");
}

TEST_CASE("boundary condition names") {
  CHECK(parse_boundary_condition(to_string(BoundaryCondition::Free)) == BoundaryCondition::Free);
  CHECK(parse_boundary_condition(to_string(BoundaryCondition::Wired)) == BoundaryCondition::Wired);
  CHECK_THROWS_AS(parse_boundary_condition("periodic"), Error);
}

TEST_CASE("rng streams differ and are reproducible") {
  Rng a = Rng::stream(7, 0), b = Rng::stream(7, 1), c = Rng::stream(7, 0);
  const auto x = a(), y = b(), z = c();
  CHECK(x != y);
  CHECK(x == z);
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0 && u < 1));
    CHECK(r.below(7) < 7);
  }
}

}
