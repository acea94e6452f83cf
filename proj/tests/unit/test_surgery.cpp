#include <cmath>

#include "doctest.h"
#include "circreg/error.hpp"
#include "circreg/surgery.hpp"
#include "oracles.hpp"

using namespace circreg;

namespace {

EdgeSet edges_of(const LatticeBox& box, std::initializer_list<std::pair<Point, Point>> list) {
  std::vector<EdgeId> ids;
  for (auto [a, b] : list) ids.push_back(box.edge_id(a, b));
  return EdgeSet(ids);
}

// Leaves the region closed: breaks the law on purpose.
Resampler closing_resampler() {
  return [](BondConfig& cfg, const EdgeSet& region, const FKParams&, Rng&, const std::vector<std::uint8_t>&) {
    for (EdgeId e : region) cfg.set(e, false);
  };
}

}  // namespace

TEST_SUITE("surgery") {

TEST_CASE("region edges") {
  LatticeBox box(2);
  const EdgeSet s = region_edges(box, SectorA({1, 0}, {0, 1}));
  CHECK_FALSE(s.empty());
  for (EdgeId e : s) {
    const Edge ed = box.edge(e);
    CHECK((ed.a.x >= 0 && ed.a.y >= 0 && ed.b.x >= 0 && ed.b.y >= 0));
    CHECK_FALSE((box.on_interior_boundary(ed.a) && box.on_interior_boundary(ed.b)));
  }
  CHECK(s.contains(box.edge_id({0, 0}, {1, 0})));
  CHECK(s.contains(box.edge_id({1, 1}, {1, 2})));
  CHECK_FALSE(s.contains(box.edge_id({1, 2}, {2, 2})));
  const EdgeSet w = region_edges(box, Wedge::around({1, 0}, 0.1));
  CHECK(w.contains(box.edge_id({0, 0}, {1, 0})));
  CHECK(w.contains(box.edge_id({1, 0}, {2, 0})));
  CHECK(w.size() == 2);
}

TEST_CASE("operating on an empty or boundary region is refused") {
  LatticeBox box(1);
  Rng rng(1);
  const FKParams params = FKParams::from_p(0.5, 2, BoundaryCondition::Free);
  BondConfig cfg(box);
  CHECK_THROWS_AS(sector_storage_replacement(cfg, EdgeSet{}, params, rng), Error);
  CHECK_THROWS_AS(sector_storage_replacement(cfg, edges_of(box, {{{1, 0}, {1, 1}}}), params, rng), Error);
}

TEST_CASE("storage keeps the input bits and leaves the outside alone") {
  LatticeBox box(2);
  Rng rng(2);
  const FKParams params = FKParams::from_p(0.5, 2, BoundaryCondition::Free);
  BondConfig cfg(box);
  for (EdgeId e = 0; e < box.edge_count(); ++e) cfg.set(e, rng.bernoulli(0.5));
  const EdgeSet region = region_edges(box, SectorA({1, 0}, {0, 1}));
  const SurgeryOutcome o = sector_storage_replacement(cfg, region, params, rng);
  CHECK(o.region == region);
  REQUIRE(o.omega2.size() == region.size());
  std::size_t i = 0;
  for (EdgeId e : region) CHECK(o.omega2[i++] == cfg.is_open(e));
  for (EdgeId e = 0; e < box.edge_count(); ++e)
    if (!region.contains(e)) CHECK(o.omega1.is_open(e) == cfg.is_open(e));
}

TEST_CASE("q = 1 resampling is an independent Bernoulli field") {
  LatticeBox box(2);
  Rng rng(3);
  const FKParams params = FKParams::from_p(0.3, 1, BoundaryCondition::Free);
  const EdgeSet region = region_edges(box, SectorA({1, 0}, {-1, 0}));
  BondConfig cfg = BondConfig::from_mask(box, (1ull << 40) - 1);
  std::vector<double> stored, updated;
  double open = 0;
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    const SurgeryOutcome o = sector_storage_replacement(cfg, region, params, rng);
    double s = 0, u = 0;
    for (std::size_t i = 0; i < region.size(); ++i) {
      s += o.omega2[i];
      u += o.omega1.is_open(region.ids()[i]);
    }
    open += u;
    stored.push_back(s);
    updated.push_back(u);
    cfg = o.omega1;
  }
  CHECK(open / (reps * double(region.size())) == doctest::Approx(0.3).epsilon(0.03));
  CHECK(regular_action_contract(stored, updated).regular);
}

TEST_CASE("resampled region follows the exact conditional law") {
  LatticeBox box(1);
  const FKParams params = FKParams::from_p(0.5, 2, BoundaryCondition::Free);
  const ExactDistribution dist = exact_enumerate(box, params);
  const EdgeSet region = edges_of(box, {{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}, {{-1, 0}, {0, 0}}, {{0, -1}, {0, 0}}});
  BondConfig outside(box);
  outside.set({1, 0}, {1, 1}, true);
  outside.set({0, 1}, {1, 1}, true);
  outside.set({-1, -1}, {0, -1}, true);
  const auto exact = exact_conditional(dist, outside, region);
  Rng rng(4);
  std::vector<double> hist(exact.size(), 0.0);
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    const SurgeryOutcome o = sector_storage_replacement(outside, region, params, rng, heat_bath_resampler(5));
    std::size_t key = 0;
    for (std::size_t i = 0; i < region.size(); ++i)
      if (o.omega1.is_open(region.ids()[i])) key |= std::size_t{1} << i;
    hist[key] += 1.0 / reps;
  }
  CHECK(total_variation(hist, exact) < 0.02);
}

TEST_CASE("exact conditional agrees with the oracle law") {
  LatticeBox box(1);
  const auto ref = oracle::fk_law(box, 0.5, 2, BoundaryCondition::Wired);
  const ExactDistribution dist = exact_enumerate(box, FKParams::from_p(0.5, 2, BoundaryCondition::Wired));
  const EdgeSet region = edges_of(box, {{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}});
  const BondConfig outside(box);
  const auto c = exact_conditional(dist, outside, region);
  const EdgeId e0 = region.ids()[0], e1 = region.ids()[1];
  const double w[4] = {ref[0], ref[1ull << e0], ref[1ull << e1], ref[(1ull << e0) | (1ull << e1)]};
  const double z = w[0] + w[1] + w[2] + w[3];
  for (int i = 0; i < 4; ++i) CHECK(c[i] == doctest::Approx(w[i] / z));
}

TEST_CASE("two-step kernel preserves the FK law") {
  LatticeBox box(1);
  const FKParams params = FKParams::from_p(0.5, 2, BoundaryCondition::Free);
  const ExactDistribution dist = exact_enumerate(box, params);
  const EdgeSet region = region_edges(box, SectorA({1, 0}, {0, 1}));
  Rng rng(5);
  const InvarianceReport ok = storage_replacement_invariance(dist, params, region, 20000, rng, 20, heat_bath_resampler(5));
  CHECK(ok.p_value > 0.001);
  CHECK(ok.outside_changes == 0);
  const InvarianceReport bad = storage_replacement_invariance(dist, params, region, 20000, rng, 20, closing_resampler());
  CHECK(bad.p_value < 1e-6);
}

TEST_CASE("regular action detects a resampler that copies the input") {
  LatticeBox box(1);
  const FKParams params = FKParams::from_p(0.5, 2, BoundaryCondition::Free);
  const EdgeSet region = region_edges(box, SectorA({1, 0}, {-1, 0}));
  BondConfig cfg(box);
  cfg.set({-1, -1}, {0, -1}, true);
  Rng rng(6);
  const auto good = regular_action_experiment(cfg, region, params, 3000, rng, heat_bath_resampler(10));
  CHECK(good.regular);
  const auto bad = regular_action_experiment(cfg, region, params, 3000, rng, reuse_stored_resampler());
  CHECK_FALSE(bad.regular);
  CHECK(bad.correlation == doctest::Approx(1.0));
  CHECK_THROWS_AS(regular_action_contract({1, 2}, {1, 2}), Error);
}

TEST_CASE("shift replacement") {
  LatticeBox box(2);
  const EdgeSet a = edges_of(box, {{{-2, -2}, {-1, -2}}});
  const EdgeSet b = edges_of(box, {{{0, 0}, {1, 0}}});
  CHECK(shifted(box, b, {0, 1}) == edges_of(box, {{{0, 1}, {1, 1}}}));
  CHECK_THROWS_AS(shifted(box, b, {5, 0}), Error);

  Rng rng(7);
  BondConfig cfg(box);
  cfg.set({0, 0}, {1, 0}, true);
  cfg.set({-2, -2}, {-1, -2}, true);
  const FKParams params = FKParams::from_p(0.3, 1, BoundaryCondition::Free);
  const BondConfig out = shift_replacement(cfg, a, b, {0, 1}, params, rng);
  CHECK(out.is_open({0, 1}, {1, 1}));
  CHECK(out.is_open({-2, -2}, {-1, -2}));
  CHECK_THROWS_AS(shift_replacement(cfg, b, b, {0, 1}, params, rng), Error);
}

TEST_CASE("exact shift law") {
  LatticeBox box(1);
  const EdgeSet a = edges_of(box, {{{-1, -1}, {0, -1}}});
  const EdgeSet b = edges_of(box, {{{-1, 1}, {0, 1}}});
  // q = 1: the operation is measure preserving.
  const auto d1 = exact_enumerate(box, FKParams::from_p(0.4, 1, BoundaryCondition::Free));
  const ShiftLaw l1 = shift_replacement_law(d1, a, b, {1, 0});
  CHECK(l1.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_variation(l1.output, d1.probabilities()) < 1e-12);
  // q = 2: distorted but with bounded density.
  const auto d2 = exact_enumerate(box, FKParams::from_p(0.5, 2, BoundaryCondition::Free));
  const ShiftLaw l2 = shift_replacement_law(d2, a, b, {1, 0});
  CHECK(std::isfinite(l2.max_ratio));
  CHECK(l2.max_ratio >= 1.0);
  double total = 0;
  for (double v : l2.output) total += v;
  CHECK(total == doctest::Approx(1.0));
  // Zero shift with B disjoint from A is plain resampling of the rest.
  const ShiftLaw l0 = shift_replacement_law(d2, a, b, {0, 0});
  CHECK(total_variation(l0.output, d2.probabilities()) < 1e-12);
}

TEST_CASE("open path seal") {
  LatticeBox box(3);
  BondConfig cfg(box);
  CHECK(open_path_seal(cfg, {}) == cfg);
  const auto path = boundary_path({2, 1}, PathSide::Minus, 3);
  const BondConfig sealed = open_path_seal(cfg, path);
  CHECK(sealed.open_count() == 3);
  CHECK(open_path_seal(sealed, path) == sealed);
}

TEST_CASE("mask sampler and statistics helpers") {
  Rng rng(8);
  const MaskSampler s({0.1, 0.0, 0.6, 0.3});
  std::vector<double> h(4, 0.0);
  for (int i = 0; i < 100000; ++i) h[s(rng)] += 1e-5;
  CHECK(h[1] == 0);
  CHECK(total_variation(h, {0.1, 0.0, 0.6, 0.3}) < 0.01);
  CHECK(total_variation({1, 0}, {0, 1}) == doctest::Approx(1));
  CHECK(chi_square_p_value(0.0, 3) == doctest::Approx(1.0));
  CHECK(chi_square_p_value(3.84146, 1) == doctest::Approx(0.05).epsilon(1e-4));
}

}
