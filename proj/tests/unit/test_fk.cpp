#include <cmath>

#include "doctest.h"
#include "circreg/error.hpp"
#include "circreg/fk.hpp"
#include "circreg/surgery.hpp"
#include "oracles.hpp"

using namespace circreg;

TEST_SUITE("fk") {

TEST_CASE("beta and p") {
  const FKParams a(0.5, 2, BoundaryCondition::Free);
  CHECK(a.p() == doctest::Approx(1 - std::exp(-1.0)));
  const FKParams b = FKParams::from_p(0.3, 1, BoundaryCondition::Wired);
  CHECK(b.p() == doctest::Approx(0.3));
  CHECK(b.beta() == doctest::Approx(-0.5 * std::log(0.7)));
  CHECK(critical_beta(2) == doctest::Approx(0.5 * std::log(1 + std::sqrt(2.0))));
  CHECK(FKParams(0.3, 2, BoundaryCondition::Free).subcritical());
  CHECK_FALSE(FKParams(0.6, 2, BoundaryCondition::Free).subcritical());
  CHECK_THROWS_AS(FKParams(0.3, 0.5, BoundaryCondition::Free), Error);
  CHECK_THROWS_AS(FKParams(-0.1, 2, BoundaryCondition::Free), Error);
}

TEST_CASE("conditional open probabilities") {
  CHECK(open_probability(0.37, 1, -1) == doctest::Approx(0.37));
  CHECK(open_probability(0.37, 3, 0) == doctest::Approx(0.37));
  CHECK(open_probability(0.5, 2, -1) == doctest::Approx(1.0 / 3));
  // p q^{-2} / (p q^{-2} + 1 - p)
  CHECK(open_probability(0.5, 2, -2) == doctest::Approx(0.125 / 0.625));
  auto [lo, hi] = bounded_energy_bounds(0.5, 2, BoundaryCondition::Free);
  CHECK(lo == doctest::Approx(1.0 / 3));
  CHECK(hi == doctest::Approx(0.5));
  std::tie(lo, hi) = bounded_energy_bounds(0.4, 1, BoundaryCondition::Free);
  CHECK(lo == doctest::Approx(0.4));
  CHECK(hi == doctest::Approx(0.4));
  std::tie(lo, hi) = bounded_energy_bounds(0, 3, BoundaryCondition::Free);
  CHECK(lo == 0);
  CHECK(hi == 0);
}

TEST_CASE("heat-bath step thresholds") {
  LatticeBox box(1);
  const FKParams params = FKParams::from_p(0.5, 2, BoundaryCondition::Free);
  const BondConfig empty(box);
  const EdgeId e = box.edge_id({0, 0}, {1, 0});
  CHECK(heat_bath_step(empty, params, e, 0.33).is_open(e));
  CHECK_FALSE(heat_bath_step(empty, params, e, 0.34).is_open(e));

  // With the endpoints already joined the edge sees probability p.
  BondConfig loop(box);
  loop.set({0, 0}, {0, 1}, true);
  loop.set({0, 1}, {1, 1}, true);
  loop.set({1, 1}, {1, 0}, true);
  CHECK(heat_bath_step(loop, params, e, 0.49).is_open(e));
  CHECK_FALSE(heat_bath_step(loop, params, e, 0.51).is_open(e));
}

TEST_CASE("edge context matches the oracle cluster count difference") {
  Rng rng(5);
  for (auto bc : {BoundaryCondition::Free, BoundaryCondition::Wired}) {
    LatticeBox box(2);
    HeatBath hb(box);
    for (int t = 0; t < 200; ++t) {
      BondConfig cfg(box);
      for (EdgeId e = 0; e < box.edge_count(); ++e) cfg.set(e, rng.bernoulli(0.45));
      const EdgeId e = static_cast<EdgeId>(rng.below(box.edge_count()));
      BondConfig on = cfg, off = cfg;
      on.set(e, true);
      off.set(e, false);
      const int dk = oracle::dfs_cluster_count(on, bc) - oracle::dfs_cluster_count(off, bc);
      CHECK(hb.context(cfg, bc, e).delta_k == dk);
    }
  }
}

TEST_CASE("exact enumeration matches the independent oracle") {
  LatticeBox box(1);
  for (auto bc : {BoundaryCondition::Free, BoundaryCondition::Wired})
    for (auto [p, q] : {std::pair{0.3, 1.0}, {0.5, 1.5}, {0.5, 2.0}, {0.6, 4.0}}) {
      const auto dist = exact_enumerate(box, FKParams::from_p(p, q, bc));
      const auto ref = oracle::fk_law(box, p, q, bc);
      REQUIRE(dist.size() == ref.size());
      double worst = 0;
      for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(dist.probabilities()[i] - ref[i]));
      CHECK(worst < 1e-14);
    }
}

TEST_CASE("exact enumeration fixed values") {
  LatticeBox box(1);
  const auto d = exact_enumerate(box, FKParams::from_p(0.5, 1, BoundaryCondition::Free));
  CHECK(d.probability((1u << 12) - 1) == doctest::Approx(std::pow(0.5, 12)));
  const auto d2 = exact_enumerate(box, FKParams::from_p(0.3, 1, BoundaryCondition::Free));
  CHECK(d2.expectation([](const BondConfig& c) { return double(c.open_count()); }) == doctest::Approx(3.6));
  CHECK_THROWS_AS(exact_enumerate(LatticeBox(3), FKParams::from_p(0.3, 1, BoundaryCondition::Free)), Error);
}

TEST_CASE("heat-bath kernel is reversible") {
  LatticeBox box(1);
  for (auto bc : {BoundaryCondition::Free, BoundaryCondition::Wired}) {
    const FKParams params = FKParams::from_p(0.5, 2, bc);
    CHECK(detailed_balance_error(exact_enumerate(box, params), params) < 1e-12);
  }
}

TEST_CASE("q = 1 sweeps give independent bonds") {
  LatticeBox box(3);
  const FKParams params = FKParams::from_p(0.3, 1, BoundaryCondition::Free);
  Rng rng(9);
  for (auto dyn : {Dynamics::HeatBath, Dynamics::Cluster}) {
    BondConfig cfg(box);
    double open = 0, pairs = 0;
    const int sweeps = 2000;
    for (int s = 0; s < sweeps; ++s) {
      if (dyn == Dynamics::HeatBath) {
        HeatBath hb(box);
        hb.sweep(cfg, params, rng);
      } else {
        cluster_sweep(cfg, params, rng);
      }
      open += double(cfg.open_count());
      pairs += cfg.is_open(0) && cfg.is_open(1);
    }
    const double m = double(box.edge_count()) * sweeps;
    CHECK(open / m == doctest::Approx(0.3).epsilon(0.02));
    CHECK(pairs / sweeps == doctest::Approx(0.09).epsilon(0.2));
  }
}

TEST_CASE("samplers reproduce exact edge marginals") {
  LatticeBox box(1);
  for (auto bc : {BoundaryCondition::Free, BoundaryCondition::Wired}) {
    const FKParams params = FKParams::from_p(0.5, 2, bc);
    const auto exact = exact_enumerate(box, params);
    const double mean_open = exact.expectation([](const BondConfig& c) { return double(c.open_count()); });
    for (auto dyn : {Dynamics::HeatBath, Dynamics::Cluster}) {
      Rng rng(21);
      const auto law = empirical_law(box, params, dyn, 100000, 100, rng);
      double m = 0;
      for (std::size_t i = 0; i < law.size(); ++i) m += law[i] * __builtin_popcountll(i);
      CHECK(m == doctest::Approx(mean_open).epsilon(0.01));
      CHECK(total_variation(law, exact.probabilities()) < 0.12);
    }
  }
}

TEST_CASE("two-point connectivity against enumeration") {
  LatticeBox box(1);
  const FKParams params = FKParams::from_p(0.4, 2, BoundaryCondition::Free, 4);
  const auto exact = exact_enumerate(box, params).expectation(
      [](const BondConfig& c) { return oracle::connected(c, {0, 0}, {1, 0}) ? 1.0 : 0.0; });
  SamplingOptions opt;
  opt.sweeps = 40000;
  const auto res = two_point_connectivity(params, box, {{{0, 0}, {1, 0}}}, opt);
  REQUIRE(res.rows.size() == 1);
  CHECK(std::abs(res.rows[0].estimate - exact) < 4 * res.rows[0].stderr_ + 1e-3);
}

TEST_CASE("q = 1 adjacent pair on a path-free box") {
  // Distance-k axis pairs are at least p^k likely.
  LatticeBox box(4);
  const FKParams params = FKParams::from_p(0.25, 1, BoundaryCondition::Free, 2);
  SamplingOptions opt;
  opt.sweeps = 4000;
  const auto res = two_point_connectivity(params, box, {{{0, 0}, {1, 0}}, {{0, 0}, {2, 0}}}, opt);
  CHECK(res.rows[0].estimate >= 0.25 - 4 * res.rows[0].stderr_);
  CHECK(res.rows[1].estimate >= 0.0625 - 4 * res.rows[1].stderr_);
}

TEST_CASE("decay check") {
  LatticeBox box(8);
  const FKParams params = FKParams::from_p(0.25, 1, BoundaryCondition::Free, 3);
  SamplingOptions opt;
  opt.sweeps = 2000;
  const auto rep = decay_and_mixing_check(params, box, {1, 2, 3, 4}, opt);
  CHECK(rep.slope < 0);
  for (const auto& m : rep.mixing) CHECK(m.statistic < 5 * m.stderr_ + 0.05);
  CHECK_THROWS_AS(decay_and_mixing_check(params, box, {2}, opt), Error);
}

TEST_CASE("run_chain visits every retained sweep") {
  LatticeBox box(2);
  const FKParams params = FKParams::from_p(0.5, 2, BoundaryCondition::Wired);
  Rng rng(1);
  BondConfig cfg(box);
  SamplingOptions opt;
  opt.sweeps = 17;
  opt.burnin = 3;
  int visits = 0;
  run_chain(cfg, params, rng, opt, [&](const BondConfig&) { ++visits; });
  CHECK(visits == 17);
}

}
