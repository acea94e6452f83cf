#include <cmath>

#include "doctest.h"
#include "circreg/conditioning.hpp"
#include "circreg/error.hpp"
#include "circreg/surgery.hpp"

using namespace circreg;

namespace {

ShapeContext disk_context() {
  WulffShape w = build_wulff(XiTable::from_function([](double) { return 1.0; }));
  const ShapeConstants k = choose_constants(w);
  return {w, k};
}

std::vector<Point> square(int r) {
  std::vector<Point> v;
  for (int x = -r; x < r; ++x) v.push_back({x, -r});
  for (int y = -r; y < r; ++y) v.push_back({r, y});
  for (int x = r; x > -r; --x) v.push_back({x, r});
  for (int y = r; y > -r; --y) v.push_back({-r, y});
  return v;
}

}  // namespace

TEST_SUITE("conditioning") {

TEST_CASE("event names") {
  CHECK(parse_event_kind("area_only") == EventKind::AreaOnly);
  CHECK(parse_event_kind("area_and_centred") == EventKind::AreaAndCentred);
  CHECK(to_string(EventKind::AreaAndCentred) == "area_and_centred");
  CHECK_THROWS_AS(parse_event_kind("centred"), Error);
}

TEST_CASE("event membership") {
  const ShapeContext ctx = disk_context();
  LatticeBox box(6);
  BondConfig cfg(box);
  CHECK_FALSE(in_event(cfg, 2, EventKind::AreaOnly, nullptr, false));
  const auto v = square(2);
  for (std::size_t i = 0; i < v.size(); ++i) cfg.set(v[i], v[(i + 1) % v.size()], true);
  CHECK(in_event(cfg, 4, EventKind::AreaOnly, nullptr, false));
  CHECK_FALSE(in_event(cfg, 5, EventKind::AreaOnly, nullptr, false));
  CHECK(in_event(cfg, 4, EventKind::AreaAndCentred, &ctx, false));

  LatticeBox small(1);
  BondConfig ring(small);
  const auto r = square(1);
  for (std::size_t i = 0; i < r.size(); ++i) ring.set(r[i], r[(i + 1) % r.size()], true);
  CHECK_FALSE(in_event(ring, 2, EventKind::AreaOnly, nullptr, false));
  CHECK(in_event(ring, 2, EventKind::AreaOnly, nullptr, true));
}

TEST_CASE("restricted chain guards") {
  const FKParams params(0.3, 1, BoundaryCondition::Free, 1);
  ConditionOptions opt;
  opt.n = 4;
  opt.analyse = false;
  CHECK_THROWS_AS(restricted_chain(params, LatticeBox(6), opt, nullptr), Error);
  opt.event = EventKind::AreaAndCentred;
  CHECK_THROWS_AS(restricted_chain(params, LatticeBox(8), opt, nullptr), Error);
}

TEST_CASE("restricted chain stays in the event") {
  const ShapeContext ctx = disk_context();
  for (double q : {1.0, 2.0}) {
    const FKParams params(0.25, q, BoundaryCondition::Free, 3);
    ConditionOptions opt;
    opt.n = 4;
    opt.burnin = 20;
    opt.samples = 40;
    opt.thin = 2;
    opt.chains = 2;
    std::size_t visits = 0;
    const ConditionedRun run = restricted_chain(params, LatticeBox(8), opt, &ctx, [&](const BondConfig& c, std::size_t) {
      ++visits;
      CHECK(in_event(c, 4, EventKind::AreaOnly, nullptr, false));
    });
    CHECK(run.event_violations == 0);
    CHECK(run.samples.size() == 80);
    CHECK(visits == 80);
    CHECK(run.changes > 0);
    for (const auto& s : run.samples) {
      CHECK(s.area >= 16);
      CHECK(s.exc == doctest::Approx(s.area - 16));
      CHECK(s.cluster_subset);
      CHECK(s.search_violations == 0);
      CHECK(s.theta_circuit <= kTwoPi);
      CHECK(s.min_radius <= s.max_radius);
    }
    CHECK(run.series([](const ConditionedSample& s) { return s.area; }, 1).size() == 40);
  }
}

TEST_CASE("restricted chain on the smallest box matches the exact conditional law") {
  // n = 2 on N = 1 forces the boundary ring open; the four inner edges move freely.
  LatticeBox box(1);
  const FKParams params = FKParams::from_p(0.5, 2, BoundaryCondition::Free, 9);
  const ExactDistribution dist = exact_enumerate(box, params);
  std::vector<double> exact(dist.size(), 0.0);
  double z = 0;
  for (std::uint64_t m = 0; m < dist.size(); ++m)
    if (in_event(BondConfig::from_mask(box, m), 2, EventKind::AreaOnly, nullptr, true)) {
      exact[m] = dist.probability(m);
      z += exact[m];
    }
  for (double& v : exact) v /= z;
  ConditionOptions opt;
  opt.n = 2;
  opt.small_box = true;
  opt.analyse = false;
  opt.burnin = 50;
  opt.samples = 40000;
  opt.thin = 1;
  std::vector<double> hist(dist.size(), 0.0);
  restricted_chain(params, box, opt, nullptr,
                   [&](const BondConfig& c, std::size_t) { hist[c.to_mask()] += 1.0 / 40000; });
  CHECK(total_variation(hist, exact) < 0.03);
}

TEST_CASE("tail curves") {
  ConditionedRun run;
  run.n = 8;
  Rng rng(1);
  for (int i = 0; i < 4000; ++i) {
    ConditionedSample s;
    s.chain = 0;
    s.theta_circuit = -std::log(1 - rng.uniform()) / 8.0;  // P(theta > u / 8) = e^{-u}
    s.exc = std::floor(-std::log(1 - rng.uniform()) * 10);
    s.gd = rng.uniform() * 8;
    run.samples.push_back(s);
  }
  const TailCurve t = theta_tail(run, {0, 0.5, 1, 1.5, 2, 2.5, 3}, 100);
  CHECK(t.points.front().estimate == 1.0);
  CHECK(t.monotone);
  REQUIRE(t.fit);
  CHECK(t.fit->slope == doctest::Approx(-1.0).epsilon(0.1));
  CHECK(t.fit->r2 > 0.95);
  const TailCurve e = exc_tail(run, {0, 0.5, 1, 1.5, 2}, 100);
  CHECK(e.points.front().estimate == 1.0);
  const TailCurve g = gd_tail(run, {0, 0.25, 0.5, 1.5}, 100);
  CHECK(g.points.back().estimate == 0.0);
  CHECK(tail_grid({0.0, 2.0}, 5) == std::vector<double>{0, 0.5, 1, 1.5, 2});
  CHECK(run_ess(run, [](const ConditionedSample& s) { return s.theta_circuit; }) > 3000);
}

TEST_CASE("too few effective samples are refused") {
  ConditionedRun run;
  for (int i = 0; i < 20; ++i) {
    ConditionedSample s;
    s.theta_circuit = 0.1 * i;
    run.samples.push_back(s);
  }
  CHECK_THROWS_AS(theta_tail(run, {0, 1}), Error);
}

TEST_CASE("theta scaling on synthetic logarithmic data") {
  Rng rng(2);
  const std::vector<int> ns{8, 12, 16};
  std::vector<std::vector<double>> thetas;
  for (int n : ns) {
    std::vector<double> v;
    for (int i = 0; i < 3000; ++i) v.push_back((std::log(n) + 1) * (0.5 + rng.uniform()) / n);
    thetas.push_back(v);
  }
  const ScalingCheck s = theta_scaling(ns, thetas, rng);
  CHECK(s.sublinear);
  CHECK(s.log_consistent);
  CHECK(s.log_fit.slope > 0);

  std::vector<std::vector<double>> linear;
  for (std::size_t i = 0; i < ns.size(); ++i) linear.push_back(std::vector<double>(500, 0.5));
  // n * median grows linearly when the median itself is constant.
  const ScalingCheck l = theta_scaling(ns, linear, rng);
  CHECK_FALSE(l.sublinear);
}

}
