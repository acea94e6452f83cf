#include <benchmark/benchmark.h>

#include "circreg/circuits.hpp"
#include "circreg/conditioning.hpp"
#include "circreg/fk.hpp"
#include "circreg/geometry.hpp"
#include "circreg/wulff.hpp"

using namespace circreg;

namespace {

BondConfig warmed(const LatticeBox& box, const FKParams& params, std::size_t sweeps) {
  BondConfig cfg(box);
  Rng rng(params.seed());
  HeatBath hb(box);
  for (std::size_t i = 0; i < sweeps; ++i) hb.sweep(cfg, params, rng);
  return cfg;
}

std::vector<Point> square(int r) {
  std::vector<Point> v;
  for (int x = -r; x < r; ++x) v.push_back({x, -r});
  for (int y = -r; y < r; ++y) v.push_back({r, y});
  for (int x = r; x > -r; --x) v.push_back({x, r});
  for (int y = r; y > -r; --y) v.push_back({-r, y});
  return v;
}

void BM_HeatBathSweep(benchmark::State& state) {
  const LatticeBox box(static_cast<int>(state.range(0)));
  const FKParams params(0.35, 2, BoundaryCondition::Free, 1);
  BondConfig cfg = warmed(box, params, 20);
  HeatBath hb(box);
  Rng rng(2);
  for (auto _ : state) hb.sweep(cfg, params, rng);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(box.edge_count()));
}
BENCHMARK(BM_HeatBathSweep)->Arg(8)->Arg(16)->Arg(32);

void BM_ClusterSweep(benchmark::State& state) {
  const LatticeBox box(static_cast<int>(state.range(0)));
  const FKParams params(0.35, 2, BoundaryCondition::Wired, 1);
  BondConfig cfg = warmed(box, params, 20);
  Rng rng(3);
  for (auto _ : state) cluster_sweep(cfg, params, rng);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(box.edge_count()));
}
BENCHMARK(BM_ClusterSweep)->Arg(8)->Arg(16)->Arg(32);

void BM_OutermostCircuit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LatticeBox box(2 * n);
  BondConfig cfg = warmed(box, FKParams(0.35, 2, BoundaryCondition::Free, 4), 20);
  const auto sq = square(n);
  for (std::size_t i = 0; i < sq.size(); ++i) cfg.set(sq[i], sq[(i + 1) % sq.size()], true);
  for (auto _ : state) benchmark::DoNotOptimize(outermost_circuit(cfg));
}
BENCHMARK(BM_OutermostCircuit)->Arg(8)->Arg(16);

void BM_Hausdorff(benchmark::State& state) {
  const Circuit c = Circuit::from_vertices(square(static_cast<int>(state.range(0))));
  const SegmentSet a = c.segment_set(), b = c.translated({1, 2}).segment_set();
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_distance(a, b));
}
BENCHMARK(BM_Hausdorff)->Arg(8)->Arg(16);

void BM_GlobalDistortion(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WulffShape disk = build_wulff(XiTable::from_function([](double) { return 1.0; }));
  const Circuit c = Circuit::from_vertices(square(n / 2));
  for (auto _ : state) benchmark::DoNotOptimize(global_distortion(c, disk, n));
}
BENCHMARK(BM_GlobalDistortion)->Arg(8)->Arg(16);

void BM_RestrictedSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FKParams params(0.35, 2, BoundaryCondition::Free, 5);
  ConditionOptions o;
  o.n = n;
  o.burnin = 0;
  o.samples = 1;
  o.thin = 1;
  o.analyse = false;
  for (auto _ : state) benchmark::DoNotOptimize(restricted_chain(params, LatticeBox(2 * n), o, nullptr));
}
BENCHMARK(BM_RestrictedSweep)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
