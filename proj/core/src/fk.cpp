#include "circreg/fk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circreg/error.hpp"
#include "circreg/stats.hpp"

namespace circreg {

FKParams::FKParams(double beta, double q, BoundaryCondition bc, std::uint64_t seed)
    : beta_(beta), q_(q), p_(-std::expm1(-2.0 * beta)), bc_(bc), seed_(seed) {
  require(std::isfinite(beta) && beta > 0, ErrorKind::InvalidParameter, "beta must be a positive number");
  require(std::isfinite(q), ErrorKind::InvalidParameter, "q must be finite");
  require(q >= 1, ErrorKind::Unsupported, "q < 1 is outside the supported (FKG) regime");
}

FKParams FKParams::from_p(double p, double q, BoundaryCondition bc, std::uint64_t seed) {
  require(p > 0 && p < 1, ErrorKind::InvalidParameter, "p must lie in (0, 1)");
  return FKParams(beta_from_p(p), q, bc, seed);
}

bool FKParams::subcritical() const { return beta_ < critical_beta(q_); }

double critical_beta(double q) {
  require(q >= 1, ErrorKind::Unsupported, "q < 1 is outside the supported regime");
  return 0.5 * std::log(1.0 + std::sqrt(q));
}

double beta_from_p(double p) {
  require(p >= 0 && p < 1, ErrorKind::InvalidParameter, "p must lie in [0, 1)");
  return -0.5 * std::log1p(-p);
}

double open_probability(double p, double q, int delta_k) {
  if (p <= 0) return 0.0;
  return p / (p + (1.0 - p) * std::pow(q, -delta_k));
}

HeatBath::HeatBath(const LatticeBox& box) : box_(box), stamp_(box.vertex_count(), 0) {}

void HeatBath::reset_stamps() {
  epoch_ += 2;
  if (epoch_ >= 0xfffffff0u) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 2;
  }
}

std::size_t HeatBath::explore(const BondConfig& cfg, Side& side, std::uint32_t mark, std::uint32_t other,
                              EdgeId skip, bool& met, std::size_t budget) {
  std::size_t done = 0;
  while (done < budget && side.head < side.frontier.size()) {
    Point v = box_.vertex(side.frontier[side.head++]);
    ++done;
    EdgeId inc[4];
    int k = box_.incident_edges(v, inc);
    for (int i = 0; i < k; ++i) {
      EdgeId f = inc[i];
      if (f == skip || !cfg.is_open(f)) continue;
      Edge ed = box_.edge(f);
      Point w = ed.a == v ? ed.b : ed.a;
      VertexId wid = box_.vertex_id(w);
      if (stamp_[wid] == other) {
        met = true;
        return done;
      }
      if (stamp_[wid] != mark) {
        stamp_[wid] = mark;
        side.frontier.push_back(wid);
        ++side.size;
        side.boundary = side.boundary || box_.on_interior_boundary(w);
      }
    }
  }
  return done;
}

bool HeatBath::connected_off_edge(const BondConfig& cfg, Point a, Point b, EdgeId skip) {
  if (a == b) return true;
  reset_stamps();
  const std::uint32_t ma = epoch_, mb = epoch_ + 1;
  sa_ = Side{{box_.vertex_id(a)}, 0, 1, box_.on_interior_boundary(a)};
  sb_ = Side{{box_.vertex_id(b)}, 0, 1, box_.on_interior_boundary(b)};
  stamp_[box_.vertex_id(a)] = ma;
  stamp_[box_.vertex_id(b)] = mb;
  bool met = false;
  while (sa_.head < sa_.frontier.size() && sb_.head < sb_.frontier.size()) {
    explore(cfg, sa_, ma, mb, skip, met, 1);
    if (met) return true;
    explore(cfg, sb_, mb, ma, skip, met, 1);
    if (met) return true;
  }
  return false;
}

EdgeContext HeatBath::context(const BondConfig& cfg, BoundaryCondition bc, EdgeId e) {
  Edge ed = box_.edge(e);
  if (connected_off_edge(cfg, ed.a, ed.b, e)) return {true, 0};
  if (bc == BoundaryCondition::Free) return {false, -1};
  // Finish both components to learn their size and boundary contact.
  const std::uint32_t ma = epoch_, mb = epoch_ + 1;
  bool met = false;
  explore(cfg, sa_, ma, mb, e, met, static_cast<std::size_t>(-1));
  explore(cfg, sb_, mb, ma, e, met, static_cast<std::size_t>(-1));
  if (met) fail(ErrorKind::Internal, "components met after exhaustion");
  auto counted = [](const Side& s) { return !(s.boundary && s.size >= 2); };
  const int merged = (sa_.boundary || sb_.boundary) ? 0 : 1;
  return {false, merged - static_cast<int>(counted(sa_)) - static_cast<int>(counted(sb_))};
}

bool HeatBath::step(BondConfig& cfg, const FKParams& params, EdgeId e, double u) {
  require(e < cfg.size(), ErrorKind::InvalidParameter, "edge outside the box");
  double prob = params.p();
  if (params.q() != 1.0) prob = open_probability(params.p(), params.q(), context(cfg, params.bc(), e).delta_k);
  const bool open = u < prob;
  cfg.set(e, open);
  return open;
}

void HeatBath::sweep(BondConfig& cfg, const FKParams& params, Rng& rng) {
  for (EdgeId e = 0; e < cfg.size(); ++e) step(cfg, params, e, rng.uniform());
}

BondConfig heat_bath_step(const BondConfig& cfg, const FKParams& params, EdgeId edge, double u) {
  BondConfig out = cfg;
  HeatBath hb(cfg.box());
  hb.step(out, params, edge, u);
  return out;
}

void cluster_sweep(BondConfig& cfg, const FKParams& params, Rng& rng) {
  const double p = params.p(), q = params.q();
  require(q >= 1, ErrorKind::Unsupported, "cluster sweep needs q >= 1");
  if (q == 1.0) {
    for (EdgeId e = 0; e < cfg.size(); ++e) cfg.set(e, rng.uniform() < p);
    return;
  }
  const LatticeBox& box = cfg.box();
  const bool wired = params.bc() == BoundaryCondition::Wired;
  UnionFind uf(box.vertex_count());
  for (EdgeId e = 0; e < cfg.size(); ++e) {
    if (!cfg.is_open(e)) continue;
    Edge ed = box.edge(e);
    uf.unite(box.vertex_id(ed.a), box.vertex_id(ed.b));
  }
  // 0 = undecided, 1 = active, 2 = inactive
  std::vector<std::uint8_t> state(box.vertex_count(), 0);
  if (wired) {
    for (EdgeId e = 0; e < cfg.size(); ++e)
      if (cfg.is_open(e) && box.touches_interior_boundary(e)) state[uf.find(box.vertex_id(box.edge(e).a))] = 2;
  }
  const double activate = 1.0 / q;
  for (VertexId v = 0; v < box.vertex_count(); ++v) {
    if (uf.find(v) == v && state[v] == 0) state[v] = rng.uniform() < activate ? 1 : 2;
  }
  for (EdgeId e = 0; e < cfg.size(); ++e) {
    Edge ed = box.edge(e);
    const bool a = state[uf.find(box.vertex_id(ed.a))] == 1;
    const bool b = state[uf.find(box.vertex_id(ed.b))] == 1;
    if (a && b) {
      const bool blocked = wired && box.touches_interior_boundary(e);
      const double u = rng.uniform();
      cfg.set(e, !blocked && u < p);
    } else if (a || b) {
      cfg.set(e, false);
    }
  }
  if (!wired) return;
  // The cluster move never opens an edge at the boundary, so on its own it is
  // not irreducible here; a heat-bath pass over those edges restores that.
  HeatBath hb(box);
  for (EdgeId e = 0; e < cfg.size(); ++e)
    if (box.touches_interior_boundary(e)) hb.step(cfg, params, e, rng.uniform());
}

ExactDistribution::ExactDistribution(LatticeBox box, std::vector<double> probs)
    : box_(box), probs_(std::move(probs)) {}

double ExactDistribution::expectation(const std::function<double(const BondConfig&)>& f) const {
  double acc = 0;
  for (std::uint64_t m = 0; m < probs_.size(); ++m) {
    if (probs_[m] == 0) continue;
    acc += probs_[m] * f(BondConfig::from_mask(box_, m));
  }
  return acc;
}

double log_weight(const BondConfig& cfg, double p, double q, BoundaryCondition bc) {
  const double open = static_cast<double>(cfg.open_count());
  const double closed = static_cast<double>(cfg.size()) - open;
  auto term = [](double count, double prob) { return count == 0 ? 0.0 : count * std::log(prob); };
  return term(open, p) + term(closed, 1 - p) + static_cast<double>(cluster_count(cfg, bc)) * std::log(q);
}

ExactDistribution exact_enumerate(const LatticeBox& box, const FKParams& params) {
  require(box.edge_count() <= kMaxEnumerableEdges, ErrorKind::TooLarge,
          "exact enumeration is limited to " + std::to_string(kMaxEnumerableEdges) + " edges");
  const std::uint64_t count = std::uint64_t{1} << box.edge_count();
  std::vector<double> logw(count);
  double top = -std::numeric_limits<double>::infinity();
  for (std::uint64_t m = 0; m < count; ++m) {
    logw[m] = log_weight(BondConfig::from_mask(box, m), params.p(), params.q(), params.bc());
    top = std::max(top, logw[m]);
  }
  double z = 0;
  for (auto& w : logw) {
    w = std::exp(w - top);
    z += w;
  }
  for (auto& w : logw) w /= z;
  return ExactDistribution(box, std::move(logw));
}

double detailed_balance_error(const ExactDistribution& dist, const FKParams& params) {
  const LatticeBox& box = dist.box();
  HeatBath hb(box);
  double worst = 0;
  for (std::uint64_t m = 0; m < dist.size(); ++m) {
    const BondConfig cfg = BondConfig::from_mask(box, m);
    for (EdgeId e = 0; e < box.edge_count(); ++e) {
      if (m >> e & 1) continue;  // each pair once, from its closed side
      const double po = open_probability(params.p(), params.q(), hb.context(cfg, params.bc(), e).delta_k);
      const std::uint64_t m1 = m | std::uint64_t{1} << e;
      const double forward = dist.probability(m) * po;
      const double backward = dist.probability(m1) * (1 - po);
      const double scale = std::max(forward, backward);
      if (scale > 0) worst = std::max(worst, std::abs(forward - backward) / scale);
    }
  }
  return worst;
}

std::vector<double> empirical_law(const LatticeBox& box, const FKParams& params, Dynamics dynamics,
                                  std::size_t samples, std::size_t burnin, Rng& rng, std::size_t thin) {
  require(thin >= 1, ErrorKind::InvalidParameter, "thin must be >= 1");
  require(box.edge_count() <= kMaxEnumerableEdges, ErrorKind::TooLarge, "law histogram needs an enumerable box");
  require(samples > 0, ErrorKind::InvalidParameter, "need at least one sample");
  std::vector<double> law(std::size_t{1} << box.edge_count(), 0.0);
  BondConfig cfg(box);
  HeatBath hb(box);
  auto step = [&] {
    if (dynamics == Dynamics::Cluster) {
      cluster_sweep(cfg, params, rng);
    } else {
      hb.sweep(cfg, params, rng);
    }
  };
  for (std::size_t i = 0; i < burnin; ++i) step();
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t t = 0; t < thin; ++t) step();
    law[cfg.to_mask()] += 1;
  }
  for (double& v : law) v /= static_cast<double>(samples);
  return law;
}

std::pair<double, double> bounded_energy_bounds(double p, double q, BoundaryCondition bc) {
  require(q >= 1, ErrorKind::Unsupported, "q < 1 is outside the supported regime");
  require(p >= 0 && p <= 1, ErrorKind::InvalidParameter, "p must lie in [0, 1]");
  const int worst = bc == BoundaryCondition::Wired && q > 1 ? -2 : -1;
  return {open_probability(p, q, worst), p};
}

std::pair<double, double> bounded_energy_bounds(const FKParams& params) {
  return bounded_energy_bounds(params.p(), params.q(), params.bc());
}

void run_chain(BondConfig& cfg, const FKParams& params, Rng& rng, const SamplingOptions& options,
               const std::function<void(const BondConfig&)>& visit) {
  HeatBath hb(cfg.box());
  auto one = [&] {
    if (options.dynamics == Dynamics::Cluster) {
      cluster_sweep(cfg, params, rng);
    } else {
      hb.sweep(cfg, params, rng);
    }
  };
  for (std::size_t s = 0; s < options.burnin; ++s) one();
  for (std::size_t s = 0; s < options.sweeps; ++s) {
    one();
    visit(cfg);
  }
}

namespace {

std::vector<std::uint32_t> cluster_labels(const BondConfig& cfg) {
  const LatticeBox& box = cfg.box();
  UnionFind uf(box.vertex_count());
  for (EdgeId e = 0; e < cfg.size(); ++e) {
    if (!cfg.is_open(e)) continue;
    Edge ed = box.edge(e);
    uf.unite(box.vertex_id(ed.a), box.vertex_id(ed.b));
  }
  std::vector<std::uint32_t> label(box.vertex_count());
  for (VertexId v = 0; v < box.vertex_count(); ++v) label[v] = static_cast<std::uint32_t>(uf.find(v));
  return label;
}

std::size_t effective_blocks(const SamplingOptions& o) {
  require(o.sweeps >= 2, ErrorKind::InsufficientData, "need at least two sweeps");
  return std::clamp<std::size_t>(o.blocks, 2, o.sweeps);
}

void subcritical_warning(const FKParams& params, std::vector<std::string>& warnings) {
  if (!params.subcritical()) {
    std::ostringstream os;
    os << "beta=" << params.beta() << " is not below beta_c(q)=" << critical_beta(params.q());
    warnings.push_back(os.str());
  }
}

int linf(Point p) { return std::max(std::abs(p.x), std::abs(p.y)); }

}  // namespace

ConnectivityResult two_point_connectivity(const FKParams& params, const LatticeBox& box,
                                          const std::vector<std::pair<Point, Point>>& pairs,
                                          const SamplingOptions& options) {
  ConnectivityResult result;
  subcritical_warning(params, result.warnings);
  for (const auto& [x, y] : pairs) {
    require(box.contains(x) && box.contains(y), ErrorKind::InvalidParameter, "pair outside the box");
    const int n = box.half_width();
    if (linf(x) > n - 2 || linf(y) > n - 2) result.warnings.push_back("pair within two sites of the boundary");
  }
  const std::size_t blocks = effective_blocks(options);
  std::vector<std::vector<double>> series(pairs.size());
  BondConfig cfg(box);
  Rng rng(params.seed());
  run_chain(cfg, params, rng, options, [&](const BondConfig& c) {
    auto label = cluster_labels(c);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      series[i].push_back(label[box.vertex_id(pairs[i].first)] == label[box.vertex_id(pairs[i].second)] ? 1.0 : 0.0);
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    result.rows.push_back({pairs[i].first, pairs[i].second, mean(series[i]),
                           block_jackknife_stderr(series[i], blocks), series[i].size()});
  }
  return result;
}

std::vector<DisplacementEstimate> displacement_connectivity(const FKParams& params, const LatticeBox& box,
                                                            const std::vector<Point>& displacements,
                                                            int buffer, const SamplingOptions& options) {
  const int n = box.half_width();
  require(buffer >= 0, ErrorKind::InvalidParameter, "buffer must be non-negative");
  std::vector<std::vector<Point>> bases(displacements.size());
  for (std::size_t i = 0; i < displacements.size(); ++i) {
    const Point d = displacements[i];
    for (int y = -n + buffer; y <= n - buffer; ++y)
      for (int x = -n + buffer; x <= n - buffer; ++x) {
        Point a{x, y}, b = a + d;
        if (linf(b) <= n - buffer) bases[i].push_back(a);
      }
    require(!bases[i].empty(), ErrorKind::InvalidParameter, "displacement does not fit inside the buffered box");
  }
  const std::size_t blocks = effective_blocks(options);
  std::vector<std::vector<double>> series(displacements.size());
  BondConfig cfg(box);
  Rng rng(params.seed());
  run_chain(cfg, params, rng, options, [&](const BondConfig& c) {
    auto label = cluster_labels(c);
    for (std::size_t i = 0; i < displacements.size(); ++i) {
      std::size_t hits = 0;
      for (Point a : bases[i]) hits += label[box.vertex_id(a)] == label[box.vertex_id(a + displacements[i])];
      series[i].push_back(static_cast<double>(hits) / static_cast<double>(bases[i].size()));
    }
  });
  std::vector<DisplacementEstimate> out;
  for (std::size_t i = 0; i < displacements.size(); ++i)
    out.push_back({displacements[i], mean(series[i]), block_jackknife_stderr(series[i], blocks), series[i].size()});
  return out;
}

DecayReport decay_and_mixing_check(const FKParams& params, const LatticeBox& box, const std::vector<int>& radii,
                                   const SamplingOptions& options) {
  require(radii.size() >= 2, ErrorKind::InvalidParameter, "decay fit needs at least two radii");
  const int n = box.half_width();
  for (int r : radii) require(r >= 1 && r <= n, ErrorKind::InvalidParameter, "radius must lie in [1, N]");
  DecayReport report;
  subcritical_warning(params, report.warnings);
  const std::size_t blocks = effective_blocks(options);

  struct MixPair {
    int distance;
    EdgeId d, f;
  };
  std::vector<MixPair> mix;
  for (int r : radii) {
    const int x0 = -(r + 1) / 2;
    if (x0 + r + 1 > n) continue;
    mix.push_back({r, box.edge_id({x0, 0}, {x0 + 1, 0}), box.edge_id({x0 + r, 0}, {x0 + r + 1, 0})});
  }

  std::vector<std::vector<double>> hit(radii.size());
  std::vector<std::vector<double>> md(mix.size()), mf(mix.size()), mdf(mix.size());
  BondConfig cfg(box);
  Rng rng(params.seed());
  const VertexId origin = box.vertex_id({0, 0});
  run_chain(cfg, params, rng, options, [&](const BondConfig& c) {
    auto label = cluster_labels(c);
    int extent = 0;
    for (VertexId v = 0; v < box.vertex_count(); ++v)
      if (label[v] == label[origin]) extent = std::max(extent, linf(box.vertex(v)));
    for (std::size_t i = 0; i < radii.size(); ++i) hit[i].push_back(extent >= radii[i] ? 1.0 : 0.0);
    for (std::size_t i = 0; i < mix.size(); ++i) {
      const bool a = c.is_open(mix[i].d), b = c.is_open(mix[i].f);
      md[i].push_back(a);
      mf[i].push_back(b);
      mdf[i].push_back(a && b);
    }
  });

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double pr = mean(hit[i]);
    const double se = block_jackknife_stderr(hit[i], blocks);
    DecayRow row{radii[i], pr, pr > 0 ? std::log(pr) : -std::numeric_limits<double>::infinity(),
                 pr > 0 ? se / pr : std::numeric_limits<double>::infinity()};
    report.decay.push_back(row);
    if (pr > 0) {
      xs.push_back(radii[i]);
      ys.push_back(row.logp);
    } else {
      report.warnings.push_back("no connection observed at radius " + std::to_string(radii[i]));
    }
  }
  require(xs.size() >= 2, ErrorKind::InsufficientData, "fewer than two radii with observed connections");
  LinearFit fit = fit_line(xs, ys);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.r2 = fit.r2;

  for (std::size_t i = 0; i < mix.size(); ++i) {
    auto stat = [](double a, double b, double ab) { return a > 0 && b > 0 ? std::abs(ab / (a * b) - 1) : 0.0; };
    const std::size_t len = md[i].size() / blocks;
    double sa = 0, sb = 0, sab = 0;
    std::vector<double> ba(blocks), bb(blocks), bab(blocks);
    for (std::size_t k = 0; k < blocks; ++k)
      for (std::size_t j = k * len; j < (k + 1) * len; ++j) {
        ba[k] += md[i][j];
        bb[k] += mf[i][j];
        bab[k] += mdf[i][j];
      }
    for (std::size_t k = 0; k < blocks; ++k) {
      sa += ba[k];
      sb += bb[k];
      sab += bab[k];
    }
    const double tot = static_cast<double>(len * blocks);
    const double full = stat(sa / tot, sb / tot, sab / tot);
    double acc = 0;
    const double rest = static_cast<double>(len * (blocks - 1));
    for (std::size_t k = 0; k < blocks; ++k) {
      double loo = stat((sa - ba[k]) / rest, (sb - bb[k]) / rest, (sab - bab[k]) / rest);
      acc += (loo - full) * (loo - full);
    }
    const double nb = static_cast<double>(blocks);
    report.mixing.push_back({mix[i].distance, full, std::sqrt((nb - 1) / nb * acc)});
  }
  return report;
}

}  // namespace circreg
