#include "circreg/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "circreg/error.hpp"

namespace circreg {

Resampler heat_bath_resampler(std::size_t sweeps) {
  return [sweeps](BondConfig& cfg, const EdgeSet& region, const FKParams& params, Rng& rng,
                  const std::vector<std::uint8_t>&) {
    for (EdgeId e : region) cfg.set(e, false);
    if (params.q() == 1.0) {
      for (EdgeId e : region) cfg.set(e, rng.bernoulli(params.p()));
      return;
    }
    HeatBath hb(cfg.box());
    for (std::size_t s = 0; s < sweeps; ++s)
      for (EdgeId e : region) hb.step(cfg, params, e, rng.uniform());
  };
}

Resampler reuse_stored_resampler() {
  return [](BondConfig& cfg, const EdgeSet& region, const FKParams&, Rng&, const std::vector<std::uint8_t>& stored) {
    std::size_t i = 0;
    for (EdgeId e : region) cfg.set(e, stored[i++] != 0);
  };
}

namespace {

template <class Inside>
EdgeSet region_from(const LatticeBox& box, Inside inside) {
  std::vector<EdgeId> ids;
  for (EdgeId e = 0; e < box.edge_count(); ++e) {
    const Edge ed = box.edge(e);
    if (box.on_interior_boundary(ed.a) && box.on_interior_boundary(ed.b)) continue;
    if (inside(Vec2(ed.a)) && inside(Vec2(ed.b))) ids.push_back(e);
  }
  return EdgeSet(std::move(ids));
}

void check_region(const LatticeBox& box, const EdgeSet& region) {
  require(!region.empty(), ErrorKind::InvalidRegion, "operated region has no edges");
  for (EdgeId e : region) {
    require(e < box.edge_count(), ErrorKind::InvalidRegion, "region edge outside the box");
    const Edge ed = box.edge(e);
    require(!(box.on_interior_boundary(ed.a) && box.on_interior_boundary(ed.b)), ErrorKind::InvalidRegion,
            "region contains a box boundary edge");
  }
}

}  // namespace

EdgeSet region_edges(const LatticeBox& box, const SectorA& sector) {
  return region_from(box, [&](Vec2 z) { return sector.contains(z); });
}

EdgeSet region_edges(const LatticeBox& box, const Wedge& wedge) {
  return region_from(box, [&](Vec2 z) { return wedge_contains(wedge, z); });
}

SurgeryOutcome sector_storage_replacement(const BondConfig& cfg, const EdgeSet& region, const FKParams& params,
                                          Rng& rng, const Resampler& resampler) {
  check_region(cfg.box(), region);
  SurgeryOutcome out{cfg, region, {}};
  for (EdgeId e : region) out.omega2.push_back(cfg.is_open(e) ? 1 : 0);
  resampler(out.omega1, region, params, rng, out.omega2);
  return out;
}

SurgeryOutcome sector_storage_replacement(const BondConfig& cfg, const SectorA& sector, const FKParams& params,
                                          Rng& rng, const Resampler& resampler) {
  return sector_storage_replacement(cfg, region_edges(cfg.box(), sector), params, rng, resampler);
}

SurgeryOutcome sector_storage_replacement(const BondConfig& cfg, const Wedge& wedge, const FKParams& params,
                                          Rng& rng, const Resampler& resampler) {
  return sector_storage_replacement(cfg, region_edges(cfg.box(), wedge), params, rng, resampler);
}

RegularActionReport regular_action_contract(const std::vector<double>& stored, const std::vector<double>& updated,
                                            double z) {
  require(stored.size() == updated.size(), ErrorKind::InvalidParameter, "paired statistics differ in length");
  require(stored.size() >= 4, ErrorKind::InsufficientData, "need at least four pairs");
  RegularActionReport r;
  r.n = stored.size();
  const double ms = mean(stored), mu = mean(updated);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < r.n; ++i) {
    sxy += (stored[i] - ms) * (updated[i] - mu);
    sxx += (stored[i] - ms) * (stored[i] - ms);
    syy += (updated[i] - mu) * (updated[i] - mu);
  }
  if (sxx == 0 || syy == 0) {
    // A constant statistic carries no dependence.
    r.correlation = 0;
    r.ci = {0, 0};
    r.regular = true;
    return r;
  }
  r.correlation = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double half = z / std::sqrt(static_cast<double>(r.n) - 3);
  const double fz = std::atanh(std::clamp(r.correlation, -1 + 1e-15, 1 - 1e-15));
  r.ci = {std::tanh(fz - half), std::tanh(fz + half)};
  r.regular = r.ci.lo <= 0 && r.ci.hi >= 0;
  return r;
}

RegularActionReport regular_action_experiment(const BondConfig& cfg, const EdgeSet& region, const FKParams& params,
                                              std::size_t reps, Rng& rng, const Resampler& resampler, double z) {
  check_region(cfg.box(), region);
  const Resampler fresh = heat_bath_resampler();
  std::vector<double> stored, updated;
  BondConfig work = cfg;
  for (std::size_t i = 0; i < reps; ++i) {
    fresh(work, region, params, rng, {});
    const SurgeryOutcome o = sector_storage_replacement(work, region, params, rng, resampler);
    stored.push_back(std::accumulate(o.omega2.begin(), o.omega2.end(), 0.0));
    double k = 0;
    for (EdgeId e : region) k += o.omega1.is_open(e) ? 1 : 0;
    updated.push_back(k);
  }
  return regular_action_contract(stored, updated, z);
}

EdgeSet shifted(const LatticeBox& box, const EdgeSet& b, Point shift) {
  std::vector<EdgeId> ids;
  for (EdgeId e : b) {
    const Edge ed = box.edge(e);
    const auto moved = box.find_edge(ed.a + shift, ed.b + shift);
    require(moved.has_value(), ErrorKind::InvalidParameter, "shifted edge set leaves the box");
    ids.push_back(*moved);
  }
  return EdgeSet(std::move(ids));
}

namespace {

void check_shift(const LatticeBox& box, const EdgeSet& a, const EdgeSet& b, const EdgeSet& bs) {
  for (EdgeId e : a) {
    require(e < box.edge_count(), ErrorKind::InvalidParameter, "edge outside the box");
    require(!b.contains(e), ErrorKind::InvalidParameter, "A and B overlap");
    require(!bs.contains(e), ErrorKind::InvalidParameter, "A overlaps the shifted B");
  }
}

}  // namespace

BondConfig shift_replacement(const BondConfig& cfg, const EdgeSet& a, const EdgeSet& b, Point shift,
                             const FKParams& params, Rng& rng, const Resampler& resampler) {
  const LatticeBox& box = cfg.box();
  const EdgeSet bs = shifted(box, b, shift);
  check_shift(box, a, b, bs);
  BondConfig out = cfg;
  std::size_t i = 0;
  std::vector<EdgeId> bs_ids(bs.size());
  for (EdgeId e : b) {
    const Edge ed = box.edge(e);
    bs_ids[i++] = box.edge_id(ed.a + shift, ed.b + shift);
  }
  i = 0;
  for (EdgeId e : b) out.set(bs_ids[i++], cfg.is_open(e));
  std::vector<EdgeId> rest;
  for (EdgeId e = 0; e < box.edge_count(); ++e)
    if (!a.contains(e) && !bs.contains(e)) rest.push_back(e);
  if (rest.empty()) return out;
  const EdgeSet free(std::move(rest));
  std::vector<std::uint8_t> stored;
  for (EdgeId e : free) stored.push_back(out.is_open(e) ? 1 : 0);
  resampler(out, free, params, rng, stored);
  return out;
}

ShiftLaw shift_replacement_law(const ExactDistribution& dist, const EdgeSet& a, const EdgeSet& b, Point shift) {
  const LatticeBox& box = dist.box();
  const EdgeSet bs = shifted(box, b, shift);
  check_shift(box, a, b, bs);
  std::uint64_t amask = 0, bmask = 0, bsmask = 0;
  for (EdgeId e : a) amask |= 1ULL << e;
  for (EdgeId e : b) bmask |= 1ULL << e;
  for (EdgeId e : bs) bsmask |= 1ULL << e;
  // Map the bits of B onto their images in B + shift.
  std::vector<std::pair<EdgeId, EdgeId>> moves;
  for (EdgeId e : b) {
    const Edge ed = box.edge(e);
    moves.push_back({e, box.edge_id(ed.a + shift, ed.b + shift)});
  }
  auto carry = [&](std::uint64_t m) {
    std::uint64_t key = m & amask;
    for (auto [from, to] : moves)
      if (m >> from & 1) key |= 1ULL << to;
    return key;
  };
  const std::uint64_t fixed = amask | bsmask;
  const std::size_t total = dist.size();
  // Law of the assigned values under the operation, and under the input law.
  std::vector<double> assigned(total, 0.0), natural(total, 0.0);
  for (std::uint64_t m = 0; m < total; ++m) {
    assigned[carry(m)] += dist.probability(m);
    natural[m & fixed] += dist.probability(m);
  }
  ShiftLaw law;
  law.output.assign(total, 0.0);
  for (std::uint64_t m = 0; m < total; ++m) {
    const double pm = dist.probability(m);
    const double nat = natural[m & fixed];
    law.output[m] = nat > 0 ? assigned[m & fixed] * pm / nat : 0.0;
    if (pm > 0) {
      const double ratio = law.output[m] / pm;
      law.max_ratio = std::max(law.max_ratio, ratio > 0 ? std::max(ratio, 1 / ratio)
                                                        : std::numeric_limits<double>::infinity());
    }
  }
  return law;
}

std::vector<double> exact_conditional(const ExactDistribution& dist, const BondConfig& outside, const EdgeSet& region) {
  require(region.size() < 32, ErrorKind::TooLarge, "region too large for a conditional table");
  const std::uint64_t base = outside.to_mask();
  std::uint64_t rmask = 0;
  for (EdgeId e : region) rmask |= 1ULL << e;
  std::vector<double> out(std::size_t{1} << region.size(), 0.0);
  double z = 0;
  for (std::size_t r = 0; r < out.size(); ++r) {
    std::uint64_t m = base & ~rmask;
    std::size_t i = 0;
    for (EdgeId e : region)
      if (r >> i++ & 1) m |= 1ULL << e;
    out[r] = dist.probability(m);
    z += out[r];
  }
  require(z > 0, ErrorKind::Precondition, "exterior has zero probability");
  for (double& v : out) v /= z;
  return out;
}

BondConfig open_path_seal(const BondConfig& cfg, const std::vector<Point>& path) {
  BondConfig out = cfg;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) out.set(path[i], path[i + 1], true);
  return out;
}

MaskSampler::MaskSampler(const std::vector<double>& probs) : cumulative_(probs.size()) {
  std::partial_sum(probs.begin(), probs.end(), cumulative_.begin());
  require(!cumulative_.empty() && cumulative_.back() > 0, ErrorKind::InvalidParameter, "empty law");
}

std::uint64_t MaskSampler::operator()(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                             static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  require(p.size() == q.size(), ErrorKind::InvalidParameter, "laws differ in size");
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / 2;
}

double chi_square_p_value(double statistic, std::size_t dof) {
  require(dof >= 1, ErrorKind::InvalidParameter, "chi-square needs dof >= 1");
  boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, std::max(statistic, 0.0)));
}

InvarianceReport storage_replacement_invariance(const ExactDistribution& dist, const FKParams& params,
                                                const EdgeSet& region, std::size_t reps, Rng& rng,
                                                std::size_t cells, const Resampler& resampler) {
  require(cells >= 2, ErrorKind::InvalidParameter, "need at least two cells");
  const std::vector<double>& probs = dist.probabilities();
  // Consecutive masks grouped into near-equal-mass cells.
  std::vector<std::size_t> cell_of(probs.size());
  std::vector<double> expected(cells, 0.0);
  double cum = 0;
  for (std::size_t m = 0; m < probs.size(); ++m) {
    const std::size_t c = std::min(cells - 1, static_cast<std::size_t>((cum + probs[m] / 2) * cells));
    cell_of[m] = c;
    expected[c] += probs[m];
    cum += probs[m];
  }
  std::vector<double> observed(cells, 0.0), full(probs.size(), 0.0);
  const MaskSampler draw(probs);
  std::uint64_t rmask = 0;
  for (EdgeId e : region) rmask |= 1ULL << e;
  InvarianceReport rep;
  for (std::size_t i = 0; i < reps; ++i) {
    const std::uint64_t in = draw(rng);
    const SurgeryOutcome o =
        sector_storage_replacement(BondConfig::from_mask(dist.box(), in), region, params, rng, resampler);
    const std::uint64_t out = o.omega1.to_mask();
    if ((out & ~rmask) != (in & ~rmask)) ++rep.outside_changes;
    observed[cell_of[out]] += 1;
    full[out] += 1.0 / static_cast<double>(reps);
  }
  std::size_t used = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double e = expected[c] * static_cast<double>(reps);
    if (e <= 0) continue;
    rep.chi_square += (observed[c] - e) * (observed[c] - e) / e;
    ++used;
  }
  rep.dof = used > 1 ? used - 1 : 1;
  rep.p_value = chi_square_p_value(rep.chi_square, rep.dof);
  rep.tv = total_variation(full, probs);
  return rep;
}

}  // namespace circreg
