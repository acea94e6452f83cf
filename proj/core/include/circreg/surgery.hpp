#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "circreg/fk.hpp"
#include "circreg/geometry.hpp"
#include "circreg/lattice.hpp"
#include "circreg/rng.hpp"
#include "circreg/stats.hpp"

namespace circreg {

struct SurgeryOutcome {
  BondConfig omega1;                  // full-plane output
  EdgeSet region;                     // operated edges
  std::vector<std::uint8_t> omega2;   // stored input bits, aligned with region.ids()
};

// Fills `region` in `cfg` from the law of the region given everything else.
// `stored` holds the pre-surgery bits of the region (only a faulty resampler reads it).
using Resampler = std::function<void(BondConfig& cfg, const EdgeSet& region, const FKParams& params, Rng& rng,
                                     const std::vector<std::uint8_t>& stored)>;

inline constexpr std::size_t kDefaultResampleSweeps = 50;

// Closes the region, then runs restricted heat-bath sweeps over it.
Resampler heat_bath_resampler(std::size_t sweeps = kDefaultResampleSweeps);
// Writes the stored bits back: a deliberately broken resampler for negative controls.
Resampler reuse_stored_resampler();

// Edges of the box with both endpoints in the closed region, leaving out the
// edges that run along the box boundary.
EdgeSet region_edges(const LatticeBox& box, const SectorA& sector);
EdgeSet region_edges(const LatticeBox& box, const Wedge& wedge);

SurgeryOutcome sector_storage_replacement(const BondConfig& cfg, const EdgeSet& region, const FKParams& params,
                                          Rng& rng, const Resampler& resampler = heat_bath_resampler());
SurgeryOutcome sector_storage_replacement(const BondConfig& cfg, const SectorA& sector, const FKParams& params,
                                          Rng& rng, const Resampler& resampler = heat_bath_resampler());
SurgeryOutcome sector_storage_replacement(const BondConfig& cfg, const Wedge& wedge, const FKParams& params,
                                          Rng& rng, const Resampler& resampler = heat_bath_resampler());

struct RegularActionReport {
  std::size_t n = 0;
  double correlation = 0.0;
  Interval ci;  // Fisher-z interval
  bool regular = false;  // ci contains 0
};

// Pearson correlation of paired statistics with a Fisher-z interval at `z`.
RegularActionReport regular_action_contract(const std::vector<double>& stored, const std::vector<double>& updated,
                                            double z = 3.0);

// Repeats the surgery `reps` times with the exterior of `cfg` fixed. Each
// repeat first draws a fresh region configuration from the conditional law,
// then operates; the statistic is the number of open region edges.
RegularActionReport regular_action_experiment(const BondConfig& cfg, const EdgeSet& region, const FKParams& params,
                                              std::size_t reps, Rng& rng, const Resampler& resampler,
                                              double z = 3.0);

// Output equals the input on A, carries the input on B to B + shift, and the
// remaining edges are resampled given those values.
BondConfig shift_replacement(const BondConfig& cfg, const EdgeSet& a, const EdgeSet& b, Point shift,
                             const FKParams& params, Rng& rng,
                             const Resampler& resampler = heat_bath_resampler());

EdgeSet shifted(const LatticeBox& box, const EdgeSet& b, Point shift);  // throws when leaving the box

struct ShiftLaw {
  std::vector<double> output;  // exact law of the output, indexed by mask
  double max_ratio = 0.0;      // max over configurations of max(P~/P, P/P~)
};

// Exact output law when the input is FK-distributed and the resampling is exact.
ShiftLaw shift_replacement_law(const ExactDistribution& dist, const EdgeSet& a, const EdgeSet& b, Point shift);

// Exact law of the region given the bits outside it; indexed by the bits of
// the region in `region.ids()` order.
std::vector<double> exact_conditional(const ExactDistribution& dist, const BondConfig& outside, const EdgeSet& region);

BondConfig open_path_seal(const BondConfig& cfg, const std::vector<Point>& path);

// Two-step invariance test: draw inputs from the exact law, operate, and
// compare the output histogram over `cells` near-equal-mass cells.
struct InvarianceReport {
  double chi_square = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
  double tv = 0.0;
  std::size_t outside_changes = 0;  // outputs differing from the input off the region
};

InvarianceReport storage_replacement_invariance(const ExactDistribution& dist, const FKParams& params,
                                                const EdgeSet& region, std::size_t reps, Rng& rng,
                                                std::size_t cells = 20,
                                                const Resampler& resampler = heat_bath_resampler());

// Draws masks from an exact law by inversion of the cumulative sums.
class MaskSampler {
 public:
  explicit MaskSampler(const std::vector<double>& probs);
  std::uint64_t operator()(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};
double total_variation(const std::vector<double>& p, const std::vector<double>& q);
double chi_square_p_value(double statistic, std::size_t dof);

}  // namespace circreg
