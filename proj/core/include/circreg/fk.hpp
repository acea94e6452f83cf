#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "circreg/lattice.hpp"
#include "circreg/rng.hpp"

namespace circreg {

// beta is the single source of truth; p = 1 - exp(-2 beta).
class FKParams {
 public:
  FKParams(double beta, double q, BoundaryCondition bc, std::uint64_t seed = 0);
  static FKParams from_p(double p, double q, BoundaryCondition bc, std::uint64_t seed = 0);

  double beta() const { return beta_; }
  double q() const { return q_; }
  double p() const { return p_; }
  BoundaryCondition bc() const { return bc_; }
  std::uint64_t seed() const { return seed_; }
  FKParams with_seed(std::uint64_t seed) const { return FKParams(beta_, q_, bc_, seed); }
  bool subcritical() const;

 private:
  double beta_, q_, p_;
  BoundaryCondition bc_;
  std::uint64_t seed_;
};

double critical_beta(double q);
double beta_from_p(double p);

// Change in the cluster count when `e` is opened, given all other edges:
// k(open) - k(closed), always in {0, -1, -2} (the -2 only arises under the
// wired rule when an isolated boundary vertex gets attached).
struct EdgeContext {
  bool connected_off_edge = false;
  int delta_k = 0;
};

double open_probability(double p, double q, int delta_k);

// Reusable scratch for local connectivity; one instance per chain.
class HeatBath {
 public:
  explicit HeatBath(const LatticeBox& box);

  EdgeContext context(const BondConfig& cfg, BoundaryCondition bc, EdgeId e);
  // Resamples `e` from its conditional law using the uniform `u`; returns the new state.
  bool step(BondConfig& cfg, const FKParams& params, EdgeId e, double u);
  void sweep(BondConfig& cfg, const FKParams& params, Rng& rng);
  // True if a and b are joined by open edges other than `skip`.
  bool connected_off_edge(const BondConfig& cfg, Point a, Point b, EdgeId skip);

 private:
  struct Side {
    std::vector<VertexId> frontier;
    std::size_t head = 0;
    std::size_t size = 0;
    bool boundary = false;
  };
  void reset_stamps();
  std::size_t explore(const BondConfig& cfg, Side& side, std::uint32_t mark, std::uint32_t other, EdgeId skip,
                      bool& met, std::size_t budget);

  LatticeBox box_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  Side sa_, sb_;
};

BondConfig heat_bath_step(const BondConfig& cfg, const FKParams& params, EdgeId edge, double u);

// Chayes-Machta update. Under the wired rule the uncounted (boundary) clusters
// are always inactive and active edges touching the boundary stay closed,
// which keeps the chosen counting rule stationary; a heat-bath pass over the
// boundary edges follows so that the chain stays irreducible.
void cluster_sweep(BondConfig& cfg, const FKParams& params, Rng& rng);

enum class Dynamics { Cluster, HeatBath };

class ExactDistribution {
 public:
  ExactDistribution(LatticeBox box, std::vector<double> probs);
  const LatticeBox& box() const { return box_; }
  std::size_t size() const { return probs_.size(); }
  double probability(std::uint64_t mask) const { return probs_[mask]; }
  const std::vector<double>& probabilities() const { return probs_; }
  double expectation(const std::function<double(const BondConfig&)>& f) const;

 private:
  LatticeBox box_;
  std::vector<double> probs_;
};

inline constexpr std::size_t kMaxEnumerableEdges = 24;
ExactDistribution exact_enumerate(const LatticeBox& box, const FKParams& params);
// Largest relative violation of pi(a) K(a, b) = pi(b) K(b, a) over all
// single-edge heat-bath moves.
double detailed_balance_error(const ExactDistribution& dist, const FKParams& params);

// Histogram of the states kept every `thin` sweeps, indexed by mask.
std::vector<double> empirical_law(const LatticeBox& box, const FKParams& params, Dynamics dynamics,
                                  std::size_t samples, std::size_t burnin, Rng& rng, std::size_t thin = 1);

// Unnormalised log weight of a configuration.
double log_weight(const BondConfig& cfg, double p, double q, BoundaryCondition bc);

std::pair<double, double> bounded_energy_bounds(double p, double q, BoundaryCondition bc);
std::pair<double, double> bounded_energy_bounds(const FKParams& params);


struct SamplingOptions {
  std::size_t sweeps = 1000;
  std::size_t burnin = 100;
  std::size_t blocks = 20;
  Dynamics dynamics = Dynamics::Cluster;
};

struct ConnectivityEstimate {
  Point x, y;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

struct ConnectivityResult {
  std::vector<ConnectivityEstimate> rows;
  std::vector<std::string> warnings;
};

ConnectivityResult two_point_connectivity(const FKParams& params, const LatticeBox& box,
                                          const std::vector<std::pair<Point, Point>>& pairs,
                                          const SamplingOptions& options);

// P(x <-> x + d) averaged over base points x with |x|_inf <= N - buffer - |d|_inf.
struct DisplacementEstimate {
  Point d;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};
std::vector<DisplacementEstimate> displacement_connectivity(const FKParams& params, const LatticeBox& box,
                                                            const std::vector<Point>& displacements,
                                                            int buffer, const SamplingOptions& options);

struct DecayRow {
  int radius = 0;
  double probability = 0.0;
  double logp = 0.0;
  double stderr_ = 0.0;  // of logp
};

struct MixingRow {
  int distance = 0;
  double statistic = 0.0;  // |P(D and F) / (P(D) P(F)) - 1|
  double stderr_ = 0.0;
};

struct DecayReport {
  std::vector<DecayRow> decay;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<MixingRow> mixing;
  std::vector<std::string> warnings;
};

DecayReport decay_and_mixing_check(const FKParams& params, const LatticeBox& box, const std::vector<int>& radii,
                                   const SamplingOptions& options);

// Runs `burnin` then calls `visit` after each of `sweeps` sweeps.
void run_chain(BondConfig& cfg, const FKParams& params, Rng& rng, const SamplingOptions& options,
               const std::function<void(const BondConfig&)>& visit);

}  // namespace circreg
