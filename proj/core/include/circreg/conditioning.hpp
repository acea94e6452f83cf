#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "circreg/circuits.hpp"
#include "circreg/fk.hpp"
#include "circreg/regeneration.hpp"
#include "circreg/rng.hpp"
#include "circreg/stats.hpp"
#include "circreg/wulff.hpp"

namespace circreg {

enum class EventKind { AreaOnly, AreaAndCentred };
std::string to_string(EventKind kind);
EventKind parse_event_kind(const std::string& text);

// Shape data needed by the per-sample analysis and by the centred event.
struct ShapeContext {
  WulffShape shape;
  ShapeConstants constants;
};

struct ConditionOptions {
  int n = 8;
  EventKind event = EventKind::AreaOnly;
  std::size_t burnin = 200;   // sweeps
  std::size_t samples = 1000;
  std::size_t thin = 5;       // sweeps between retained samples
  std::size_t chains = 1;
  // Accept circuits that touch the box boundary and skip the N >= 2n guard.
  // Only meant for enumerable boxes.
  bool small_box = false;
  bool analyse = true;        // per-sample geometry; needs a ShapeContext
  std::vector<double> search_angles{0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi, 5 * kPi / 4, 3 * kPi / 2, 7 * kPi / 4};
};

struct ConditionedSample {
  std::size_t chain = 0;
  double area = 0.0;
  double exc = 0.0;
  double gd = std::numeric_limits<double>::quiet_NaN();
  Point cen;
  bool recentred = false;
  double theta_circuit = kTwoPi;
  double theta_cluster = kTwoPi;
  std::size_t rg_circuit = 0;
  std::size_t rg_cluster = 0;
  bool cluster_subset = true;        // RG(cluster) within RG(circuit)
  double maxreg = std::numeric_limits<double>::quiet_NaN();
  double pair_angle = std::numeric_limits<double>::quiet_NaN();
  bool spans_quadrants = false;
  std::size_t searches = 0;
  std::size_t search_violations = 0;
  std::size_t search_failures = 0;   // sweeps that found no site
  std::string search_failure;        // first failure, if any
  bool in_annulus = false;
  double min_radius = 0.0, max_radius = 0.0;
};

struct ConditionedRun {
  int n = 0;
  EventKind event = EventKind::AreaOnly;
  std::vector<ConditionedSample> samples;
  std::size_t proposals = 0;
  std::size_t changes = 0;          // proposals that would alter the state
  std::size_t rejections = 0;       // changes refused by the event
  std::size_t event_violations = 0; // retained samples failing the event (must stay 0)
  std::vector<std::string> warnings;
  std::vector<double> series(const std::function<double(const ConditionedSample&)>& f, std::size_t chain) const;
};

// True when the configuration lies in the conditioning event.
bool in_event(const BondConfig& cfg, int n, EventKind event, const ShapeContext* shape, bool allow_censored);

// Restricted heat-bath chain. `visit` sees every retained state.
ConditionedRun restricted_chain(const FKParams& params, const LatticeBox& box, const ConditionOptions& options,
                                const ShapeContext* shape,
                                const std::function<void(const BondConfig&, std::size_t chain)>& visit = {});

// Per-sample geometry for a configuration in the event.
ConditionedSample analyse_sample(const BondConfig& cfg, int n, EventKind event, const ShapeContext& shape,
                                 const std::vector<double>& search_angles);

struct TailPoint {
  double x = 0.0;
  double estimate = 0.0;
  Interval ci;
  double n_eff = 0.0;
};

struct TailCurve {
  std::vector<TailPoint> points;
  double n_eff = 0.0;
  // Fit of log(estimate) against x on the window [fit_lo, fit_hi].
  std::optional<LinearFit> fit;
  std::optional<QuadraticFit> curvature;
  std::size_t fit_lo = 0, fit_hi = 0;
  std::vector<int> residual_signs;
  bool monotone = true;
};

inline constexpr double kDefaultMinEss = 500.0;

// P(theta_max > u / n) for the circuit regeneration gaps.
TailCurve theta_tail(const ConditionedRun& run, const std::vector<double>& us, double min_ess = kDefaultMinEss);
// P(EXC >= n t).
TailCurve exc_tail(const ConditionedRun& run, const std::vector<double>& ts, double min_ess = kDefaultMinEss);
// P(GD > eps n); censored samples are skipped.
TailCurve gd_tail(const ConditionedRun& run, const std::vector<double>& eps, double min_ess = kDefaultMinEss);

// Grid 0, h, ..., covering the observed range of `values` with `points` entries.
std::vector<double> tail_grid(const std::vector<double>& values, std::size_t points = 25);

// Sum over chains of the ESS of a per-sample statistic.
double run_ess(const ConditionedRun& run, const std::function<double(const ConditionedSample&)>& f);
double run_rhat(const ConditionedRun& run, const std::function<double(const ConditionedSample&)>& f);
double annulus_frequency(const ConditionedRun& run);

// n * median(theta) across n: sublinear growth and agreement with A log n + B.
struct ScalingCheck {
  std::vector<int> ns;
  std::vector<double> scaled_median;
  std::vector<Interval> ci;
  LinearFit log_fit;
  bool sublinear = false;
  bool log_consistent = false;
};
ScalingCheck theta_scaling(const std::vector<int>& ns, const std::vector<std::vector<double>>& thetas, Rng& rng);

}  // namespace circreg
