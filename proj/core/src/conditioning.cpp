#include "circreg/conditioning.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <limits>

#include "circreg/error.hpp"

namespace circreg {

std::string to_string(EventKind kind) {
  return kind == EventKind::AreaOnly ? "area_only" : "area_and_centred";
}

EventKind parse_event_kind(const std::string& text) {
  if (text == "area_only") return EventKind::AreaOnly;
  if (text == "area_and_centred") return EventKind::AreaAndCentred;
  fail(ErrorKind::InvalidParameter, "unknown event kind '" + text + "'");
}

std::vector<double> ConditionedRun::series(const std::function<double(const ConditionedSample&)>& f,
                                           std::size_t chain) const {
  std::vector<double> out;
  for (const auto& s : samples)
    if (s.chain == chain) out.push_back(f(s));
  return out;
}

namespace {

bool circuit_in_event(const CircuitResult& r, int n, EventKind event, const ShapeContext* shape,
                      bool allow_censored) {
  if (r.status == CircuitStatus::None) return false;
  if (r.status == CircuitStatus::Censored && !allow_censored) return false;
  if (r.circuit->area() < static_cast<double>(n) * n) return false;
  if (event == EventKind::AreaOnly) return true;
  return global_distortion(*r.circuit, shape->shape, n).cen == Point{0, 0};
}

void mark_circuit(const LatticeBox& box, const CircuitResult& r, std::vector<std::uint8_t>& on_gamma) {
  std::fill(on_gamma.begin(), on_gamma.end(), 0);
  if (!r.circuit) return;
  for (EdgeId e : r.circuit->edge_set(box)) on_gamma[e] = 1;
}

// Dual search run after an edge has been opened. The open edge separates the
// faces on its two sides; whichever side can no longer reach the outside is a
// pocket, and the outermost circuit changes only when that pocket borders the
// region enclosed by it.
class PocketProbe {
 public:
  explicit PocketProbe(const LatticeBox& box)
      : w_(2 * box.half_width()), horizontal_(static_cast<EdgeId>(box.horizontal_count())) {
    const int faces = w_ * w_;
    edge_.resize(faces);
    next_.resize(faces);
    mark_.assign(faces, 0);
    for (int f = 0; f < faces; ++f) {
      const int r = f / w_, c = f % w_;
      edge_[f] = {static_cast<EdgeId>(r * w_ + c), static_cast<EdgeId>((r + 1) * w_ + c),
                  static_cast<EdgeId>(horizontal_ + r * (w_ + 1) + c),
                  static_cast<EdgeId>(horizontal_ + r * (w_ + 1) + c + 1)};
      next_[f] = {r > 0 ? f - w_ : -1, r + 1 < w_ ? f + w_ : -1, c > 0 ? f - 1 : -1, c + 1 < w_ ? f + 1 : -1};
    }
  }

  bool touches(const BondConfig& cfg, EdgeId e, const std::vector<std::uint8_t>& enclosed) {
    int start[2];
    if (e < horizontal_) {
      const int r = static_cast<int>(e) / w_, c = static_cast<int>(e) % w_;
      start[0] = r < w_ ? r * w_ + c : -1;
      start[1] = r > 0 ? (r - 1) * w_ + c : -1;
    } else {
      const int k = static_cast<int>(e - horizontal_);
      const int r = k / (w_ + 1), c = k % (w_ + 1);
      start[0] = c < w_ ? r * w_ + c : -1;
      start[1] = c > 0 ? r * w_ + c - 1 : -1;
    }
    epoch_ += 2;
    if (epoch_ < 2) {  // wrapped
      std::fill(mark_.begin(), mark_.end(), 0);
      epoch_ = 2;
    }
    bool outside[2] = {false, false}, touch[2] = {false, false};
    for (int s = 0; s < 2; ++s) {
      queue_[s].clear();
      head_[s] = 0;
      if (start[s] < 0) {
        outside[s] = true;
      } else {
        mark_[start[s]] = epoch_ + s;
        queue_[s].push_back(start[s]);
      }
    }
    for (;;) {
      for (int s = 0; s < 2; ++s) {
        if (outside[s]) continue;
        if (head_[s] == queue_[s].size()) return touch[s];  // s is the pocket
        const int f = queue_[s][head_[s]++];
        for (int k = 0; k < 4; ++k) {
          const int g = next_[f][k];
          if (g >= 0 && enclosed[g]) touch[s] = true;
          if (cfg.is_open(edge_[f][k])) continue;
          if (g < 0) {
            outside[s] = true;
            break;
          }
          if (mark_[g] == epoch_ + s) continue;
          if (mark_[g] == epoch_ + 1 - s) return false;  // still one region
          mark_[g] = epoch_ + s;
          queue_[s].push_back(g);
        }
        if (outside[0] && outside[1]) return false;
        if (outside[s] && touch[1 - s]) return true;
      }
    }
  }

 private:
  int w_;
  EdgeId horizontal_;
  std::vector<std::array<EdgeId, 4>> edge_;
  std::vector<std::array<int, 4>> next_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::vector<int> queue_[2];
  std::size_t head_[2] = {0, 0};
};

}  // namespace

bool in_event(const BondConfig& cfg, int n, EventKind event, const ShapeContext* shape, bool allow_censored) {
  require(event == EventKind::AreaOnly || shape != nullptr, ErrorKind::InvalidParameter,
          "the centred event needs a Wulff shape");
  return circuit_in_event(outermost_circuit(cfg), n, event, shape, allow_censored);
}

ConditionedRun restricted_chain(const FKParams& params, const LatticeBox& box, const ConditionOptions& options,
                                const ShapeContext* shape,
                                const std::function<void(const BondConfig&, std::size_t)>& visit) {
  const int n = options.n;
  const int N = box.half_width();
  require(n >= 1, ErrorKind::InvalidParameter, "n must be >= 1");
  require(options.chains >= 1, ErrorKind::InvalidParameter, "need at least one chain");
  require(options.thin >= 1, ErrorKind::InvalidParameter, "thin must be >= 1");
  require(options.small_box || N >= 2 * n, ErrorKind::Precondition,
          "box half-width must be at least 2n (got N=" + std::to_string(N) + ", n=" + std::to_string(n) + ")");
  require(options.event == EventKind::AreaOnly || shape != nullptr, ErrorKind::InvalidParameter,
          "the centred event needs a Wulff shape");
  require(!options.analyse || shape != nullptr, ErrorKind::InvalidParameter, "sample analysis needs a Wulff shape");
  const bool allow_censored = options.small_box;

  ConditionedRun run;
  run.n = n;
  run.event = options.event;
  const std::size_t edges = box.edge_count();
  std::vector<std::uint8_t> on_gamma(edges, 0);
  std::vector<std::uint8_t> enclosed;
  HeatBath hb(box);
  PocketProbe probe(box);
  // Both faces beside e lie strictly inside Gamma_0.
  const EdgeId horizontal = static_cast<EdgeId>(box.horizontal_count());
  const int w = 2 * N;
  auto interior = [&](EdgeId e) {
    if (e < horizontal) {
      const int row = static_cast<int>(e / w);
      if (row == 0 || row == w) return false;
      const std::size_t col = e % w;
      return enclosed[row * w + col] && enclosed[(row - 1) * w + col];
    }
    const EdgeId k = e - horizontal;
    const std::size_t row = k / (w + 1);
    const int col = static_cast<int>(k % (w + 1));
    if (col == 0 || col == w) return false;
    return enclosed[row * w + col] && enclosed[row * w + col - 1];
  };

  for (std::size_t chain = 0; chain < options.chains; ++chain) {
    Rng rng = Rng::stream(params.seed(), chain);
    BondConfig cfg(box);
    const std::size_t free_sweeps = std::min<std::size_t>(options.burnin, 50);
    for (std::size_t s = 0; s < free_sweeps; ++s) hb.sweep(cfg, params, rng);

    // Open a square circuit of area >= n^2; distinct chains start from distinct squares.
    const int limit = allow_censored ? N : N - 1;
    const int h = std::min(limit, (n + 1) / 2 + static_cast<int>(chain % 3));
    require(h >= 1 && 4 * h * h >= n * n, ErrorKind::Internal, "box too small for an initial circuit");
    std::vector<Point> square;
    for (int x = -h; x < h; ++x) square.push_back({x, -h});
    for (int y = -h; y < h; ++y) square.push_back({h, y});
    for (int x = h; x > -h; --x) square.push_back({x, h});
    for (int y = h; y > -h; --y) square.push_back({-h, y});
    for (std::size_t i = 0; i < square.size(); ++i) cfg.set(square[i], square[(i + 1) % square.size()], true);
    CircuitResult current = outermost_circuit(cfg, &enclosed);
    if (!circuit_in_event(current, n, options.event, shape, allow_censored)) {
      // Drop everything outside the square and retry.
      for (EdgeId e = 0; e < edges; ++e) {
        const Edge ed = box.edge(e);
        auto inside = [h](Point p) { return std::abs(p.x) <= h && std::abs(p.y) <= h; };
        if (!inside(ed.a) || !inside(ed.b)) cfg.set(e, false);
      }
      current = outermost_circuit(cfg, &enclosed);
      require(circuit_in_event(current, n, options.event, shape, allow_censored), ErrorKind::Internal,
              "initial configuration does not satisfy the event");
    }
    mark_circuit(box, current, on_gamma);

    auto restricted_sweep = [&] {
      for (EdgeId e = 0; e < edges; ++e) {
        ++run.proposals;
        const bool was_open = cfg.is_open(e);
        const double u = rng.uniform();
        bool opened, cycle = false;
        if (params.q() == 1.0) {
          opened = u < params.p();
          if (opened && !was_open && interior(e)) {
            ++run.changes;
            cfg.set(e, true);
            continue;
          }
          if (opened && !was_open) {
            const Edge ed = box.edge(e);
            cycle = hb.connected_off_edge(cfg, ed.a, ed.b, e);
          }
        } else {
          const EdgeContext ctx = hb.context(cfg, params.bc(), e);
          opened = u < open_probability(params.p(), params.q(), ctx.delta_k);
          cycle = ctx.connected_off_edge;
        }
        if (opened == was_open) continue;
        ++run.changes;
        // Opening without closing a cycle or inside Gamma_0, or closing off
        // the outermost circuit, leaves the outermost circuit unchanged.
        if (opened ? !cycle || interior(e) : !on_gamma[e]) {
          cfg.set(e, opened);
          continue;
        }
        cfg.set(e, opened);
        if (opened && !probe.touches(cfg, e, enclosed)) continue;
        std::vector<std::uint8_t> next_enclosed;
        CircuitResult next = outermost_circuit(cfg, &next_enclosed);
        if (circuit_in_event(next, n, options.event, shape, allow_censored)) {
          enclosed.swap(next_enclosed);
          mark_circuit(box, next, on_gamma);
        } else {
          cfg.set(e, was_open);
          ++run.rejections;
        }
      }
    };

    for (std::size_t s = 0; s < options.burnin; ++s) restricted_sweep();
    for (std::size_t k = 0; k < options.samples; ++k) {
      for (std::size_t s = 0; s < options.thin; ++s) restricted_sweep();
      const CircuitResult r = outermost_circuit(cfg);
      if (!circuit_in_event(r, n, options.event, shape, allow_censored)) {
        ++run.event_violations;
        continue;
      }
      ConditionedSample sample;
      if (options.analyse) {
        sample = analyse_sample(cfg, n, options.event, *shape, options.search_angles);
      } else {
        sample.area = r.circuit->area();
        sample.exc = sample.area - static_cast<double>(n) * n;
      }
      sample.chain = chain;
      run.samples.push_back(std::move(sample));
      if (visit) visit(cfg, chain);
    }
  }
  if (run.event_violations > 0)
    run.warnings.push_back(std::to_string(run.event_violations) + " retained states violated the event");
  return run;
}

namespace {

RegenReport regen_from_segments(const std::vector<Point>& candidates, const std::vector<Segment>& target,
                                const ShapeConstants& k) {
  std::vector<Point> sites;
  for (Point v : candidates)
    if (v != Point{0, 0} && is_regeneration_site(target, v, k)) sites.push_back(v);
  return make_regen_report(std::move(sites));
}

bool spans_quadrants(const RegenReport& rg) {
  bool seen[4] = {false, false, false, false};
  for (double a : rg.args) seen[std::min(3, static_cast<int>(a / (kPi / 2)))] = true;
  return seen[0] && seen[1] && seen[2] && seen[3];
}

}  // namespace

ConditionedSample analyse_sample(const BondConfig& cfg, int n, EventKind event, const ShapeContext& shape,
                                 const std::vector<double>& search_angles) {
  const CircuitResult r = outermost_circuit(cfg);
  require(r.status != CircuitStatus::None, ErrorKind::Precondition, "no open circuit surrounds the origin");
  ConditionedSample s;
  const Circuit& c = *r.circuit;
  s.area = c.area();
  s.exc = s.area - static_cast<double>(n) * n;
  Point shift{0, 0};
  if (r.status == CircuitStatus::Found) {
    const Distortion d = global_distortion(c, shape.shape, n);
    s.gd = d.gd;
    s.cen = d.cen;
    if (event == EventKind::AreaOnly && d.cen != Point{0, 0}) {
      const auto& vs = c.vertices();
      if (std::find(vs.begin(), vs.end(), d.cen) == vs.end()) {
        shift = Point{0, 0} - d.cen;
        s.recentred = true;
      }
    }
  }
  const Circuit gamma = c.translated(shift);
  const std::vector<Point>& verts = gamma.vertices();

  std::vector<Segment> cluster_segments;
  const Cluster cl = open_component(cfg, c.vertices().front());
  for (EdgeId e : cl.edges) {
    const Edge ed = cfg.box().edge(e);
    cluster_segments.push_back({ed.a + shift, ed.b + shift});
  }
  const ShapeConstants& k = shape.constants;
  const RegenReport rg = regen_from_segments(verts, gamma.segments(), k);
  const RegenReport rgc = regen_from_segments(verts, cluster_segments, k);
  s.theta_circuit = rg.theta_max;
  s.theta_cluster = rgc.theta_max;
  s.rg_circuit = rg.sites.size();
  s.rg_cluster = rgc.sites.size();
  for (Point p : rgc.sites)
    if (std::find(rg.sites.begin(), rg.sites.end(), p) == rg.sites.end()) s.cluster_subset = false;

  s.spans_quadrants = spans_quadrants(rg);
  if (s.spans_quadrants) {
    for (double u : search_angles) {
      const SearchTrace t = search(rg, k, u);
      ++s.searches;
      std::string why;
      if (!t.distinct) why = "repeated site";
      else if (!t.nested) why = "intervals not nested";
      else if (!t.success) {
        if (t.failure == "iteration cap reached") why = t.failure;
        else ++s.search_failures;
      } else {
        const PairPredicates pp = pair_predicates(rg, k, t.pair->first, t.pair->second);
        if (!pp.well_aligned) why = "output not well aligned";
        else if (!pp.outward_facing) why = "output not outward facing";
      }
      if (!why.empty()) {
        ++s.search_violations;
        if (s.search_failure.empty()) s.search_failure = why;
      }
    }
  }

  if (const auto pp = pertinent_pair(rg, k)) {
    const auto [x, y] = *pp;
    s.pair_angle = ccw_angle(Vec2(x), Vec2(y));
    const auto ix = static_cast<std::size_t>(std::find(verts.begin(), verts.end(), x) - verts.begin());
    const auto iy = static_cast<std::size_t>(std::find(verts.begin(), verts.end(), y) - verts.begin());
    std::vector<Point> arc;
    for (std::size_t i = ix;; i = (i + 1) % verts.size()) {
      arc.push_back(verts[i]);
      if (i == iy) break;
    }
    const double delta = k.q0 / 2;
    try {
      const int K = default_crossing_radius(Vec2(y) - Vec2(x), delta);
      s.maxreg = connection_regeneration(LatticeGraph::from_path(arc), x, y, delta, K, std::nullopt).maxreg;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Precondition) throw;
    }
  }

  const double c1 = 0.5 * shape.shape.min_radius(), C1 = 2.0 * shape.shape.max_radius();
  s.min_radius = std::numeric_limits<double>::infinity();
  for (Point v : verts) {
    s.min_radius = std::min(s.min_radius, norm(Vec2(v)));
    s.max_radius = std::max(s.max_radius, norm(Vec2(v)));
  }
  s.in_annulus = s.min_radius >= c1 * n && s.max_radius <= C1 * n;
  return s;
}

double run_ess(const ConditionedRun& run, const std::function<double(const ConditionedSample&)>& f) {
  std::size_t chains = 0;
  for (const auto& s : run.samples) chains = std::max(chains, s.chain + 1);
  double total = 0;
  for (std::size_t c = 0; c < chains; ++c) {
    const auto v = run.series(f, c);
    if (v.size() < 2) {
      total += static_cast<double>(v.size());
      continue;
    }
    total += variance(v) > 0 ? effective_sample_size(v) : static_cast<double>(v.size());
  }
  return total;
}

double run_rhat(const ConditionedRun& run, const std::function<double(const ConditionedSample&)>& f) {
  std::size_t chains = 0;
  for (const auto& s : run.samples) chains = std::max(chains, s.chain + 1);
  if (chains < 2) return std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> all;
  std::size_t len = std::numeric_limits<std::size_t>::max();
  for (std::size_t c = 0; c < chains; ++c) {
    all.push_back(run.series(f, c));
    len = std::min(len, all.back().size());
  }
  if (len < 2) return std::numeric_limits<double>::quiet_NaN();
  for (auto& v : all) v.resize(len);
  return gelman_rubin(all);
}

double annulus_frequency(const ConditionedRun& run) {
  if (run.samples.empty()) return std::numeric_limits<double>::quiet_NaN();
  double k = 0;
  for (const auto& s : run.samples) k += s.in_annulus ? 1 : 0;
  return k / static_cast<double>(run.samples.size());
}

std::vector<double> tail_grid(const std::vector<double>& values, std::size_t points) {
  require(points >= 2, ErrorKind::InvalidParameter, "a grid needs two points");
  double hi = 0;
  for (double v : values)
    if (std::isfinite(v)) hi = std::max(hi, v);
  if (hi <= 0) hi = 1;
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = hi * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

namespace {

// `exceeds(s, x)` decides membership of sample s in the tail event at x;
// samples with a non-finite statistic are skipped.
TailCurve make_tail(const ConditionedRun& run, const std::function<double(const ConditionedSample&)>& stat,
                    const std::function<bool(double, double)>& exceeds, const std::vector<double>& xs,
                    double min_ess) {
  ConditionedRun kept;
  kept.samples.reserve(run.samples.size());
  for (const auto& s : run.samples)
    if (std::isfinite(stat(s))) kept.samples.push_back(s);
  TailCurve t;
  t.n_eff = run_ess(kept, stat);
  if (t.n_eff < min_ess)
    fail(ErrorKind::InsufficientData,
         "effective sample size " + std::to_string(t.n_eff) + " is below " + std::to_string(min_ess));
  const double m = static_cast<double>(kept.samples.size());
  std::vector<double> fx, fy;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double k = 0;
    for (const auto& s : kept.samples) k += exceeds(stat(s), xs[i]) ? 1 : 0;
    TailPoint p{xs[i], k / m, wilson_interval(k / m, t.n_eff), t.n_eff};
    if (!t.points.empty() && p.estimate > t.points.back().estimate) t.monotone = false;
    t.points.push_back(p);
    // Fit window: the tail proper, with enough hits for a stable logarithm.
    if (p.estimate > 0 && p.estimate <= 0.5 && k >= 10) {
      fx.push_back(xs[i]);
      fy.push_back(std::log(p.estimate));
      idx.push_back(i);
    }
  }
  if (fx.size() >= 3) {
    t.fit = fit_line(fx, fy);
    t.fit_lo = idx.front();
    t.fit_hi = idx.back();
    for (std::size_t i = 0; i < fx.size(); ++i) {
      const double r = fy[i] - (t.fit->intercept + t.fit->slope * fx[i]);
      t.residual_signs.push_back(r > 0 ? 1 : (r < 0 ? -1 : 0));
    }
    if (fx.size() >= 4) t.curvature = fit_quadratic(fx, fy);
  }
  return t;
}

}  // namespace

TailCurve theta_tail(const ConditionedRun& run, const std::vector<double>& us, double min_ess) {
  const double n = run.n;
  return make_tail(
      run, [](const ConditionedSample& s) { return s.theta_circuit; },
      [n](double theta, double u) { return theta > u / n; }, us, min_ess);
}

TailCurve exc_tail(const ConditionedRun& run, const std::vector<double>& ts, double min_ess) {
  const double n = run.n;
  return make_tail(
      run, [](const ConditionedSample& s) { return s.exc; },
      [n](double exc, double t) { return exc >= n * t; }, ts, min_ess);
}

TailCurve gd_tail(const ConditionedRun& run, const std::vector<double>& eps, double min_ess) {
  const double n = run.n;
  return make_tail(
      run, [](const ConditionedSample& s) { return s.gd; },
      [n](double gd, double e) { return gd > e * n; }, eps, min_ess);
}

ScalingCheck theta_scaling(const std::vector<int>& ns, const std::vector<std::vector<double>>& thetas, Rng& rng) {
  require(ns.size() >= 3 && ns.size() == thetas.size(), ErrorKind::InvalidParameter,
          "need at least three sizes with samples");
  ScalingCheck c;
  c.ns = ns;
  std::vector<double> logn;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    require(!thetas[i].empty(), ErrorKind::InsufficientData, "no samples for n=" + std::to_string(ns[i]));
    std::vector<double> scaled;
    for (double t : thetas[i]) scaled.push_back(ns[i] * t);
    c.scaled_median.push_back(median(scaled));
    c.ci.push_back(bootstrap_median_interval(scaled, rng));
    logn.push_back(std::log(static_cast<double>(ns[i])));
  }
  c.log_fit = fit_line(logn, c.scaled_median);
  const double growth = c.scaled_median.back() / c.scaled_median.front();
  c.sublinear = growth < static_cast<double>(ns.back()) / ns.front();
  c.log_consistent = true;
  for (std::size_t i = 0; i < ns.size(); ++i)
    c.log_consistent = c.log_consistent && c.ci[i].contains(c.log_fit.intercept + c.log_fit.slope * logn[i]);
  return c;
}

}  // namespace circreg
