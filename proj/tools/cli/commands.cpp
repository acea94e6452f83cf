#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "circreg/circuits.hpp"
#include "circreg/conditioning.hpp"
#include "circreg/error.hpp"
#include "circreg/fk.hpp"
#include "circreg/properties.hpp"
#include "circreg/surgery.hpp"
#include "circreg/wulff.hpp"
#include "cli/output.hpp"

namespace circreg::cli {

namespace {

const std::set<std::string> kModelKeys{"N", "beta", "q", "bc"};
const std::set<std::string> kSamplingKeys{"sweeps", "burnin", "blocks", "dynamics"};

std::set<std::string> keys(std::initializer_list<std::set<std::string>> groups, std::set<std::string> extra) {
  for (const auto& g : groups) extra.insert(g.begin(), g.end());
  return extra;
}

std::string point_str(Point p) { return std::to_string(p.x) + ";" + std::to_string(p.y); }

FKParams model(const Config& c, std::uint64_t seed) {
  BoundaryCondition bc;
  try {
    bc = parse_boundary_condition(c.str("bc", "free"));
  } catch (const Error& e) {
    throw UsageError(std::string("config key 'bc': ") + e.what());
  }
  return FKParams(c.real("beta"), c.real("q"), bc, seed);
}

LatticeBox box_of(const Config& c, const std::string& key = "N") {
  const long long n = c.integer(key);
  if (n < 1) throw UsageError("config key '" + key + "' must be >= 1");
  return LatticeBox(static_cast<int>(n));
}

Dynamics dynamics_of(const std::string& key, const std::string& v) {
  if (v == "cluster") return Dynamics::Cluster;
  if (v == "heat_bath") return Dynamics::HeatBath;
  throw UsageError("config key '" + key + "': expected cluster or heat_bath, got '" + v + "'");
}

std::size_t count(const Config& c, const std::string& key, long long fallback) {
  const long long v = c.integer(key, fallback);
  if (v < 0) throw UsageError("config key '" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

SamplingOptions sampling(const Config& c, const std::string& prefix = "") {
  SamplingOptions o;
  o.sweeps = count(c, prefix + "sweeps", static_cast<long long>(o.sweeps));
  o.burnin = count(c, prefix + "burnin", static_cast<long long>(o.burnin));
  o.blocks = count(c, prefix + "blocks", static_cast<long long>(o.blocks));
  o.dynamics = dynamics_of(prefix + "dynamics", c.str(prefix + "dynamics", "cluster"));
  return o;
}

void record_model(Manifest& m, const FKParams& p, const LatticeBox& box) {
  m.params()["N"] = box.half_width();
  m.params()["beta"] = p.beta();
  m.params()["p"] = p.p();
  m.params()["q"] = p.q();
  m.params()["bc"] = to_string(p.bc());
  m.params()["subcritical"] = p.subcritical();
}

void record_sampling(Manifest& m, const SamplingOptions& o) {
  m.params()["sweeps"] = o.sweeps;
  m.params()["burnin"] = o.burnin;
  m.params()["blocks"] = o.blocks;
  m.params()["dynamics"] = o.dynamics == Dynamics::Cluster ? "cluster" : "heat_bath";
}

std::vector<std::pair<Point, Point>> parse_pairs(const Config& c, const std::string& key) {
  std::vector<std::pair<Point, Point>> out;
  std::istringstream is(c.str(key));
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto gt = item.find('>');
    if (gt == std::string::npos) throw UsageError("config key '" + key + "': expected a;b>c;d items");
    try {
      out.push_back({parse_point(item.substr(0, gt)), parse_point(item.substr(gt + 1))});
    } catch (const UsageError& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
  return out;
}

void guard_enumeration(const LatticeBox& box, const RunContext& ctx) {
  if (box.edge_count() > ctx.max_edges_enumerate || box.edge_count() > kMaxEnumerableEdges)
    fail(ErrorKind::TooLarge, "box has " + std::to_string(box.edge_count()) +
                                  " edges; exact enumeration is refused above " +
                                  std::to_string(std::min(ctx.max_edges_enumerate, kMaxEnumerableEdges)));
}

std::vector<double> octant_angles(std::size_t k) {
  std::vector<double> a;
  for (std::size_t i = 0; i < k; ++i) a.push_back(k == 1 ? 0.0 : (kPi / 4) * static_cast<double>(i) / (k - 1));
  return a;
}

struct ShapeRun {
  std::vector<DirectionalSeries> series;
  std::vector<XiEstimate> estimates;
};

ShapeRun measure_shape(const FKParams& params, const LatticeBox& box, const std::vector<double>& angles,
                       const std::vector<int>& ks, int buffer, const SamplingOptions& o) {
  ShapeRun r;
  r.series = measure_directional_series(params, box, angles, ks, buffer, o);
  r.estimates = estimate_xi(r.series);
  return r;
}

std::vector<XiEstimate> read_xi_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config key 'shape_file': cannot read '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line != "theta,xi,stderr") throw UsageError("config key 'shape_file': '" + path + "' is not a wulff.csv");
  std::vector<XiEstimate> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    XiEstimate e;
    char c1 = 0, c2 = 0;
    std::istringstream is(line);
    if (!(is >> e.theta >> c1 >> e.xi >> c2 >> e.stderr_) || c1 != ',' || c2 != ',')
      throw UsageError("config key 'shape_file': malformed row '" + line + "'");
    out.push_back(e);
  }
  return out;
}

void write_tail(const std::filesystem::path& path, const std::string& xname, const TailCurve& t) {
  CsvWriter w(path, {xname, "estimate", "lo", "hi", "n_eff"});
  for (const auto& p : t.points) {
    w << p.x << p.estimate << p.ci.lo << p.ci.hi << p.n_eff;
    w.end_row();
  }
}

nlohmann::json tail_summary(const TailCurve& t) {
  nlohmann::json j;
  j["n_eff"] = t.n_eff;
  j["monotone"] = t.monotone;
  if (t.fit) {
    j["slope"] = t.fit->slope;
    j["slope_stderr"] = t.fit->slope_stderr;
    j["r2"] = t.fit->r2;
    j["window"] = {t.points[t.fit_lo].x, t.points[t.fit_hi].x};
    j["residual_signs"] = t.residual_signs;
  }
  if (t.curvature) {
    j["quadratic_c2"] = t.curvature->c2;
    j["quadratic_c2_stderr"] = t.curvature->c2_stderr;
  }
  return j;
}

}  // namespace

const char* csv_schemas() {
  return R"(CSV schemas (one header row, comma separated, points written as i;j):
  sample         connectivity.csv   x,y,estimate,stderr,n
                 decay.csv          N,logp,stderr          (N is the distance)
                 mixing.csv         distance,statistic,stderr
                 circuit.csv        index,x,y              (+ circuit.txt key=value record)
  wulff          wulff.csv          theta,xi,stderr
                 wulff_series.csv   theta,distance,probability
                 wulff_polygon.csv  index,x,y
  condition      regen.csv          n,area,theta_max,rg_size,maxreg,pair_angle
                 samples.csv        chain,area,exc,gd,cen,theta_circuit,theta_cluster,rg_circuit,rg_cluster,
                                    cluster_subset,searches,search_violations,search_failures,in_annulus
                 tails_theta.csv    u,estimate,lo,hi,n_eff
                 tails_exc.csv      t,estimate,lo,hi,n_eff
                 tails_gd.csv       eps,estimate,lo,hi,n_eff
  surgery-check  surgery.csv        check,value,threshold,pass
  oracle         oracle.csv         dynamics,samples,tv
                 (+ oracle_report.txt key=value, including max_tv)
  geom-test      geom.csv           property,trials,violations
Every run writes manifest.json with parameters, seeds and diagnostics.
Exit status: 0 ok, 1 error, 2 usage, 3 refused by a resource guard, 4 failed check (--strict), 5 insufficient data.)";
}

int run_sample(const RunContext& ctx) {
  const Config& c = ctx.config;
  c.restrict_to(keys({kModelKeys, kSamplingKeys}, {"radii", "pairs"}));
  const LatticeBox box = box_of(c);
  const FKParams params = model(c, ctx.seed);
  const SamplingOptions o = sampling(c);
  const std::vector<int> radii = c.integers("radii", {2, 4, 6, 8});
  Manifest m("sample", ctx.seed);
  record_model(m, params, box);
  record_sampling(m, o);
  m.params()["radii"] = radii;

  std::vector<std::pair<Point, Point>> pairs;
  if (c.has("pairs")) {
    pairs = parse_pairs(c, "pairs");
  } else {
    for (int r : radii) pairs.push_back({{0, 0}, {r, 0}});
  }
  const ConnectivityResult conn = two_point_connectivity(params, box, pairs, o);
  {
    CsvWriter w(ctx.out_dir / "connectivity.csv", {"x", "y", "estimate", "stderr", "n"});
    for (const auto& r : conn.rows) {
      w << point_str(r.x) << point_str(r.y) << r.estimate << r.stderr_ << r.n;
      w.end_row();
    }
    m.add_artifact("connectivity.csv");
  }
  for (const auto& wmsg : conn.warnings) m.warn(wmsg);

  const DecayReport d = decay_and_mixing_check(params.with_seed(ctx.seed + 1), box, radii, o);
  {
    CsvWriter w(ctx.out_dir / "decay.csv", {"N", "logp", "stderr"});
    for (const auto& r : d.decay) {
      w << r.radius << r.logp << r.stderr_;
      w.end_row();
    }
    CsvWriter mx(ctx.out_dir / "mixing.csv", {"distance", "statistic", "stderr"});
    for (const auto& r : d.mixing) {
      mx << r.distance << r.statistic << r.stderr_;
      mx.end_row();
    }
    m.add_artifact("decay.csv");
    m.add_artifact("mixing.csv");
  }
  for (const auto& wmsg : d.warnings) m.warn(wmsg);
  m.diagnostics()["decay_slope"] = d.slope;
  m.diagnostics()["decay_intercept"] = d.intercept;
  m.diagnostics()["decay_r2"] = d.r2;
  const auto [lo, hi] = bounded_energy_bounds(params);
  m.diagnostics()["bounded_energy"] = {lo, hi};

  // One final configuration and its outermost circuit, for inspection.
  Rng rng = Rng::stream(ctx.seed, 2);
  BondConfig cfg(box);
  SamplingOptions last = o;
  last.sweeps = 1;
  run_chain(cfg, params, rng, last, [](const BondConfig&) {});
  const CircuitResult res = outermost_circuit(cfg);
  m.diagnostics()["final_circuit"] = res.status == CircuitStatus::None
                                         ? "none"
                                         : (res.status == CircuitStatus::Found ? "found" : "censored");
  if (res.circuit) {
    std::ofstream csv(ctx.out_dir / "circuit.csv");
    write_circuit_csv(csv, *res.circuit);
    std::ofstream rec(ctx.out_dir / "circuit.txt");
    write_circuit_record(rec, *res.circuit,
                         {{"status", res.status == CircuitStatus::Found ? "found" : "censored"},
                          {"seed", std::to_string(ctx.seed)}});
    m.add_artifact("circuit.csv");
    m.add_artifact("circuit.txt");
  }
  m.write(ctx.out_dir);
  return kExitOk;
}

int run_wulff(const RunContext& ctx) {
  const Config& c = ctx.config;
  c.restrict_to(keys({kModelKeys, kSamplingKeys}, {"angles", "ks", "buffer", "grid"}));
  const LatticeBox box = box_of(c);
  const FKParams params = model(c, ctx.seed);
  const SamplingOptions o = sampling(c);
  const auto angles = octant_angles(count(c, "angles", 3));
  const std::vector<int> ks = c.integers("ks", {2, 3, 4, 5, 6});
  const int buffer = static_cast<int>(c.integer("buffer", box.half_width() / 4));
  const std::size_t grid = count(c, "grid", static_cast<long long>(kDefaultAngularGrid));
  Manifest m("wulff", ctx.seed);
  record_model(m, params, box);
  record_sampling(m, o);
  m.params()["angles"] = angles;
  m.params()["ks"] = ks;
  m.params()["buffer"] = buffer;
  m.params()["grid"] = grid;

  const ShapeRun run = measure_shape(params, box, angles, ks, buffer, o);
  {
    CsvWriter s(ctx.out_dir / "wulff_series.csv", {"theta", "distance", "probability"});
    for (const auto& ser : run.series)
      for (std::size_t i = 0; i < ser.distance.size(); ++i) {
        s << ser.theta << ser.distance[i] << ser.probability[i];
        s.end_row();
      }
    CsvWriter w(ctx.out_dir / "wulff.csv", {"theta", "xi", "stderr"});
    for (const auto& e : run.estimates) {
      w << e.theta << e.xi << e.stderr_;
      w.end_row();
    }
  }
  const WulffShape shape = build_wulff(make_xi_table(run.estimates, grid));
  {
    CsvWriter w(ctx.out_dir / "wulff_polygon.csv", {"index", "x", "y"});
    for (std::size_t i = 0; i < shape.polygon().size(); ++i) {
      w << i << shape.polygon()[i].x << shape.polygon()[i].y;
      w.end_row();
    }
  }
  const ShapeConstants k = choose_constants(shape, grid);
  const ConstantsCheck chk = verify_constants(shape, k, grid);
  for (const char* a : {"wulff_series.csv", "wulff.csv", "wulff_polygon.csv"}) m.add_artifact(a);
  auto& d = m.diagnostics();
  d["lambda"] = shape.lambda();
  d["area"] = shape.area();
  d["diameter"] = shape.diameter();
  d["min_radius"] = shape.min_radius();
  d["max_radius"] = shape.max_radius();
  d["q0"] = k.q0;
  d["c0"] = k.c0;
  d["sup_angle"] = chk.sup_angle;
  d["worst_chord"] = chk.worst_chord;
  d["tangent_condition"] = chk.supang_ok;
  d["chord_condition"] = chk.czercond_ok;
  m.write(ctx.out_dir);
  return ctx.strict && !(chk.supang_ok && chk.czercond_ok) ? kExitCheckFailed : kExitOk;
}

int run_condition(const RunContext& ctx) {
  const Config& c = ctx.config;
  c.restrict_to(keys({kModelKeys},
                     {"n", "event", "burnin", "samples", "thin", "chains", "small_box", "allow_large", "shape_file",
                      "grid", "xi_N", "xi_sweeps", "xi_burnin", "xi_blocks", "xi_dynamics", "xi_angles", "xi_ks",
                      "min_ess", "tail_points"}));
  const LatticeBox box = box_of(c);
  const FKParams params = model(c, ctx.seed);
  ConditionOptions o;
  o.n = static_cast<int>(c.integer("n"));
  if (o.n < 1) throw UsageError("config key 'n' must be >= 1");
  try {
    o.event = parse_event_kind(c.str("event", "area_only"));
  } catch (const Error& e) {
    throw UsageError(std::string("config key 'event': ") + e.what());
  }
  o.burnin = count(c, "burnin", 200);
  o.samples = count(c, "samples", 1000);
  o.thin = count(c, "thin", 5);
  o.chains = ctx.chains > 0 ? ctx.chains : count(c, "chains", 2);
  o.small_box = c.flag("small_box", false);
  if (o.n > 16 && !c.flag("allow_large", false))
    fail(ErrorKind::TooLarge, "n=" + std::to_string(o.n) + " exceeds the desk-scale limit 16; set allow_large=true");
  const std::size_t grid = count(c, "grid", static_cast<long long>(kDefaultAngularGrid));
  const double min_ess = c.real("min_ess", kDefaultMinEss);
  const std::size_t tail_points = count(c, "tail_points", 25);

  Manifest m("condition", ctx.seed);
  record_model(m, params, box);
  m.params()["n"] = o.n;
  m.params()["event"] = to_string(o.event);
  m.params()["burnin"] = o.burnin;
  m.params()["samples"] = o.samples;
  m.params()["thin"] = o.thin;
  m.params()["chains"] = o.chains;
  m.params()["small_box"] = o.small_box;
  m.params()["grid"] = grid;
  m.params()["min_ess"] = min_ess;

  std::vector<XiEstimate> est;
  if (c.has("shape_file")) {
    est = read_xi_csv(c.str("shape_file"));
    m.params()["shape_file"] = c.str("shape_file");
  } else {
    const LatticeBox xbox(static_cast<int>(c.integer("xi_N", 10)));
    SamplingOptions xo = sampling(c, "xi_");
    if (!c.has("xi_sweeps")) xo.sweeps = 400;
    const auto angles = octant_angles(count(c, "xi_angles", 3));
    const std::vector<int> ks = c.integers("xi_ks", {2, 3, 4, 5});
    est = measure_shape(params.with_seed(ctx.seed ^ 0x9e3779b97f4a7c15ULL), xbox, angles, ks,
                        xbox.half_width() / 4, xo)
              .estimates;
    m.params()["xi_N"] = xbox.half_width();
    m.params()["xi_sweeps"] = xo.sweeps;
    m.params()["xi_ks"] = ks;
  }
  const WulffShape shape = build_wulff(make_xi_table(est, grid));
  const ShapeContext sc{shape, choose_constants(shape, grid)};
  m.diagnostics()["q0"] = sc.constants.q0;
  m.diagnostics()["c0"] = sc.constants.c0;

  const ConditionedRun run = restricted_chain(params, box, o, &sc);
  {
    CsvWriter r(ctx.out_dir / "regen.csv", {"n", "area", "theta_max", "rg_size", "maxreg", "pair_angle"});
    CsvWriter s(ctx.out_dir / "samples.csv",
                {"chain", "area", "exc", "gd", "cen", "theta_circuit", "theta_cluster", "rg_circuit", "rg_cluster",
                 "cluster_subset", "searches", "search_violations", "search_failures", "in_annulus"});
    for (const auto& x : run.samples) {
      r << o.n << x.area << x.theta_circuit << x.rg_circuit << x.maxreg << x.pair_angle;
      r.end_row();
      s << x.chain << x.area << x.exc << x.gd << point_str(x.cen) << x.theta_circuit << x.theta_cluster
        << x.rg_circuit << x.rg_cluster << std::string(x.cluster_subset ? "1" : "0") << x.searches
        << x.search_violations << x.search_failures << std::string(x.in_annulus ? "1" : "0");
      s.end_row();
    }
    m.add_artifact("regen.csv");
    m.add_artifact("samples.csv");
  }
  auto& d = m.diagnostics();
  d["proposals"] = run.proposals;
  d["changes"] = run.changes;
  d["rejections"] = run.rejections;
  d["event_violations"] = run.event_violations;
  std::size_t searches = 0, violations = 0, failures = 0, subset = 0;
  for (const auto& x : run.samples) {
    searches += x.searches;
    violations += x.search_violations;
    failures += x.search_failures;
    subset += x.cluster_subset ? 0 : 1;
  }
  d["searches"] = searches;
  d["search_violations"] = violations;
  d["search_failures"] = failures;
  d["cluster_subset_violations"] = subset;
  d["annulus_frequency"] = annulus_frequency(run);
  const auto theta = [](const ConditionedSample& s) { return s.theta_circuit; };
  const auto area = [](const ConditionedSample& s) { return s.area; };
  d["rhat_theta"] = run_rhat(run, theta);
  d["rhat_area"] = run_rhat(run, area);
  for (const auto& wmsg : run.warnings) m.warn(wmsg);

  std::vector<double> us, ts, es;
  for (const auto& x : run.samples) {
    us.push_back(o.n * x.theta_circuit);
    ts.push_back(x.exc / o.n);
    if (std::isfinite(x.gd)) es.push_back(x.gd / o.n);
  }
  bool insufficient = false;
  auto tail = [&](const std::string& file, const std::string& xname, auto fn, const std::vector<double>& values) {
    TailCurve t;
    try {
      t = fn(run, tail_grid(values, tail_points), min_ess);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientData) throw;
      insufficient = true;
      m.warn(file + ": " + e.what());
      t = fn(run, tail_grid(values, tail_points), 0.0);
    }
    write_tail(ctx.out_dir / file, xname, t);
    m.add_artifact(file);
    d[file] = tail_summary(t);
  };
  tail("tails_theta.csv", "u", theta_tail, us);
  tail("tails_exc.csv", "t", exc_tail, ts);
  if (!es.empty()) {
    tail("tails_gd.csv", "eps", gd_tail, es);
  } else {
    m.warn("tails_gd.csv: every sample was censored");
  }
  m.write(ctx.out_dir);
  if (insufficient) {
    std::cerr << "insufficient data: effective sample size below " << min_ess << " (see manifest.json)\n";
    return kExitInsufficient;
  }
  return ctx.strict && (run.event_violations > 0 || violations > 0 || subset > 0) ? kExitCheckFailed : kExitOk;
}

int run_surgery_check(const RunContext& ctx) {
  const Config& c = ctx.config;
  c.restrict_to(keys({kModelKeys}, {"reps", "sweeps", "region", "shift_a", "shift_b", "shift", "regular_reps"}));
  Config cc = c;
  if (!cc.has("N")) cc.set("N", "1");
  const LatticeBox box = box_of(cc);
  guard_enumeration(box, ctx);
  const FKParams params = model(c, ctx.seed);
  const std::size_t reps = count(c, "reps", 100000);
  const std::size_t regular_reps = count(c, "regular_reps", 20000);
  const std::size_t sweeps = count(c, "sweeps", static_cast<long long>(kDefaultResampleSweeps));
  Manifest m("surgery-check", ctx.seed);
  record_model(m, params, box);
  m.params()["reps"] = reps;
  m.params()["regular_reps"] = regular_reps;
  m.params()["sweeps"] = sweeps;

  // Region: "cross" (edges at the origin), "sector:a;b:c;d" or "wedge:a;b:half_width".
  const std::string spec = c.str("region", "cross");
  m.params()["region"] = spec;
  EdgeSet region;
  if (spec == "cross") {
    std::vector<EdgeId> ids;
    for (Point d : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) ids.push_back(box.edge_id({0, 0}, d));
    region = EdgeSet(std::move(ids));
  } else if (spec.rfind("sector:", 0) == 0 || spec.rfind("wedge:", 0) == 0) {
    const auto a = spec.find(':'), b = spec.find(':', a + 1);
    if (b == std::string::npos) throw UsageError("config key 'region': malformed '" + spec + "'");
    const Point x = parse_point(spec.substr(a + 1, b - a - 1));
    if (spec[0] == 's') {
      region = region_edges(box, SectorA(Vec2(x), Vec2(parse_point(spec.substr(b + 1)))));
    } else {
      region = region_edges(box, Wedge::around(Vec2(x), std::stod(spec.substr(b + 1))));
    }
  } else {
    throw UsageError("config key 'region': unknown region '" + spec + "'");
  }

  const ExactDistribution dist = exact_enumerate(box, params);
  Rng rng = Rng::stream(ctx.seed, 0);
  CsvWriter w(ctx.out_dir / "surgery.csv", {"check", "value", "threshold", "pass"});
  bool all = true;
  auto row = [&](const std::string& name, double value, double threshold, bool pass) {
    w << name << value << threshold << std::string(pass ? "1" : "0");
    w.end_row();
    m.diagnostics()[name] = value;
    all = all && pass;
  };
  const Resampler resampler = heat_bath_resampler(sweeps);
  const InvarianceReport inv = storage_replacement_invariance(dist, params, region, reps, rng, 20, resampler);
  row("storage_invariance_p_value", inv.p_value, 0.001, inv.p_value > 0.001);
  row("storage_invariance_tv", inv.tv, std::nan(""), true);
  row("storage_outside_changes", static_cast<double>(inv.outside_changes), 0, inv.outside_changes == 0);

  const BondConfig exterior(box);
  const RegularActionReport reg = regular_action_experiment(exterior, region, params, regular_reps, rng, resampler);
  row("regular_action_correlation", reg.correlation, 0, reg.regular);
  const RegularActionReport neg =
      regular_action_experiment(exterior, region, params, std::min<std::size_t>(regular_reps, 2000), rng,
                                reuse_stored_resampler());
  row("negative_control_detected", neg.correlation, 0, !neg.regular);

  std::vector<EdgeId> a_ids, b_ids;
  const auto a_pairs = c.has("shift_a") ? parse_pairs(c, "shift_a")
                                        : std::vector<std::pair<Point, Point>>{{{0, 0}, {1, 0}}};
  const auto b_pairs = c.has("shift_b") ? parse_pairs(c, "shift_b")
                                        : std::vector<std::pair<Point, Point>>{{{-1, -1}, {0, -1}}};
  for (auto [p, q] : a_pairs) a_ids.push_back(box.edge_id(p, q));
  for (auto [p, q] : b_pairs) b_ids.push_back(box.edge_id(p, q));
  const Point shift = c.point("shift", {0, 1});
  const ShiftLaw law = shift_replacement_law(dist, EdgeSet(a_ids), EdgeSet(b_ids), shift);
  row("shift_max_ratio", law.max_ratio, std::nan(""), std::isfinite(law.max_ratio));
  if (params.q() == 1.0) row("shift_q1_exact", law.max_ratio - 1, 1e-12, law.max_ratio - 1 <= 1e-12);
  m.add_artifact("surgery.csv");
  m.write(ctx.out_dir);
  return ctx.strict && !all ? kExitCheckFailed : kExitOk;
}

int run_oracle(const RunContext& ctx) {
  const Config& c = ctx.config;
  c.restrict_to(keys({kModelKeys}, {"samples", "burnin", "thin", "dynamics"}));
  const LatticeBox box = box_of(c);
  guard_enumeration(box, ctx);
  const FKParams params = model(c, ctx.seed);
  const std::size_t samples = count(c, "samples", 100000);
  const std::size_t burnin = count(c, "burnin", 1000);
  const std::size_t thin = count(c, "thin", 1);
  if (thin < 1) throw UsageError("config key 'thin' must be >= 1");
  const std::string which = c.str("dynamics", "both");
  std::vector<std::pair<std::string, Dynamics>> runs;
  if (which == "both" || which == "heat_bath") runs.push_back({"heat_bath", Dynamics::HeatBath});
  if (which == "both" || which == "cluster") runs.push_back({"cluster", Dynamics::Cluster});
  if (runs.empty()) throw UsageError("config key 'dynamics': expected both, cluster or heat_bath");
  Manifest m("oracle", ctx.seed);
  record_model(m, params, box);
  m.params()["samples"] = samples;
  m.params()["burnin"] = burnin;
  m.params()["thin"] = thin;

  const ExactDistribution dist = exact_enumerate(box, params);
  const double balance = detailed_balance_error(dist, params);
  double max_tv = 0;
  CsvWriter w(ctx.out_dir / "oracle.csv", {"dynamics", "samples", "tv"});
  std::uint64_t stream = 0;
  for (const auto& [name, dyn] : runs) {
    Rng rng = Rng::stream(ctx.seed, stream++);
    const double tv = total_variation(empirical_law(box, params, dyn, samples, burnin, rng, thin), dist.probabilities());
    max_tv = std::max(max_tv, tv);
    w << name << samples << tv;
    w.end_row();
    m.diagnostics()["tv_" + name] = tv;
  }
  {
    std::ofstream rep(ctx.out_dir / "oracle_report.txt");
    rep << "edges=" << box.edge_count() << "\nstates=" << dist.size() << "\nsamples=" << samples
        << "\nmax_tv=" << fmt(max_tv) << "\ndetailed_balance_error=" << fmt(balance) << '\n';
  }
  m.diagnostics()["max_tv"] = max_tv;
  m.diagnostics()["detailed_balance_error"] = balance;
  m.add_artifact("oracle.csv");
  m.add_artifact("oracle_report.txt");
  m.write(ctx.out_dir);
  std::cout << "max_tv=" << fmt(max_tv) << " detailed_balance_error=" << fmt(balance) << '\n';
  return ctx.strict && balance >= 1e-12 ? kExitCheckFailed : kExitOk;
}

int run_geom_test(const RunContext& ctx) {
  const Config& c = ctx.config;
  c.restrict_to({"trials"});
  const std::size_t trials = count(c, "trials", 100000);
  Manifest m("geom-test", ctx.seed);
  m.params()["trials"] = trials;
  Rng rng = Rng::stream(ctx.seed, 0);
  const auto results = geometry_property_suite(rng, trials);
  CsvWriter w(ctx.out_dir / "geom.csv", {"property", "trials", "violations"});
  bool ok = true;
  for (const auto& r : results) {
    w << r.name << r.trials << r.violations;
    w.end_row();
    m.diagnostics()[r.name] = r.violations;
    if (!r.ok()) {
      ok = false;
      m.warn(r.name + ": " + r.first_failure);
    }
  }
  m.add_artifact("geom.csv");
  m.write(ctx.out_dir);
  return ctx.strict && !ok ? kExitCheckFailed : kExitOk;
}

}  // namespace circreg::cli
