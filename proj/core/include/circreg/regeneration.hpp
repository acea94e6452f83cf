#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circreg/circuits.hpp"
#include "circreg/geometry.hpp"
#include "circreg/wulff.hpp"

namespace circreg {

// A finite union of lattice vertices and unit edges given by endpoints.
struct LatticeGraph {
  std::vector<Point> vertices;  // sorted, unique
  std::vector<std::pair<Point, Point>> edges;
  static LatticeGraph from_cluster(const LatticeBox& box, const Cluster& c);
  static LatticeGraph from_path(const std::vector<Point>& path);
  static LatticeGraph from_circuit(const Circuit& c);
  bool contains(Point p) const;
};

// True iff every point of `target` inside W_{v,c0}(0) lies in the forward or
// backward (pi/2 - q0)-cone at v. Segments are tested exactly.
bool is_regeneration_site(const std::vector<Segment>& target, Point v, const ShapeConstants& k);
bool is_regeneration_site(const Circuit& circuit, Point v, const ShapeConstants& k);

enum class RegenMode { Circuit, Cluster };

struct RegenReport {
  std::vector<Point> sites;   // sorted by argument
  std::vector<double> args;   // arg of each site, ascending
  std::vector<double> gaps;   // gaps[i] = ccw gap from site i to site i + 1 (cyclic)
  double theta_max = kTwoPi;
  bool sentinel = true;       // fewer than two sites; theta_max is the 2 pi limit value
};

RegenReport make_regen_report(std::vector<Point> sites);
// Candidate sites are the circuit vertices; cluster mode tests them against
// the whole open cluster of the circuit in `cfg`.
RegenReport rg_set(const Circuit& circuit, const ShapeConstants& k, RegenMode mode, const BondConfig* cfg = nullptr);
double theta_rg_max(std::vector<double> args);

struct CRGCluster {
  std::vector<Point> vertices;
  std::vector<std::pair<Point, Point>> edges;
  std::vector<Point> boundary_sites;
  bool has_x = false;
  bool has_y = false;
  std::optional<Point> f, b;
  Vec2 displacement;
};

struct CRGReport {
  int K = 0;
  std::vector<Point> sites;  // ordered by projection on y - x
  std::vector<CRGCluster> clusters;
  double maxreg = 0.0;
  std::size_t irregular_clusters = 0;  // internal clusters without exactly two boundary sites
};

// Relative pattern phi as unit edges around the origin; nullopt means ALL.
using Pattern = std::optional<std::vector<std::pair<Point, Point>>>;

int default_crossing_radius(Vec2 direction, double delta, int max_k = 6);
CRGReport connection_regeneration(const LatticeGraph& gamma, Point x, Point y, double delta, int K,
                                  const Pattern& phi = std::nullopt);

struct PairPredicates {
  bool well_aligned = false;
  bool outward_facing = false;
};
PairPredicates pair_predicates(const RegenReport& rg, const ShapeConstants& k, Point u, Point v);

struct SweepResult {
  std::optional<std::size_t> next;  // index into rg.sites
  bool good = false;
};
SweepResult sweep(const RegenReport& rg, const ShapeConstants& k, std::size_t from, bool counterclockwise);

struct SearchTrace {
  std::vector<Point> visits;
  std::vector<bool> good;
  bool success = false;
  std::optional<std::pair<Point, Point>> pair;  // ordered by argument
  bool distinct = true;
  bool nested = true;
  std::string failure;
};
SearchTrace search(const RegenReport& rg, const ShapeConstants& k, double u_angle);

std::optional<std::pair<Point, Point>> pertinent_pair(const RegenReport& rg, const ShapeConstants& k);

struct PertinentSearch {
  SearchTrace trace;
  std::optional<std::pair<Point, Point>> pertinent;
};
PertinentSearch search_pertinent_pair(const Circuit& circuit, const ShapeConstants& k, const RegenReport& rg,
                                      double u_angle);

}  // namespace circreg
