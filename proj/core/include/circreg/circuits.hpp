#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <optional>
#include <vector>

#include "circreg/geometry.hpp"
#include "circreg/lattice.hpp"

namespace circreg {

// Self-avoiding closed lattice polygon, stored counterclockwise starting at
// its lexicographically smallest vertex.
class Circuit {
 public:
  static Circuit from_vertices(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t length() const { return vertices_.size(); }
  double area() const { return area_; }
  std::vector<Segment> segments() const;
  SegmentSet segment_set() const;
  EdgeSet edge_set(const LatticeBox& box) const;
  bool has_edge(Point a, Point b) const;
  // Strict interior test; points on the circuit return false.
  bool encloses(Vec2 p) const;
  Circuit translated(Point d) const;
  bool operator==(const Circuit&) const = default;

 private:
  explicit Circuit(std::vector<Point> v, double area) : vertices_(std::move(v)), area_(area) {}
  std::vector<Point> vertices_;
  double area_ = 0.0;
};

double signed_area(const std::vector<Vec2>& polygon);
bool point_in_polygon(const std::vector<Vec2>& polygon, Vec2 p);

enum class CircuitStatus { None, Found, Censored };

struct CircuitResult {
  CircuitStatus status = CircuitStatus::None;
  std::optional<Circuit> circuit;  // also set when censored
  bool found() const { return status == CircuitStatus::Found; }
};

// Gamma_0 via a dual flood fill from outside the box. Circuits that touch the
// box boundary are reported as censored.
CircuitResult outermost_circuit(const BondConfig& cfg);
// Also fills `enclosed` with a per-face mask of the region strictly inside
// Gamma_0 (face (i, j) has lower-left corner (i, j), row-major from (-N, -N)).
CircuitResult outermost_circuit(const BondConfig& cfg, std::vector<std::uint8_t>* enclosed);
// Exhaustive oracle; throws too-large past `max_cycles` enumerated cycles.
CircuitResult brute_force_outermost(const BondConfig& cfg, std::size_t max_cycles = 5'000'000);
// Every open circuit enclosing the origin, for oracle checks.
std::vector<Circuit> enumerate_enclosing_circuits(const BondConfig& cfg, std::size_t max_cycles = 5'000'000);

double interior_area(const Circuit& c);
double area_excess(const Circuit& c, int n);

struct SectorPath {
  Point x, y;
  std::vector<Point> vertices;
};

// Area of the polygon 0, x, path..., y: the bounded part of A_{x,y} cut off by the path.
double captured_area(const SectorPath& path);
double path_diameter(const SectorPath& path);

EdgeSet sector_edges(const LatticeBox& box, const SectorA& sector);

std::optional<SectorPath> outermost_open_path(const BondConfig& cfg, Point x, Point y);
std::optional<SectorPath> brute_force_outermost_open_path(const BondConfig& cfg, Point x, Point y,
                                                          std::size_t max_paths = 5'000'000);

std::optional<Cluster> common_cluster(const BondConfig& cfg, Point x, Point y, const EdgeSet& region);

double fluctuation(const Cluster& gamma, Point x, Point y);

inline constexpr double kDefaultCaptureEps = 0.1;
bool good_area_capture(const SectorPath& path, double eps = kDefaultCaptureEps);

// CSV vertex list plus a plain-text key=value sidecar.
void write_circuit_csv(std::ostream& os, const Circuit& c);
void write_circuit_record(std::ostream& os, const Circuit& c, const std::vector<std::pair<std::string, std::string>>& extra);

}  // namespace circreg
